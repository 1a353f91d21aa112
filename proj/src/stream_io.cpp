#include "ojas/stream_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>

namespace ojas {

namespace {

constexpr std::array<char, 4> kMagic{'O', 'J', 'A', 'S'};

template <class U>
void put_le(std::ostream& out, U value) {
    std::array<char, sizeof(U)> bytes{};
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xffu);
    out.write(bytes.data(), bytes.size());
}

template <class U>
bool get_le(std::istream& in, U& value) {
    std::array<unsigned char, sizeof(U)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) return false;
    value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
    return true;
}

}  // namespace

StreamWriter::StreamWriter(const std::string& path, std::size_t n, std::size_t d)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), n_(n), d_(d) {
    if (!out_) throw StreamFormatError("cannot open " + path + " for writing");
    out_.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out_, kStreamVersion);
    put_le<std::uint64_t>(out_, n);
    put_le<std::uint64_t>(out_, d);
}

void StreamWriter::write_row(VecRef x) {
    if (static_cast<std::size_t>(x.size()) != d_) throw std::invalid_argument("StreamWriter: row dimension mismatch");
    if (written_ == n_) throw std::logic_error("StreamWriter: more rows than declared");
    for (Eigen::Index j = 0; j < x.size(); ++j) put_le(out_, std::bit_cast<std::uint64_t>(x[j]));
    ++written_;
}

void StreamWriter::close() {
    if (written_ != n_) throw StreamFormatError(path_ + ": wrote " + std::to_string(written_) + " of " + std::to_string(n_) + " rows");
    out_.flush();
    if (!out_) throw StreamFormatError("write failed: " + path_);
    out_.close();
}

StreamReader::StreamReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw StreamFormatError("cannot open " + path);
    std::array<char, 4> magic{};
    std::uint32_t version = 0;
    std::uint64_t n = 0, d = 0;
    if (!in_.read(magic.data(), magic.size()) || magic != kMagic) throw StreamFormatError(path + ": bad magic");
    if (!get_le(in_, version)) throw StreamFormatError(path + ": truncated header");
    if (version != kStreamVersion) throw StreamFormatError(path + ": unsupported version " + std::to_string(version));
    if (!get_le(in_, n) || !get_le(in_, d)) throw StreamFormatError(path + ": truncated header");
    if (n == 0 || d == 0) throw StreamFormatError(path + ": empty stream");

    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (!ec) {
        const long double expected = kStreamHeaderBytes + 8.0L * static_cast<long double>(n) * static_cast<long double>(d);
        if (static_cast<long double>(size) != expected) {
            throw StreamFormatError(path + ": size " + std::to_string(size) + " does not match header");
        }
    }
    n_ = n;
    d_ = d;
}

bool StreamReader::next(Vec& x) {
    if (read_ == n_) return false;
    x.resize(static_cast<Eigen::Index>(d_));
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        std::uint64_t bits = 0;
        if (!get_le(in_, bits)) throw StreamFormatError(path_ + ": truncated at row " + std::to_string(read_));
        x[j] = std::bit_cast<double>(bits);
        if (!std::isfinite(x[j])) throw StreamFormatError(path_ + ": non-finite value at row " + std::to_string(read_));
    }
    ++read_;
    return true;
}

void write_stream(const std::string& path, const StreamMatrix& X) {
    StreamWriter w(path, X.rows(), X.dim());
    for (std::size_t i = 0; i < X.rows(); ++i) w.write_row(X.row(i));
    w.close();
}

StreamMatrix read_stream(const std::string& path) {
    StreamReader r(path);
    RowMatrix m(static_cast<Eigen::Index>(r.rows()), static_cast<Eigen::Index>(r.dim()));
    Vec x;
    for (Eigen::Index i = 0; r.next(x); ++i) m.row(i) = x.transpose();
    return StreamMatrix(std::move(m));
}

std::string sidecar_path(const std::string& stream_path) {
    std::filesystem::path p(stream_path);
    p.replace_extension(".truth.json");
    return p.string();
}

}  // namespace ojas
