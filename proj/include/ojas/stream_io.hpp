#pragma once

// Binary stream files: "OJAS", u32 version 1, u64 n, u64 d, then n·d
// binary64 values row-major, all little-endian.

#include "ojas/la_core.hpp"

#include <cstdint>
#include <fstream>
#include <string>

namespace ojas {

/// Malformed, truncated or unreadable stream file.
class StreamFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kStreamVersion = 1;
inline constexpr std::size_t kStreamHeaderBytes = 4 + 4 + 8 + 8;

class StreamWriter {
public:
    StreamWriter(const std::string& path, std::size_t n, std::size_t d);
    void write_row(VecRef x);
    /// Throws StreamFormatError unless exactly n rows were written.
    void close();

private:
    std::ofstream out_;
    std::string path_;
    std::size_t n_, d_, written_ = 0;
};

/// Reads rows one at a time without materializing the matrix.
class StreamReader {
public:
    explicit StreamReader(const std::string& path);

    std::size_t rows() const noexcept { return n_; }
    std::size_t dim() const noexcept { return d_; }
    /// Fills x with the next row; false after the last row.
    bool next(Vec& x);

private:
    std::ifstream in_;
    std::string path_;
    std::size_t n_ = 0, d_ = 0, read_ = 0;
};

void write_stream(const std::string& path, const StreamMatrix& X);
StreamMatrix read_stream(const std::string& path);

/// "dir/name.ojas" -> "dir/name.truth.json".
std::string sidecar_path(const std::string& stream_path);

}  // namespace ojas
