#pragma once

// Dense vector primitives, the offline spectral oracle, error metrics,
// seeded randomness and mantissa quantization shared by every module.

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ojas {

using Vec = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VecRef = Eigen::Ref<const Vec>;

// ---------------------------------------------------------------------------
// Errors

class NoConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateGap : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Strong types

/// A vector known to have unit Euclidean norm (to 1e-12 at construction).
class UnitVec {
public:
    static constexpr double kTolerance = 1e-12;

    /// Wraps `v`, which must already be unit length; throws std::invalid_argument otherwise.
    static UnitVec from_unit(Vec v);
    /// Scales `v` to unit length; throws std::invalid_argument if `v` is zero or non-finite.
    static UnitVec normalize(const Vec& v);
    /// Standard basis vector e_i in dimension d.
    static UnitVec basis(std::size_t d, std::size_t i);

    const Vec& vec() const noexcept { return v_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.size()); }
    double operator[](std::size_t i) const { return v_[static_cast<Eigen::Index>(i)]; }

private:
    explicit UnitVec(Vec v) : v_(std::move(v)) {}
    Vec v_;
};

/// The stream X: n rows of dimension d, stored row-major.
class StreamMatrix {
public:
    /// Throws std::invalid_argument when empty or when any entry is non-finite.
    explicit StreamMatrix(RowMatrix rows);
    static StreamMatrix from_rows(const std::vector<Vec>& rows);

    std::size_t rows() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.cols()); }

    VecRef row(std::size_t i) const { return m_.row(static_cast<Eigen::Index>(i)).transpose(); }
    const RowMatrix& matrix() const noexcept { return m_; }

    double max_row_norm2() const;
    double frobenius2() const { return m_.squaredNorm(); }
    bool is_zero() const { return m_.isZero(0.0); }

private:
    RowMatrix m_;
};

// ---------------------------------------------------------------------------
// Randomness

/// Seedable 64-bit generator (mt19937_64). Output is reproducible within one build.
class Prng {
public:
    explicit Prng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    double rademacher() { return (engine_() >> 63) ? 1.0 : -1.0; }
    std::size_t uniform_index(std::size_t k);
    std::uint64_t next_u64() { return engine_(); }

    /// Independent generator for sub-stream `stream`; a pure function of (seed, stream).
    Prng derive(std::uint64_t stream) const { return Prng(mix(seed_ ^ mix(stream + 0x632be59bd9b4e019ULL))); }

    template <class It>
    void shuffle(It first, It last) { std::shuffle(first, last, engine_); }

private:
    static std::uint64_t mix(std::uint64_t x);  // splitmix64 finalizer

    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Gaussian vector normalized to unit length: uniform on S^{d-1}.
UnitVec random_unit(std::size_t d, Prng& rng);

// ---------------------------------------------------------------------------
// Spectral oracle

/// Eigenvalues refer to X^T X (not X^T X / n).
struct SpectralSummary {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    UnitVec vstar = UnitVec::basis(1, 0);
    double ratio = 0.0;  // lambda1 / lambda2, +inf when lambda2 == 0

    /// Eigenvalues of the covariance X^T X / n.
    double lambda1_normalized(std::size_t n) const { return lambda1 / static_cast<double>(n); }
    double lambda2_normalized(std::size_t n) const { return lambda2 / static_cast<double>(n); }
};

struct EigenOptions {
    double tol = 1e-10;          // relative eigen-residual
    std::size_t max_iters = 0;   // 0 selects 10 d ln d + 10^4
    double degenerate_gap = 1e-6;
};

std::size_t default_max_iters(std::size_t d);

/// Top two eigenpairs of X^T X by subspace iteration on the smaller Gram
/// matrix (X^T X or X X^T). v* has its
/// first nonzero coordinate positive.
/// Throws ZeroMatrix, NoConvergence, or DegenerateGap when (λ1-λ2)/λ1 is below
/// `opts.degenerate_gap`.
SpectralSummary top_two_eigs(const StreamMatrix& X, const EigenOptions& opts = {});

/// ‖P X^T X P‖ for P = I - u u^T, by subspace iteration on the deflated Gram matrix.
double deflated_top_eigenvalue(const StreamMatrix& X, const UnitVec& u, const EigenOptions& opts = {});

struct SigmaPair {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
};

/// sigma1 = eta λ1 and sigma2 = eta ‖P X^T X P‖ with P from `summary.vstar`.
SigmaPair sigma_pair(const StreamMatrix& X, double eta, const SpectralSummary& summary,
                     const EigenOptions& opts = {});

/// Result of a single power iteration run.
struct PowerResult {
    double value = 0.0;
    Vec vector;
    std::size_t iterations = 0;
};

/// Power iteration for a symmetric PSD operator given as `apply(in, out)`.
/// When `deflate` is non-null the iterate is kept orthogonal to it. Converges
/// when ‖Av - θv‖ ≤ tol·θ + floor, where `floor` covers round-off in `apply`.
PowerResult power_iteration(const std::function<void(const Vec&, Vec&)>& apply, std::size_t dim,
                            const Vec* deflate, double tol, std::size_t max_iters, double floor,
                            std::uint64_t start_seed);

struct RitzResult {
    std::vector<double> values;  // descending
    std::vector<Vec> vectors;
    std::size_t iterations = 0;
};

/// Block power (subspace) iteration with Rayleigh-Ritz on a dense symmetric
/// PSD matrix M, for the top `nev` pairs. Blocks of nev + 6 columns keep
/// clustered eigenvalues from stalling convergence. Same stopping rule as
/// power_iteration, applied to each of the `nev` Ritz pairs.
RitzResult subspace_iteration(const Eigen::MatrixXd& M, std::size_t nev, double tol, std::size_t max_iters, double floor,
                              std::uint64_t start_seed);

/// Flips sign so that the first coordinate that is nonzero (relative to
/// ‖v‖∞) is positive.
void canonicalize_sign(Vec& v);

// ---------------------------------------------------------------------------
// Metrics and quantization

/// 1 - <v, vstar>^2, clamped to [0, 1].
double sin2_error(const UnitVec& v, const UnitVec& vstar);

/// Rounds to `mantissa_bits` stored fraction bits (the IEEE-754 "mantissa"
/// field, so 52 is the identity on doubles), ties to even.
double quantize(double x, int mantissa_bits);
Vec quantize(const Vec& v, int mantissa_bits);

constexpr int kFullPrecisionBits = 52;

}  // namespace ojas
