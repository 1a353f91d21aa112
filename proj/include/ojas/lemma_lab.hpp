#pragma once

// Executable checkers for the analysis inequalities: algebraic and
// combinatorial verifiers, runtime monitors over Oja traces, and Monte-Carlo
// frequency checks. Every checker returns both sides of its inequality.

#include "ojas/la_core.hpp"
#include "ojas/oja_stream.hpp"

#include <limits>
#include <string>
#include <vector>

namespace ojas {

struct Sides {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds(double tol) const { return lhs <= rhs + tol; }
};

/// b_i = exp(a_1 + … + a_i); returns (∑ a_i b_{i−1}, b_n − 1). Requires a_i ≥ 0.
Sides check_prodab(const std::vector<double>& a);

struct MaxaSides {
    double lhs = 0.0;
    double rhs = 0.0;
    double equality_point = 0.0;  // the a²/(a²+b²) attaining rhs
};

/// A a² + B a b versus (a²+b²)/2 · (A + √(A²+B²)). Requires A, B > 0.
MaxaSides check_maxa(double A, double B, double a, double b);

/// ∑_i max_j A_ij² versus (1 + ⌈log₂ N⌉) ∑_k ∑_i ‖b^{(k)}_i − b^{(k)}_{i−1}‖², where
/// column 0 is zero, b^{(k)}_i is column 2^k·i while that is ≤ N, and the
/// last column N closes any partial block. Throws std::invalid_argument when
/// column 0 is not exactly zero.
Sides check_matsample(const Eigen::MatrixXd& A);

/// max over column subsequences 0 ≤ j_0 < … < j_m of ∑ ‖A_{j_t} − A_{j_{t−1}}‖².
double max_subsequence_energy(const Eigen::MatrixXd& A);

// ---------------------------------------------------------------------------
// Trace monitors

enum class MonitorStatus { pass, fail, inapplicable };
std::string to_string(MonitorStatus s);

struct MonitorDetail {
    std::size_t a = 0;  // step (or first index of a pair)
    std::size_t b = 0;  // second index of a pair; equals a for single-step checks
    double lhs = 0.0;
    double rhs = 0.0;
};

struct MonitorReport {
    MonitorStatus status = MonitorStatus::pass;
    double max_violation = -std::numeric_limits<double>::infinity();  // max of lhs − rhs
    std::size_t n_checks = 0;
    std::size_t violations = 0;
    std::vector<MonitorDetail> details;  // every violation plus the tightest check
    std::string note;

    bool passed() const { return status == MonitorStatus::pass; }
};

/// Context shared by the monitors: the stream, its rate, and the oracle's v*
/// and σ₂ over the full stream.
struct MonitorContext {
    const StreamMatrix* X = nullptr;
    double eta = 0.0;
    UnitVec vstar = UnitVec::basis(1, 0);
    double sigma2 = 0.0;
    double tol = 1e-6;
};

/// ‖P v̂_i‖ ≤ √σ₂ + ‖P v₀‖·e^{−s_i} at every step. Inapplicable when some
/// row has η‖x_i‖² > 1.
MonitorReport monitor_growth_correctness(const OjaTrace& trace, const MonitorContext& ctx, double pv0_norm);

/// ‖P v̂_b − P v̂_a‖² ≤ 4σ₂(s_b − s_a) over all adjacent pairs plus
/// `pair_sample` random pairs a < b. Inapplicable unless ‖P v̂₀‖ ≤ 1e−9 and
/// η‖x_i‖² ≤ 1 for every row.
MonitorReport monitor_movement(const OjaTrace& trace, const MonitorContext& ctx, std::size_t pair_sample, Prng& rng);

/// ‖P w‖ for w normalized, P = I − v*v*ᵀ.
double perp_norm(const Vec& w, const UnitVec& vstar);

// ---------------------------------------------------------------------------
// Monte-Carlo frequency checks

enum class StatClaim { gaussianvecnorm, subgamma_sum, rudelson_opnorm };
std::string to_string(StatClaim c);
StatClaim parse_stat_claim(const std::string& name);

struct StatParams {
    std::size_t n = 256;   // rows (subgamma_sum, rudelson_opnorm)
    std::size_t d = 64;    // columns; rudelson_opnorm uses a square n×n matrix when d == 0
    double delta = 0.1;
    double constant = 10.0;  // subgamma_sum band constant
    double norm_factor = 3.0;  // rudelson_opnorm threshold factor on √N
};

struct StatReport {
    StatClaim claim = StatClaim::gaussianvecnorm;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double claimed = 0.0;  // claimed failure probability
    double rate() const { return trials ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0; }
    bool passed() const { return rate() <= 1.5 * claimed; }
};

/// - gaussianvecnorm: a ~ N(0,1), u = e₁, v = 0; failure when ‖au + v‖ < δ√(π/2)‖u‖.
/// - subgamma_sum: X uniform ±1 (n×d), fixed random unit u; failure when
///   |‖Xu‖² − n| > constant·(√(n ln(1/δ)) + ln(1/δ)).
/// - rudelson_opnorm: X uniform ±1 (n×n); failure when ‖X‖ ≥ norm_factor·√n.
/// Requires trials ≥ 100.
StatReport stat_check(StatClaim claim, const StatParams& params, std::size_t trials, Prng& rng);

// ---------------------------------------------------------------------------
// Lower-bound instance spectra

struct BandReport {
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t required = 0;
    std::vector<double> primary;    // per-trial statistic compared to its bound
    std::vector<double> secondary;  // second statistic where the check has one
    bool passed() const { return successes >= required; }
};

/// PartialDuplicate with n = ⌊d/(9k)⌋: success when the oracle ratio is ≥ k/20
/// and |⟨v*, y⟩|·k/√d ≥ c. primary = ratio, secondary = |⟨v*, y⟩|·k/√d.
BandReport pdup_band(std::size_t d, std::size_t k, std::size_t trials, std::uint64_t seed, double c = 0.2,
                     std::size_t required = 0);

/// D_p: success when ‖X v̂*‖² / max_{v′⊥v*} ‖X v′‖² ≥ 0.1p. primary = that
/// ratio, secondary = sin²(v̂*, oracle v*).
BandReport dp_band(std::size_t d, std::size_t p, std::size_t trials, std::uint64_t seed, std::size_t required = 0);

// ---------------------------------------------------------------------------
// Property fuzzers

struct FuzzReport {
    std::size_t cases = 0;
    std::size_t failures = 0;
    double min_slack = std::numeric_limits<double>::infinity();  // min of rhs − lhs
    bool passed() const { return failures == 0; }
};

FuzzReport fuzz_prodab(std::size_t cases, Prng& rng);
FuzzReport fuzz_maxa(std::size_t cases, Prng& rng);
/// Random matrices with up to `max_cols` columns after the zero column and up to `max_rows` rows.
FuzzReport fuzz_matsample(std::size_t cases, Prng& rng, std::size_t max_cols = 256, std::size_t max_rows = 64);

}  // namespace ojas
