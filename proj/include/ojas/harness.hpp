#pragma once

// Glue behind the CLI and the acceptance suite: single runs with oracle
// comparison, parameter sweeps, Monte-Carlo suites and check dispatch.

#include "ojas/baselines.hpp"
#include "ojas/generators.hpp"
#include "ojas/lemma_lab.hpp"
#include "ojas/oja_stream.hpp"
#include "ojas/rate_grid.hpp"
#include "ojas/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ojas {

/// Bad user input (flags or config); maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Algo { oja, grid, fd, oracle };
std::string to_string(Algo a);
Algo parse_algo(const std::string& name);

/// min(requested, OJA_THREADS) where requested == 0 means hardware concurrency.
std::size_t thread_cap(std::size_t requested = 0);

/// Oracle-assisted rate: η with η·λ1(XᵀX) = 20 ln d.
double auto_eta(const SpectralSummary& s, std::size_t d);

struct RunConfig {
    Algo algo = Algo::grid;
    std::optional<double> eta;  // oja only; empty selects auto_eta
    int b = 0;                  // grid only; 0 = prescan
    int mantissa_bits = kFullPrecisionBits;
    std::size_t ell = 16;       // fd only
    std::uint64_t seed = 0;
    std::size_t threads = 1;
};

struct OracleDigest {
    std::optional<SpectralSummary> summary;
    std::string error;  // set when the oracle threw
};

OracleDigest run_oracle(const StreamMatrix& X);

struct RunReport {
    Algo algo = Algo::grid;
    std::size_t n = 0, d = 0;
    std::uint64_t seed = 0;
    std::optional<UnitVec> answer;
    std::optional<double> answer_sin2;
    OracleDigest oracle;
    std::optional<double> sigma1, sigma2;
    std::optional<double> eta_chosen;
    std::string eta_source;  // "given", "oracle-assisted", "grid", or empty
    std::size_t space_bytes_peak = 0;
    double wall_ms = 0.0;
    int mantissa_bits = kFullPrecisionBits;
    // grid
    std::optional<int> b;
    std::optional<int> i_star_exponent;
    std::string branch;
    std::size_t grid_size = 0;
    // fd
    std::optional<std::size_t> ell;

    bool bottom() const { return !answer.has_value(); }
};

RunReport run_algorithm(const StreamMatrix& X, const RunConfig& cfg);
/// `timing` adds wall_ms; without it the output is a pure function of the inputs.
Json to_json(const RunReport& r, const Json& spec_echo, bool timing = false);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepConfig {
    std::size_t d = 64;
    std::size_t n = 4096;
    std::vector<double> ratios;
    std::size_t trials = 20;
    std::vector<Algo> algos{Algo::grid};
    std::size_t ell = 16;
    std::uint64_t seed = 1;
    double lambda2 = 1.0;
    int b = 0;
    int mantissa_bits = kFullPrecisionBits;
    std::size_t threads = 0;  // 0 = hardware concurrency, always capped by OJA_THREADS
};

/// Keys: d, n, R (non-empty list), trials, algos, ell, seed, lambda2, b,
/// mantissa_bits. Throws UsageError on anything malformed.
SweepConfig parse_sweep_config(const Json& j);

struct SweepRow {
    double R = 0.0;
    Algo algo = Algo::grid;
    std::size_t trials = 0;
    double median_sin2 = 0.0;  // over answers; NaN when every trial abstained
    double abstention_rate = 0.0;
    std::size_t space_bytes = 0;  // max over trials
    std::vector<double> sin2;     // per answered trial
};

/// Cell (R, trial) uses the same spiked stream for every algorithm.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);
std::string sweep_csv(const std::vector<SweepRow>& rows);
inline constexpr const char* kSweepCsvHeader = "R,algo,trials,median_sin2,abstention_rate,space_bytes";

// ---------------------------------------------------------------------------
// Monte-Carlo suites

struct SoundnessCase {
    std::string label;
    StreamMatrix X;
    double eta = 0.0;
    std::uint64_t seed = 0;
};

/// Mixed spiked, commutative and end-rotation streams, d ≤ 64, n ≤ 8192,
/// η‖x_i‖² ≤ 1 for every row.
std::vector<SoundnessCase> soundness_corpus(std::size_t count, std::uint64_t seed);

struct SoundnessReport {
    std::size_t streams = 0;
    std::size_t answers = 0;
    std::size_t violations = 0;
    double worst_slack = std::numeric_limits<double>::infinity();  // min of bound − error over answers
    std::vector<std::string> failures;
    bool passed() const { return violations == 0; }
};

/// Every answer must satisfy ‖P v̂‖ ≤ √σ₂ + slack + d^{−9}. mantissa_bits = 0
/// selects precision_bits(n, d) per stream.
SoundnessReport abstention_soundness(const std::vector<SoundnessCase>& corpus, int mantissa_bits, double slack);

/// ⌈4 log₂(n d)⌉ capped at 52.
int precision_bits(std::size_t n, std::size_t d);

struct MonitorSuiteReport {
    std::size_t streams = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t inapplicable = 0;
    std::size_t checks = 0;
    double max_violation = -std::numeric_limits<double>::infinity();
    // growth suite only: runs from v* whose s_n fell below σ₁/16
    std::size_t growth_shortfalls = 0;
    bool ok() const { return failed == 0 && inapplicable == 0 && growth_shortfalls == 0; }
};

/// Spiked streams (d, n) with random v̂₀; checks the growth-implies-correctness bound.
MonitorSuiteReport growth_suite(std::size_t streams, std::size_t d, std::size_t n, std::uint64_t seed, double tol = 1e-6);
/// Spiked streams started at v̂₀ = v*; checks the normalized-movement bound.
MonitorSuiteReport movement_suite(std::size_t streams, std::size_t d, std::size_t n, std::uint64_t seed, double tol = 1e-6);

struct AttackReport {
    std::size_t trials = 0;
    std::size_t in_band = 0;
    std::vector<double> deviations;  // ‖P_{e₁} v̂_n‖
    double lo = 0.0, hi = 0.0;
};

/// End-rotation streams (d = 8, n_bulk = 10⁴): Oja from a seeded v̂₀ ends
/// with deviation from e₁ in [0.5√σ₂, 2√σ₂].
AttackReport end_rotation_attack(std::size_t trials, double eta, double sigma2, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Check dispatch

struct CheckRequest {
    std::string lemma;
    std::size_t n = 0, d = 0, p = 16, k = 20;
    std::size_t trials = 0;
    std::size_t fuzz = 1000;
    std::uint64_t seed = 1;
    bool tight = false;
    std::string claim = "gaussianvecnorm";
    double delta = 0.1;
};

struct CheckOutcome {
    bool passed = false;
    Json report;
};

/// Throws UsageError on an unknown lemma or invalid parameters.
CheckOutcome run_check(const CheckRequest& req);

}  // namespace ojas
