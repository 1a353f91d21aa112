#pragma once

// Growth-checked Oja iteration with abstention. The whole memory of one run
// is an OjaState: a unit direction, the log-norm accumulator s, and η.

#include "ojas/la_core.hpp"

#include <optional>
#include <vector>

namespace ojas {

/// Either a unit-vector answer or the abstention symbol ⊥ ("bottom").
class PcaResult {
public:
    static PcaResult bottom() { return PcaResult(); }
    static PcaResult answer(UnitVec v) { return PcaResult(std::move(v)); }

    bool is_bottom() const noexcept { return !answer_.has_value(); }
    bool has_answer() const noexcept { return answer_.has_value(); }
    /// Throws std::logic_error on ⊥.
    const UnitVec& value() const;

private:
    PcaResult() = default;
    explicit PcaResult(UnitVec v) : answer_(std::move(v)) {}
    std::optional<UnitVec> answer_;
};

/// Default abstention threshold: 10 ln d.
double default_growth_threshold(std::size_t d);

class OjaState {
public:
    /// v̂₀ uniform on the sphere, s = 0. Requires eta > 0, d ≥ 1,
    /// mantissa_bits in [1, 52].
    static OjaState init(std::size_t d, double eta, int mantissa_bits, Prng& rng);
    /// Start from a given direction (e.g. v̂₀ = v* for the movement monitor).
    static OjaState from_initial(const UnitVec& v0, double eta, int mantissa_bits);

    /// v' = v̂ + η⟨x, v̂⟩x, v̂ ← v'/‖v'‖, s ← s + ln‖v'‖/‖v̂‖. The increment is
    /// evaluated as ½·log1p((2η + η²‖x‖²)⟨x, v̂⟩² / ‖v̂‖²). Throws
    /// std::invalid_argument on a dimension mismatch or non-finite x.
    void step(VecRef x);

    const Vec& vhat() const noexcept { return vhat_; }
    double log_norm() const noexcept { return s_; }
    std::size_t steps() const noexcept { return steps_; }
    double eta() const noexcept { return eta_; }
    int mantissa_bits() const noexcept { return bits_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(vhat_.size()); }

    /// Reals held by the state: v̂ (d), s and η.
    std::size_t space_reals() const noexcept { return dim() + 2; }

private:
    OjaState(Vec v0, double eta, int bits);

    Vec vhat_;
    double s_ = 0.0;
    std::size_t steps_ = 0;
    double eta_;
    int bits_;
};

/// ⊥ iff s ≤ threshold (default 10 ln d), otherwise the current direction.
PcaResult oja_finalize(const OjaState& state, std::optional<double> threshold = std::nullopt);

/// Per-step record (s_i, v̂_i) for i = 0..n; index 0 is the initial state.
struct OjaTrace {
    std::vector<double> log_norms;
    std::vector<Vec> directions;

    std::size_t size() const noexcept { return log_norms.size(); }
};

struct OjaRunOptions {
    double eta = 0.0;
    int mantissa_bits = kFullPrecisionBits;
    bool record_trace = false;
    std::optional<double> threshold;  // defaults to 10 ln d
};

struct OjaRun {
    PcaResult result;
    OjaState state;
    std::optional<OjaTrace> trace;
};

/// Folds `step` over the rows of X in order, then finalizes.
OjaRun oja_run(const StreamMatrix& X, const OjaRunOptions& opts, Prng& rng);
OjaRun oja_run_from(const StreamMatrix& X, const UnitVec& v0, const OjaRunOptions& opts);

}  // namespace ojas
