#pragma once

// One-pass Oja over a geometric grid of learning rates η_i = 2^i, plus the
// running max-norm row x̄, with the smallest-non-⊥ selection rule.

#include "ojas/la_core.hpp"
#include "ojas/oja_stream.hpp"

#include <optional>
#include <vector>

namespace ojas {

/// |i| ≤ 4b + ⌈ln(n d²)⌉ + 2.
int grid_half_width(std::size_t d, std::size_t n, int b);
std::size_t grid_size(std::size_t d, std::size_t n, int b);

/// Smallest integer b such that every nonzero |entry| lies in [2^-b, 2^b]
/// and b > ln(d n).
int minimal_bit_scale(const StreamMatrix& X);

/// Throws std::out_of_range if any nonzero entry of x falls outside [2^-b, 2^b].
void check_bit_range(VecRef x, int b);

enum class GridBranch { none, oja, heavy_row };

struct GridStateOutcome {
    int exponent = 0;  // η = 2^exponent
    double eta = 0.0;
    double log_norm = 0.0;
    bool bottom = true;
};

struct GridDiagnostics {
    std::vector<GridStateOutcome> states;
    std::optional<std::size_t> i_star;  // index into `states`
    GridBranch branch = GridBranch::none;
    double xbar_norm2 = 0.0;
    std::optional<std::size_t> xbar_row;
    std::size_t space_reals_peak = 0;
    int b = 0;
};

class RateGridState {
public:
    /// Requires b ≥ 1 and b > ln(d n); throws std::invalid_argument otherwise.
    /// Each grid state draws its own v̂₀ from `rng.derive(index)`.
    static RateGridState init(std::size_t d, std::size_t n, int b, int mantissa_bits, const Prng& rng);

    /// Advances every grid state; replaces x̄ iff ‖x‖² > ‖x̄‖² (first row wins ties).
    /// Rejects entries outside the b-range.
    void step(VecRef x);

    /// Advances grid states [first, last) only, without touching x̄. Lets
    /// independent workers own disjoint slices of the grid.
    void step_states(VecRef x, std::size_t first, std::size_t last);
    /// Tracks x̄ only.
    void observe_norm(VecRef x);

    std::size_t size() const noexcept { return states_.size(); }
    int exponent(std::size_t i) const { return min_exponent_ + static_cast<int>(i); }
    double eta(std::size_t i) const { return states_[i].eta(); }
    const OjaState& state(std::size_t i) const { return states_[i]; }
    const std::optional<Vec>& xbar() const noexcept { return xbar_; }
    double xbar_norm2() const noexcept { return xbar_norm2_; }
    std::size_t rows_seen() const noexcept { return rows_seen_; }
    int bit_scale() const noexcept { return b_; }
    std::size_t dim() const noexcept { return d_; }

    /// Grid size·(d + 2) + (d + 1) once x̄ is set.
    std::size_t space_reals() const noexcept;

    /// Finalizes each state; i* = smallest index with a non-⊥ result. Returns
    /// x̄/‖x̄‖ when η_{i*}‖x̄‖² ≥ 1, else the i* direction; ⊥ when all abstain.
    PcaResult finalize(GridDiagnostics* diagnostics = nullptr, std::optional<double> threshold = std::nullopt) const;

private:
    RateGridState() = default;

    std::size_t d_ = 0;
    int b_ = 0;
    int min_exponent_ = 0;
    std::vector<OjaState> states_;
    std::optional<Vec> xbar_;
    std::optional<std::size_t> xbar_row_;
    double xbar_norm2_ = 0.0;
    std::size_t rows_seen_ = 0;
};

struct GridRunOptions {
    int b = 0;  // 0 selects minimal_bit_scale(X)
    int mantissa_bits = kFullPrecisionBits;
    std::size_t threads = 1;
    std::optional<double> threshold;
};

struct GridRun {
    PcaResult result;
    GridDiagnostics diagnostics;
};

GridRun grid_run(const StreamMatrix& X, const GridRunOptions& opts, const Prng& rng);

/// Index of a grid rate with η·λ1 ∈ [target, 2·target], if the grid covers one.
std::optional<std::size_t> correct_eta_index(const RateGridState& grid, double lambda1, double target);

}  // namespace ojas
