#include "ojas/rate_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace ojas {

int grid_half_width(std::size_t d, std::size_t n, int b) {
    const double dd = static_cast<double>(d);
    const double log_term = std::ceil(std::log(static_cast<double>(n) * dd * dd));
    return 4 * b + static_cast<int>(log_term) + 2;
}

std::size_t grid_size(std::size_t d, std::size_t n, int b) {
    return static_cast<std::size_t>(2 * grid_half_width(d, n, b) + 1);
}

namespace {

int min_b_for_entry(double value) {
    const double mag = std::abs(value);
    int b = std::max(static_cast<int>(std::ceil(std::log2(mag))), static_cast<int>(std::ceil(-std::log2(mag))));
    while (mag < std::ldexp(1.0, -b) || mag > std::ldexp(1.0, b)) ++b;
    while (b > 0 && mag >= std::ldexp(1.0, -(b - 1)) && mag <= std::ldexp(1.0, b - 1)) --b;
    return b;
}

int min_b_for_size(std::size_t d, std::size_t n) {
    return static_cast<int>(std::floor(std::log(static_cast<double>(d) * static_cast<double>(n)))) + 1;
}

}  // namespace

int minimal_bit_scale(const StreamMatrix& X) {
    int b = std::max(1, min_b_for_size(X.dim(), X.rows()));
    const auto& m = X.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (m(i, j) != 0.0) b = std::max(b, min_b_for_entry(m(i, j)));
        }
    }
    return b;
}

void check_bit_range(VecRef x, int b) {
    const double lo = std::ldexp(1.0, -b);
    const double hi = std::ldexp(1.0, b);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double mag = std::abs(x[j]);
        if (mag != 0.0 && (mag < lo || mag > hi)) {
            throw std::out_of_range("entry " + std::to_string(x[j]) + " outside the 2^-b..2^b range for b = " +
                                    std::to_string(b));
        }
    }
}

// ---------------------------------------------------------------------------

RateGridState RateGridState::init(std::size_t d, std::size_t n, int b, int mantissa_bits, const Prng& rng) {
    if (d < 1 || n < 1) throw std::invalid_argument("RateGridState: d and n must be >= 1");
    if (b < 1 || static_cast<double>(b) <= std::log(static_cast<double>(d) * static_cast<double>(n))) {
        throw std::invalid_argument("RateGridState: need b >= 1 and b > ln(d n)");
    }
    RateGridState g;
    g.d_ = d;
    g.b_ = b;
    const int half = grid_half_width(d, n, b);
    g.min_exponent_ = -half;
    const std::size_t count = grid_size(d, n, b);
    g.states_.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Prng local = rng.derive(i);
        g.states_.push_back(OjaState::init(d, std::ldexp(1.0, g.min_exponent_ + static_cast<int>(i)), mantissa_bits, local));
    }
    return g;
}

void RateGridState::observe_norm(VecRef x) {
    const double x2 = x.squaredNorm();
    if (!xbar_ || x2 > xbar_norm2_) {
        xbar_ = x;
        xbar_norm2_ = x2;
        xbar_row_ = rows_seen_;
    }
    ++rows_seen_;
}

void RateGridState::step_states(VecRef x, std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) states_[i].step(x);
}

void RateGridState::step(VecRef x) {
    if (static_cast<std::size_t>(x.size()) != d_) throw std::invalid_argument("RateGridState::step: dimension mismatch");
    check_bit_range(x, b_);
    step_states(x, 0, states_.size());
    observe_norm(x);
}

std::size_t RateGridState::space_reals() const noexcept {
    std::size_t total = 0;
    for (const auto& s : states_) total += s.space_reals();
    if (xbar_) total += static_cast<std::size_t>(xbar_->size()) + 1;
    return total;
}

PcaResult RateGridState::finalize(GridDiagnostics* diagnostics, std::optional<double> threshold) const {
    if (rows_seen_ == 0) throw std::logic_error("RateGridState::finalize: no samples processed");
    std::optional<std::size_t> i_star;
    std::vector<GridStateOutcome> outcomes;
    outcomes.reserve(states_.size());
    std::optional<PcaResult> chosen;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        PcaResult r = oja_finalize(states_[i], threshold);
        outcomes.push_back({exponent(i), states_[i].eta(), states_[i].log_norm(), r.is_bottom()});
        if (!i_star && r.has_answer()) {
            i_star = i;
            chosen.emplace(std::move(r));
        }
    }

    GridBranch branch = GridBranch::none;
    PcaResult result = PcaResult::bottom();
    if (i_star) {
        if (states_[*i_star].eta() * xbar_norm2_ >= 1.0) {
            branch = GridBranch::heavy_row;
            result = PcaResult::answer(UnitVec::normalize(*xbar_));
        } else {
            branch = GridBranch::oja;
            result = std::move(*chosen);
        }
    }

    if (diagnostics != nullptr) {
        diagnostics->states = std::move(outcomes);
        diagnostics->i_star = i_star;
        diagnostics->branch = branch;
        diagnostics->xbar_norm2 = xbar_norm2_;
        diagnostics->xbar_row = xbar_row_;
        diagnostics->space_reals_peak = std::max(diagnostics->space_reals_peak, space_reals());
        diagnostics->b = b_;
    }
    return result;
}

std::optional<std::size_t> correct_eta_index(const RateGridState& grid, double lambda1, double target) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = grid.eta(i) * lambda1;
        if (v >= target && v <= 2.0 * target) return i;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

GridRun grid_run(const StreamMatrix& X, const GridRunOptions& opts, const Prng& rng) {
    const int b = opts.b > 0 ? opts.b : minimal_bit_scale(X);
    for (std::size_t i = 0; i < X.rows(); ++i) check_bit_range(X.row(i), b);

    RateGridState grid = RateGridState::init(X.dim(), X.rows(), b, opts.mantissa_bits, rng);
    GridDiagnostics diag;

    const std::size_t workers = std::max<std::size_t>(1, std::min(opts.threads, grid.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < X.rows(); ++i) {
            grid.step_states(X.row(i), 0, grid.size());
            grid.observe_norm(X.row(i));
            diag.space_reals_peak = std::max(diag.space_reals_peak, grid.space_reals());
        }
    } else {
        // Each worker owns a contiguous slice of the grid and consumes the rows in order.
        std::vector<std::thread> pool;
        const std::size_t chunk = (grid.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t first = w * chunk;
            const std::size_t last = std::min(grid.size(), first + chunk);
            if (first >= last) break;
            pool.emplace_back([&grid, &X, first, last] {
                for (std::size_t i = 0; i < X.rows(); ++i) grid.step_states(X.row(i), first, last);
            });
        }
        for (std::size_t i = 0; i < X.rows(); ++i) grid.observe_norm(X.row(i));
        for (auto& t : pool) t.join();
        diag.space_reals_peak = grid.space_reals();
    }

    PcaResult result = grid.finalize(&diag, opts.threshold);
    return {std::move(result), std::move(diag)};
}

}  // namespace ojas
