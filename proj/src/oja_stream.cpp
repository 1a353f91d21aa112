#include "ojas/oja_stream.hpp"

#include <cmath>
#include <stdexcept>

namespace ojas {

const UnitVec& PcaResult::value() const {
    if (!answer_) throw std::logic_error("PcaResult::value: result is bottom");
    return *answer_;
}

double default_growth_threshold(std::size_t d) { return 10.0 * std::log(static_cast<double>(d)); }

OjaState::OjaState(Vec v0, double eta, int bits) : vhat_(std::move(v0)), eta_(eta), bits_(bits) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("OjaState: eta must be positive");
    if (bits < 1 || bits > kFullPrecisionBits) throw std::invalid_argument("OjaState: mantissa_bits must be in [1, 52]");
    if (bits_ < kFullPrecisionBits) vhat_ = quantize(vhat_, bits_);
}

OjaState OjaState::init(std::size_t d, double eta, int mantissa_bits, Prng& rng) {
    if (d < 1) throw std::invalid_argument("OjaState::init: d must be >= 1");
    return OjaState(random_unit(d, rng).vec(), eta, mantissa_bits);
}

OjaState OjaState::from_initial(const UnitVec& v0, double eta, int mantissa_bits) {
    return OjaState(v0.vec(), eta, mantissa_bits);
}

void OjaState::step(VecRef x) {
    if (x.size() != vhat_.size()) throw std::invalid_argument("OjaState::step: dimension mismatch");
    if (!x.allFinite()) throw std::invalid_argument("OjaState::step: non-finite sample");

    const double a = x.dot(vhat_);
    const double x2 = x.squaredNorm();
    const double v2 = vhat_.squaredNorm();
    // ‖v̂ + ηax‖² = ‖v̂‖² + (2η + η²‖x‖²)a²
    const double growth = (2.0 * eta_ + eta_ * eta_ * x2) * a * a / v2;

    vhat_.noalias() += (eta_ * a) * x;
    vhat_ /= vhat_.norm();
    s_ += 0.5 * std::log1p(growth);
    ++steps_;

    if (bits_ < kFullPrecisionBits) {
        vhat_ = quantize(vhat_, bits_);
        s_ = quantize(s_, bits_);
    }
}

PcaResult oja_finalize(const OjaState& state, std::optional<double> threshold) {
    const double limit = threshold.value_or(default_growth_threshold(state.dim()));
    if (state.log_norm() <= limit) return PcaResult::bottom();
    // Quantized iterates sit within 2^-bits of the sphere; the answer is renormalized.
    return PcaResult::answer(UnitVec::normalize(state.vhat()));
}

namespace {

OjaRun fold(const StreamMatrix& X, OjaState state, const OjaRunOptions& opts) {
    if (state.dim() != X.dim()) throw std::invalid_argument("oja_run: dimension mismatch");
    std::optional<OjaTrace> trace;
    if (opts.record_trace) {
        trace.emplace();
        trace->log_norms.reserve(X.rows() + 1);
        trace->directions.reserve(X.rows() + 1);
        trace->log_norms.push_back(state.log_norm());
        trace->directions.push_back(state.vhat());
    }
    for (std::size_t i = 0; i < X.rows(); ++i) {
        state.step(X.row(i));
        if (trace) {
            trace->log_norms.push_back(state.log_norm());
            trace->directions.push_back(state.vhat());
        }
    }
    PcaResult result = oja_finalize(state, opts.threshold);
    return {std::move(result), std::move(state), std::move(trace)};
}

}  // namespace

OjaRun oja_run(const StreamMatrix& X, const OjaRunOptions& opts, Prng& rng) {
    return fold(X, OjaState::init(X.dim(), opts.eta, opts.mantissa_bits, rng), opts);
}

OjaRun oja_run_from(const StreamMatrix& X, const UnitVec& v0, const OjaRunOptions& opts) {
    return fold(X, OjaState::from_initial(v0, opts.eta, opts.mantissa_bits), opts);
}

}  // namespace ojas
