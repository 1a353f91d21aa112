#include "ojas/baselines.hpp"

#include <cmath>
#include <limits>

namespace ojas {

FdSketch::FdSketch(std::size_t d, std::size_t ell) : ell_(ell) {
    if (d < 1 || ell < 1) throw std::invalid_argument("FdSketch: d and ell must be >= 1");
    buf_ = RowMatrix::Zero(static_cast<Eigen::Index>(2 * ell), static_cast<Eigen::Index>(d));
}

void FdSketch::update(VecRef x) {
    if (static_cast<std::size_t>(x.size()) != dim()) throw std::invalid_argument("FdSketch::update: dimension mismatch");
    buf_.row(static_cast<Eigen::Index>(used_)) = x.transpose();
    ++used_;
    if (used_ == 2 * ell_) shrink();
}

void FdSketch::shrink() {
    const Eigen::Index m = static_cast<Eigen::Index>(used_);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(buf_.topRows(m), Eigen::ComputeThinV);
    const Vec& s = svd.singularValues();
    const Eigen::Index idx = static_cast<Eigen::Index>(ell_) - 1;
    const double delta = idx < s.size() ? s[idx] * s[idx] : 0.0;

    buf_.setZero();
    std::size_t kept = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double s2 = s[i] * s[i] - delta;
        if (s2 <= 0.0) break;
        buf_.row(static_cast<Eigen::Index>(kept)) = std::sqrt(s2) * svd.matrixV().col(i).transpose();
        ++kept;
    }
    used_ = kept;
    shrink_total_ += delta;
    ++shrinks_;
}

UnitVec FdSketch::top_direction() const {
    const Eigen::Index m = static_cast<Eigen::Index>(used_);
    if (m == 0 || buf_.topRows(m).isZero(0.0)) throw ZeroSketch("FdSketch::top_direction: sketch is zero");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(buf_.topRows(m), Eigen::ComputeThinV);
    Vec v = svd.matrixV().col(0);
    canonicalize_sign(v);
    return UnitVec::normalize(v);
}

FdSketch FdSketch::merge(const FdSketch& a, const FdSketch& b) {
    if (a.dim() != b.dim() || a.ell() != b.ell()) throw std::invalid_argument("FdSketch::merge: shape mismatch");
    FdSketch out = a;
    for (std::size_t i = 0; i < b.used_; ++i) out.update(b.buf_.row(static_cast<Eigen::Index>(i)).transpose());
    out.shrink_total_ += b.shrink_total_;
    out.shrinks_ += b.shrinks_;
    return out;
}

Eigen::MatrixXd FdSketch::covariance() const {
    const auto top = buf_.topRows(static_cast<Eigen::Index>(used_));
    return top.transpose() * top;
}

RowMatrix FdSketch::rows() const { return buf_.topRows(static_cast<Eigen::Index>(used_)); }

// ---------------------------------------------------------------------------

CovAccumulator::CovAccumulator(std::size_t d) {
    if (d < 1) throw std::invalid_argument("CovAccumulator: d must be >= 1");
    g_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

void CovAccumulator::update(VecRef x) {
    if (static_cast<std::size_t>(x.size()) != dim()) throw std::invalid_argument("CovAccumulator::update: dimension mismatch");
    g_.noalias() += x * x.transpose();
    frob2_ += x.squaredNorm();
}

UnitVec CovAccumulator::top(const EigenOptions& opts) const {
    if (g_.isZero(0.0)) throw ZeroMatrix("CovAccumulator::top: G is zero");
    const std::size_t max_iters = opts.max_iters ? opts.max_iters : default_max_iters(dim());
    const double floor = 32.0 * std::numeric_limits<double>::epsilon() * frob2_;
    auto apply = [this](const Vec& in, Vec& out) { out.noalias() = g_ * in; };
    PowerResult r = power_iteration(apply, dim(), nullptr, opts.tol, max_iters, floor, 0x5eed0f0a5eedULL);
    if (!(r.value > floor)) throw ZeroMatrix("CovAccumulator::top: G has no positive eigenvalue");
    canonicalize_sign(r.vector);
    return UnitVec::normalize(r.vector);
}

}  // namespace ojas
