#include "ojas/la_core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ojas {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::uint64_t kPowerStartSeed = 0x5eed0f0a5eedULL;

// X^T X represented by whichever Gram matrix is smaller: the d×d primal
// X^T X when d ≤ n, otherwise the n×n dual X X^T. Both share the nonzero
// spectrum; dual eigenvectors u map back to v = X^T u / ‖X^T u‖.
class GramOperator {
public:
    explicit GramOperator(const StreamMatrix& X) : X_(X.matrix()), dual_(X.rows() < X.dim()) {
        if (dual_) {
            gram_ = X_ * X_.transpose();
        } else {
            gram_ = X_.transpose() * X_;
        }
        floor_ = 32.0 * kEps * X.frobenius2();
    }

    bool dual() const { return dual_; }
    std::size_t dim() const { return static_cast<std::size_t>(gram_.rows()); }
    double floor() const { return floor_; }

    // Maps a Gram eigenvector back to R^d (identity in the primal case).
    Vec to_ambient(const Vec& op_vec) const {
        if (!dual_) return op_vec;
        Vec v = X_.transpose() * op_vec;
        return v;
    }

    const Eigen::MatrixXd& gram() const { return gram_; }

private:
    const RowMatrix& X_;
    bool dual_;
    Eigen::MatrixXd gram_;
    double floor_ = 0.0;
};

std::string describe(const char* what, std::size_t iters, double residual, double value) {
    std::ostringstream os;
    os << what << ": no convergence after " << iters << " iterations (residual " << residual
       << ", eigenvalue " << value << ")";
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

UnitVec UnitVec::from_unit(Vec v) {
    const double norm = v.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kTolerance) {
        throw std::invalid_argument("UnitVec::from_unit: vector norm is not 1");
    }
    return UnitVec(std::move(v));
}

UnitVec UnitVec::normalize(const Vec& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::invalid_argument("UnitVec::normalize: zero or non-finite vector");
    }
    return UnitVec(v / norm);
}

UnitVec UnitVec::basis(std::size_t d, std::size_t i) {
    if (i >= d) throw std::invalid_argument("UnitVec::basis: index out of range");
    Vec v = Vec::Zero(static_cast<Eigen::Index>(d));
    v[static_cast<Eigen::Index>(i)] = 1.0;
    return UnitVec(std::move(v));
}

StreamMatrix::StreamMatrix(RowMatrix rows) : m_(std::move(rows)) {
    if (m_.rows() < 1 || m_.cols() < 1) {
        throw std::invalid_argument("StreamMatrix: need n >= 1 rows and d >= 1 columns");
    }
    if (!m_.allFinite()) {
        throw std::invalid_argument("StreamMatrix: non-finite entry");
    }
}

StreamMatrix StreamMatrix::from_rows(const std::vector<Vec>& rows) {
    if (rows.empty()) throw std::invalid_argument("StreamMatrix: no rows");
    const Eigen::Index d = rows.front().size();
    RowMatrix m(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d) throw std::invalid_argument("StreamMatrix: ragged rows");
        m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    }
    return StreamMatrix(std::move(m));
}

double StreamMatrix::max_row_norm2() const { return m_.rowwise().squaredNorm().maxCoeff(); }

// ---------------------------------------------------------------------------

std::uint64_t Prng::mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::size_t Prng::uniform_index(std::size_t k) {
    if (k == 0) throw std::invalid_argument("Prng::uniform_index: empty range");
    return std::uniform_int_distribution<std::size_t>(0, k - 1)(engine_);
}

UnitVec random_unit(std::size_t d, Prng& rng) {
    if (d < 1) throw std::invalid_argument("random_unit: d must be >= 1");
    Vec g(static_cast<Eigen::Index>(d));
    for (;;) {
        for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = rng.normal();
        if (g.squaredNorm() > 0.0) return UnitVec::normalize(g);
    }
}

// ---------------------------------------------------------------------------

std::size_t default_max_iters(std::size_t d) {
    const double dd = static_cast<double>(d);
    return static_cast<std::size_t>(10.0 * dd * std::log(dd)) + 10000;
}

void canonicalize_sign(Vec& v) {
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale == 0.0) return;
    const double cutoff = std::sqrt(kEps) * scale;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > cutoff) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

PowerResult power_iteration(const std::function<void(const Vec&, Vec&)>& apply, std::size_t dim,
                            const Vec* deflate, double tol, std::size_t max_iters, double floor,
                            std::uint64_t start_seed) {
    if (!(tol > 0.0)) throw std::invalid_argument("power_iteration: tol must be positive");
    Prng rng(start_seed);
    Vec v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
    if (deflate != nullptr) v -= deflate->dot(v) * (*deflate);
    v.normalize();

    Vec w(v.size());
    double residual = std::numeric_limits<double>::infinity();
    double theta = 0.0;
    for (std::size_t it = 1; it <= max_iters; ++it) {
        apply(v, w);
        if (deflate != nullptr) w -= deflate->dot(w) * (*deflate);
        theta = v.dot(w);
        residual = (w - theta * v).norm();
        if (residual <= tol * std::abs(theta) + floor) {
            return {std::max(theta, 0.0), v, it};
        }
        const double wn = w.norm();
        if (wn == 0.0) return {0.0, v, it};
        v = w / wn;
        // Re-projection keeps round-off from reintroducing the deflated direction.
        if (deflate != nullptr) {
            v -= deflate->dot(v) * (*deflate);
            v.normalize();
        }
    }
    throw NoConvergence(describe("power_iteration", max_iters, residual, theta));
}

RitzResult subspace_iteration(const Eigen::MatrixXd& M, std::size_t nev, double tol, std::size_t max_iters, double floor,
                              std::uint64_t start_seed) {
    const Eigen::Index m = M.rows();
    if (M.cols() != m || m < 1) throw std::invalid_argument("subspace_iteration: need a nonempty square matrix");
    if (nev < 1 || static_cast<Eigen::Index>(nev) > m) throw std::invalid_argument("subspace_iteration: bad nev");
    if (!(tol > 0.0)) throw std::invalid_argument("subspace_iteration: tol must be positive");

    const Eigen::Index block = std::min<Eigen::Index>(m, static_cast<Eigen::Index>(nev) + 6);
    Prng rng(start_seed);
    Eigen::MatrixXd Q(m, block);
    for (Eigen::Index j = 0; j < block; ++j)
        for (Eigen::Index i = 0; i < m; ++i) Q(i, j) = rng.normal();
    auto orthonormalize = [m, block](const Eigen::MatrixXd& A) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
        return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(m, block));
    };
    Q = orthonormalize(Q);

    RitzResult out;
    double worst = std::numeric_limits<double>::infinity();
    double worst_theta = 0.0;
    for (std::size_t it = 1; it <= max_iters; ++it) {
        const Eigen::MatrixXd Z = M.selfadjointView<Eigen::Upper>() * Q;
        Eigen::MatrixXd H = Q.transpose() * Z;
        H = 0.5 * (H + H.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        // Ascending eigenvalues; reverse so column 0 is the largest Ritz pair.
        const Eigen::MatrixXd W = es.eigenvectors().rowwise().reverse();
        const Vec theta = es.eigenvalues().reverse();
        const Eigen::MatrixXd V = Q * W;
        const Eigen::MatrixXd AV = Z * W;

        bool done = true;
        worst = 0.0;
        for (std::size_t k = 0; k < nev; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            const double res = (AV.col(kk) - theta[kk] * V.col(kk)).norm();
            if (res > tol * std::abs(theta[kk]) + floor) done = false;
            if (res > worst) {
                worst = res;
                worst_theta = theta[kk];
            }
        }
        if (done) {
            out.iterations = it;
            for (std::size_t k = 0; k < nev; ++k) {
                const auto kk = static_cast<Eigen::Index>(k);
                out.values.push_back(std::max(theta[kk], 0.0));
                out.vectors.push_back(V.col(kk).normalized());
            }
            return out;
        }
        Q = orthonormalize(AV);
    }
    throw NoConvergence(describe("subspace_iteration", max_iters, worst, worst_theta));
}

SpectralSummary top_two_eigs(const StreamMatrix& X, const EigenOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("top_two_eigs: tol must be positive");
    if (X.is_zero()) throw ZeroMatrix("top_two_eigs: X is the zero matrix");

    const std::size_t max_iters = opts.max_iters ? opts.max_iters : default_max_iters(X.dim());
    GramOperator op(X);
    const std::size_t nev = std::min<std::size_t>(2, op.dim());
    const RitzResult r = subspace_iteration(op.gram(), nev, opts.tol, max_iters, op.floor(), kPowerStartSeed);
    if (!(r.values[0] > op.floor())) throw ZeroMatrix("top_two_eigs: X^T X has no positive eigenvalue");

    SpectralSummary s;
    s.lambda1 = r.values[0];
    const double second = nev > 1 ? r.values[1] : 0.0;
    s.lambda2 = second <= op.floor() ? 0.0 : std::min(second, s.lambda1);
    Vec vstar = op.to_ambient(r.vectors[0]);
    canonicalize_sign(vstar);
    s.vstar = UnitVec::normalize(vstar);
    s.ratio = s.lambda2 == 0.0 ? std::numeric_limits<double>::infinity() : s.lambda1 / s.lambda2;

    if ((s.lambda1 - s.lambda2) < opts.degenerate_gap * s.lambda1) {
        throw DegenerateGap("top_two_eigs: lambda1 and lambda2 coincide; top eigenvector is ill-defined");
    }
    return s;
}

double deflated_top_eigenvalue(const StreamMatrix& X, const UnitVec& u, const EigenOptions& opts) {
    if (u.dim() != X.dim()) throw std::invalid_argument("deflated_top_eigenvalue: dimension mismatch");
    if (X.is_zero()) return 0.0;
    const std::size_t max_iters = opts.max_iters ? opts.max_iters : default_max_iters(X.dim());
    GramOperator op(X);
    Eigen::MatrixXd M;
    if (op.dual()) {
        // X P X^T = X X^T - w w^T with w = X u.
        const Vec w = X.matrix() * u.vec();
        M = op.gram() - w * w.transpose();
    } else {
        const Eigen::MatrixXd gu = op.gram() * u.vec();
        const double uGu = u.vec().dot(gu.col(0));
        // (I - uu^T) G (I - uu^T) = G - g u^T - u g^T + (u^T G u) u u^T with g = G u.
        M = op.gram() - gu * u.vec().transpose() - u.vec() * gu.transpose() + uGu * u.vec() * u.vec().transpose();
    }
    M = 0.5 * (M + M.transpose()).eval();
    const RitzResult r = subspace_iteration(M, 1, opts.tol, max_iters, op.floor(), kPowerStartSeed + 2);
    return r.values[0] <= op.floor() ? 0.0 : r.values[0];
}

SigmaPair sigma_pair(const StreamMatrix& X, double eta, const SpectralSummary& summary, const EigenOptions& opts) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("sigma_pair: eta must be positive");
    return {eta * summary.lambda1, eta * deflated_top_eigenvalue(X, summary.vstar, opts)};
}

// ---------------------------------------------------------------------------

double sin2_error(const UnitVec& v, const UnitVec& vstar) {
    if (v.dim() != vstar.dim()) throw std::invalid_argument("sin2_error: dimension mismatch");
    const double c = v.vec().dot(vstar.vec());
    return std::clamp(1.0 - c * c, 0.0, 1.0);
}

double quantize(double x, int mantissa_bits) {
    if (mantissa_bits < 1 || mantissa_bits > kFullPrecisionBits) {
        throw std::invalid_argument("quantize: mantissa_bits must be in [1, 52]");
    }
    if (x == 0.0 || !std::isfinite(x)) return x;
    int exponent = 0;
    const double frac = std::frexp(x, &exponent);  // |frac| in [0.5, 1)
    const double scaled = std::ldexp(frac, mantissa_bits + 1);
    return std::ldexp(std::nearbyint(scaled), exponent - mantissa_bits - 1);
}

Vec quantize(const Vec& v, int mantissa_bits) {
    Vec out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = quantize(v[i], mantissa_bits);
    return out;
}

}  // namespace ojas
