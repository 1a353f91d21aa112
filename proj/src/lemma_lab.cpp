#include "ojas/lemma_lab.hpp"

#include "ojas/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ojas {

Sides check_prodab(const std::vector<double>& a) {
    double log_b = 0.0;  // ln b_{i−1}
    double lhs = 0.0;
    for (double ai : a) {
        if (!(ai >= 0.0)) throw std::invalid_argument("check_prodab: entries must be nonnegative");
        lhs += ai * std::exp(log_b);
        log_b += ai;
    }
    return {lhs, std::expm1(log_b)};
}

MaxaSides check_maxa(double A, double B, double a, double b) {
    if (!(A > 0.0) || !(B > 0.0)) throw std::invalid_argument("check_maxa: A and B must be positive");
    const double root = std::hypot(A, B);
    MaxaSides out;
    out.lhs = A * a * a + B * a * b;
    out.rhs = 0.5 * (a * a + b * b) * (A + root);
    out.equality_point = 0.5 * (1.0 + A / root);
    return out;
}

namespace {

int ceil_log2(std::size_t n) {
    int k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

}  // namespace

Sides check_matsample(const Eigen::MatrixXd& A) {
    if (A.cols() < 1) throw std::invalid_argument("check_matsample: need at least the zero column");
    if (!A.col(0).isZero(0.0)) throw std::invalid_argument("check_matsample: first column must be zero");
    const auto N = static_cast<std::size_t>(A.cols() - 1);
    if (N == 0 || A.rows() == 0) return {0.0, 0.0};

    const double lhs = A.rightCols(static_cast<Eigen::Index>(N)).cwiseAbs2().rowwise().maxCoeff().sum();

    const int K = ceil_log2(N);
    double total = 0.0;
    for (int k = 0; k <= K; ++k) {
        const std::size_t stride = std::size_t{1} << k;
        std::size_t prev = 0;
        for (std::size_t j = stride; prev < N; j += stride) {
            const std::size_t cur = std::min(j, N);
            total += (A.col(static_cast<Eigen::Index>(cur)) - A.col(static_cast<Eigen::Index>(prev))).squaredNorm();
            prev = cur;
        }
    }
    return {lhs, static_cast<double>(1 + K) * total};
}

double max_subsequence_energy(const Eigen::MatrixXd& A) {
    const Eigen::Index m = A.cols();
    if (m < 2) return 0.0;
    const Eigen::MatrixXd G = A.transpose() * A;
    std::vector<double> best(static_cast<std::size_t>(m), 0.0);
    double overall = 0.0;
    for (Eigen::Index j = 1; j < m; ++j) {
        double bj = 0.0;
        for (Eigen::Index i = 0; i < j; ++i) {
            const double dist = std::max(0.0, G(i, i) + G(j, j) - 2.0 * G(i, j));
            bj = std::max(bj, best[static_cast<std::size_t>(i)] + dist);
        }
        best[static_cast<std::size_t>(j)] = bj;
        overall = std::max(overall, bj);
    }
    return overall;
}

// ---------------------------------------------------------------------------

std::string to_string(MonitorStatus s) {
    switch (s) {
        case MonitorStatus::pass: return "pass";
        case MonitorStatus::fail: return "fail";
        case MonitorStatus::inapplicable: return "inapplicable";
    }
    return "unknown";
}

double perp_norm(const Vec& w, const UnitVec& vstar) {
    const Vec u = w / w.norm();
    return (u - u.dot(vstar.vec()) * vstar.vec()).norm();
}

namespace {

Vec perp(const Vec& w, const UnitVec& vstar) {
    const Vec u = w / w.norm();
    return u - u.dot(vstar.vec()) * vstar.vec();
}

bool rows_conform(const MonitorContext& ctx, MonitorReport& report) {
    if (ctx.X == nullptr) throw std::invalid_argument("monitor: context has no stream");
    const double worst = ctx.eta * ctx.X->max_row_norm2();
    if (worst > 1.0) {
        report.status = MonitorStatus::inapplicable;
        report.note = "eta * max ||x_i||^2 = " + std::to_string(worst) + " > 1";
        return false;
    }
    return true;
}

class Recorder {
public:
    explicit Recorder(MonitorReport& r, double tol) : r_(r), tol_(tol) {}

    void add(std::size_t a, std::size_t b, double lhs, double rhs) {
        ++r_.n_checks;
        const double v = lhs - rhs;
        if (v > tol_) {
            ++r_.violations;
            r_.details.push_back({a, b, lhs, rhs});
        }
        if (v > r_.max_violation) {
            r_.max_violation = v;
            tightest_ = {a, b, lhs, rhs};
        }
    }

    void finish() {
        if (r_.n_checks > 0 && r_.violations == 0) r_.details.push_back(tightest_);
        r_.status = r_.violations == 0 ? MonitorStatus::pass : MonitorStatus::fail;
    }

private:
    MonitorReport& r_;
    double tol_;
    MonitorDetail tightest_;
};

}  // namespace

MonitorReport monitor_growth_correctness(const OjaTrace& trace, const MonitorContext& ctx, double pv0_norm) {
    MonitorReport report;
    if (!rows_conform(ctx, report)) return report;
    const double root = std::sqrt(std::max(ctx.sigma2, 0.0));
    Recorder rec(report, ctx.tol);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        rec.add(i, i, perp_norm(trace.directions[i], ctx.vstar), root + pv0_norm * std::exp(-trace.log_norms[i]));
    }
    rec.finish();
    return report;
}

MonitorReport monitor_movement(const OjaTrace& trace, const MonitorContext& ctx, std::size_t pair_sample, Prng& rng) {
    MonitorReport report;
    if (!rows_conform(ctx, report)) return report;
    if (trace.size() == 0) throw std::invalid_argument("monitor_movement: empty trace");
    const double pv0 = perp_norm(trace.directions[0], ctx.vstar);
    if (pv0 > 1e-9) {
        report.status = MonitorStatus::inapplicable;
        report.note = "trace does not start at v* (||P v0|| = " + std::to_string(pv0) + ")";
        return report;
    }

    std::vector<Vec> p;
    p.reserve(trace.size());
    for (const auto& v : trace.directions) p.push_back(perp(v, ctx.vstar));

    Recorder rec(report, ctx.tol);
    auto check = [&](std::size_t a, std::size_t b) {
        rec.add(a, b, (p[b] - p[a]).squaredNorm(), 4.0 * ctx.sigma2 * (trace.log_norms[b] - trace.log_norms[a]));
    };
    for (std::size_t i = 1; i < trace.size(); ++i) check(i - 1, i);
    if (trace.size() >= 2) {
        for (std::size_t t = 0; t < pair_sample; ++t) {
            std::size_t a = rng.uniform_index(trace.size());
            std::size_t b = rng.uniform_index(trace.size());
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            check(a, b);
        }
    }
    rec.finish();
    return report;
}

// ---------------------------------------------------------------------------

std::string to_string(StatClaim c) {
    switch (c) {
        case StatClaim::gaussianvecnorm: return "gaussianvecnorm";
        case StatClaim::subgamma_sum: return "subgamma_sum";
        case StatClaim::rudelson_opnorm: return "rudelson_opnorm";
    }
    return "unknown";
}

StatClaim parse_stat_claim(const std::string& name) {
    if (name == "gaussianvecnorm") return StatClaim::gaussianvecnorm;
    if (name == "subgamma_sum" || name == "subgamma") return StatClaim::subgamma_sum;
    if (name == "rudelson_opnorm" || name == "rudelson") return StatClaim::rudelson_opnorm;
    throw std::invalid_argument("unknown stat claim: " + name);
}

namespace {

RowMatrix random_signs(std::size_t rows, std::size_t cols, Prng& rng) {
    RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.rademacher();
    return m;
}

double spectral_norm(const RowMatrix& m) {
    const Eigen::MatrixXd g = m.transpose() * m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

StatReport stat_check(StatClaim claim, const StatParams& params, std::size_t trials, Prng& rng) {
    if (trials < 100) throw std::invalid_argument("stat_check: need at least 100 trials");
    if (!(params.delta > 0.0) || !(params.delta < 1.0)) throw std::invalid_argument("stat_check: delta must be in (0, 1)");
    StatReport r;
    r.claim = claim;
    r.trials = trials;
    switch (claim) {
        case StatClaim::gaussianvecnorm: {
            r.claimed = params.delta;
            const double cut = params.delta * std::sqrt(std::numbers::pi / 2.0);
            for (std::size_t t = 0; t < trials; ++t) {
                if (std::abs(rng.normal()) < cut) ++r.failures;
            }
            break;
        }
        case StatClaim::subgamma_sum: {
            r.claimed = params.delta;
            const double n = static_cast<double>(params.n);
            const double l = std::log(1.0 / params.delta);
            const double band = params.constant * (std::sqrt(n * l) + l);
            const Vec u = random_unit(params.d, rng).vec();
            for (std::size_t t = 0; t < trials; ++t) {
                const RowMatrix X = random_signs(params.n, params.d, rng);
                if (std::abs((X * u).squaredNorm() - n) > band) ++r.failures;
            }
            break;
        }
        case StatClaim::rudelson_opnorm: {
            r.claimed = params.delta;
            const std::size_t cols = params.d ? params.d : params.n;
            const double cut = params.norm_factor * std::sqrt(static_cast<double>(std::max(params.n, cols)));
            for (std::size_t t = 0; t < trials; ++t) {
                if (spectral_norm(random_signs(params.n, cols, rng)) >= cut) ++r.failures;
            }
            break;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t default_required(std::size_t trials) { return (trials * 9 + 9) / 10; }

}  // namespace

BandReport pdup_band(std::size_t d, std::size_t k, std::size_t trials, std::uint64_t seed, double c,
                     std::size_t required) {
    BandReport r;
    r.trials = trials;
    r.required = required ? required : default_required(trials);
    const std::size_t n = default_partial_duplicate_rows(d, k);
    const double kk = static_cast<double>(k);
    for (std::size_t t = 0; t < trials; ++t) {
        Generated g = gen_partial_duplicate(d, n, k, seed + t);
        const SpectralSummary s = top_two_eigs(g.X);
        const double corr = std::abs(s.vstar.vec().dot(*g.truth.y)) * kk / std::sqrt(static_cast<double>(d));
        r.primary.push_back(s.ratio);
        r.secondary.push_back(corr);
        if (s.ratio >= kk / 20.0 && corr >= c) ++r.successes;
    }
    return r;
}

BandReport dp_band(std::size_t d, std::size_t p, std::size_t trials, std::uint64_t seed, std::size_t required) {
    BandReport r;
    r.trials = trials;
    r.required = required ? required : default_required(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        Generated g = gen_mergeable_hard(d, p, seed + t);
        const Vec& v = g.truth.planted->vec();
        const Eigen::MatrixXd G = g.X.matrix().transpose() * g.X.matrix();
        const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(G.rows(), G.cols()) - v * v.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> deflated(P * G * P, Eigen::EigenvaluesOnly);
        const double ratio = v.dot(G * v) / deflated.eigenvalues().maxCoeff();

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(G);
        const Vec top = full.eigenvectors().col(G.cols() - 1);
        const double c = top.dot(v);
        r.primary.push_back(ratio);
        r.secondary.push_back(std::clamp(1.0 - c * c, 0.0, 1.0));
        if (ratio >= 0.1 * static_cast<double>(p)) ++r.successes;
    }
    return r;
}

// ---------------------------------------------------------------------------

FuzzReport fuzz_prodab(std::size_t cases, Prng& rng) {
    FuzzReport r;
    for (std::size_t t = 0; t < cases; ++t) {
        const std::size_t len = rng.uniform_index(65);
        const double scale = rng.uniform();
        std::vector<double> a(len);
        for (auto& x : a) x = scale * rng.uniform();
        const Sides s = check_prodab(a);
        ++r.cases;
        const double slack = s.rhs - s.lhs;
        r.min_slack = std::min(r.min_slack, slack);
        if (!s.holds(1e-9 * std::max(1.0, s.rhs))) ++r.failures;
    }
    return r;
}

FuzzReport fuzz_maxa(std::size_t cases, Prng& rng) {
    FuzzReport r;
    for (std::size_t t = 0; t < cases; ++t) {
        const double A = 1e-3 + 10.0 * rng.uniform();
        const double B = 1e-3 + 10.0 * rng.uniform();
        const MaxaSides s = check_maxa(A, B, rng.normal(), rng.normal());
        ++r.cases;
        r.min_slack = std::min(r.min_slack, s.rhs - s.lhs);
        if (s.lhs > s.rhs + 1e-12 * std::max(1.0, std::abs(s.rhs))) ++r.failures;
    }
    return r;
}

FuzzReport fuzz_matsample(std::size_t cases, Prng& rng, std::size_t max_cols, std::size_t max_rows) {
    FuzzReport r;
    for (std::size_t t = 0; t < cases; ++t) {
        const std::size_t cols = 1 + rng.uniform_index(max_cols);
        const std::size_t rows = 1 + rng.uniform_index(max_rows);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols + 1));
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            for (Eigen::Index j = 1; j < A.cols(); ++j) A(i, j) = rng.normal();
        const Sides s = check_matsample(A);
        ++r.cases;
        r.min_slack = std::min(r.min_slack, s.rhs - s.lhs);
        if (!s.holds(1e-9 * std::max(1.0, s.rhs))) ++r.failures;
    }
    return r;
}

}  // namespace ojas
