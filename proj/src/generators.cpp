#include "ojas/generators.hpp"

#include <cmath>
#include <numeric>

namespace ojas {

std::string to_string(StreamKind kind) {
    switch (kind) {
        case StreamKind::spiked: return "spiked";
        case StreamKind::commutative: return "commutative";
        case StreamKind::end_rotation: return "end_rotation";
        case StreamKind::partial_duplicate: return "partial_duplicate";
        case StreamKind::mergeable_hard: return "mergeable_hard";
        case StreamKind::matsample_tight: return "matsample_tight";
    }
    return "unknown";
}

StreamKind parse_stream_kind(const std::string& name) {
    if (name == "spiked") return StreamKind::spiked;
    if (name == "commutative") return StreamKind::commutative;
    if (name == "end_rotation" || name == "end-rotation") return StreamKind::end_rotation;
    if (name == "partial_duplicate" || name == "pdup") return StreamKind::partial_duplicate;
    if (name == "mergeable_hard" || name == "dp") return StreamKind::mergeable_hard;
    if (name == "matsample_tight" || name == "matsample") return StreamKind::matsample_tight;
    throw std::invalid_argument("unknown stream kind: " + name);
}

Generated gen_spiked(std::size_t d, std::size_t n, double lambda1_over_n, double lambda2_over_n, std::uint64_t seed) {
    if (d < 1 || n < 1) throw std::invalid_argument("gen_spiked: d and n must be >= 1");
    if (!(lambda2_over_n >= 0.0) || !(lambda1_over_n > lambda2_over_n)) {
        throw std::invalid_argument("gen_spiked: need lambda1_over_n > lambda2_over_n >= 0");
    }
    Prng rng(seed);
    UnitVec vstar = random_unit(d, rng);
    const Vec& v = vstar.vec();
    const double s1 = std::sqrt(lambda1_over_n);
    const double s2 = std::sqrt(lambda2_over_n);

    RowMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    Vec g(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.size(); ++j) g[j] = rng.normal();
        const double along = g.dot(v);
        m.row(i) = (s1 * along * v + s2 * (g - along * v)).transpose();
    }
    GroundTruth truth;
    truth.planted = std::move(vstar);
    return {StreamMatrix(std::move(m)), std::move(truth)};
}

StreamMatrix gen_commutative(std::size_t d, const std::vector<std::size_t>& counts) {
    if (counts.size() != d) throw std::invalid_argument("gen_commutative: counts must have d entries");
    const std::size_t n = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    if (n == 0) throw std::invalid_argument("gen_commutative: counts sum to zero");

    RowMatrix m = RowMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::vector<std::size_t> left = counts;
    Eigen::Index row = 0;
    while (row < m.rows()) {
        for (std::size_t j = 0; j < d; ++j) {
            if (left[j] == 0) continue;
            m(row++, static_cast<Eigen::Index>(j)) = 1.0;
            --left[j];
        }
    }
    return StreamMatrix(std::move(m));
}

Generated gen_end_rotation(std::size_t d, std::size_t n_bulk, double eta, double sigma2_target, std::uint64_t seed) {
    if (d < 2) throw std::invalid_argument("gen_end_rotation: d must be >= 2");
    if (!(eta > 0.0) || !(sigma2_target >= 0.0) || !(sigma2_target < 1.0)) {
        throw std::invalid_argument("gen_end_rotation: need eta > 0 and 0 <= sigma2_target < 1");
    }
    const auto tail = static_cast<std::size_t>(std::ceil(1.0 / eta));
    if (tail > n_bulk) throw std::invalid_argument("gen_end_rotation: need ceil(1/eta) <= n_bulk");

    Prng rng(seed);
    Vec vprime = Vec::Zero(static_cast<Eigen::Index>(d));
    vprime.tail(static_cast<Eigen::Index>(d - 1)) = random_unit(d - 1, rng).vec();

    const Vec e1 = UnitVec::basis(d, 0).vec();
    const Vec tilted = e1 + std::sqrt(sigma2_target) * vprime;
    RowMatrix m(static_cast<Eigen::Index>(n_bulk + tail), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n_bulk; ++i) m.row(static_cast<Eigen::Index>(i)) = e1.transpose();
    for (std::size_t i = 0; i < tail; ++i) m.row(static_cast<Eigen::Index>(n_bulk + i)) = tilted.transpose();

    // XᵀX lives in span{e₁, v′}: [[n_bulk + m, m√σ₂], [m√σ₂, mσ₂]].
    const double mt = static_cast<double>(tail);
    const double a = static_cast<double>(n_bulk) + mt;
    const double c = mt * std::sqrt(sigma2_target);
    const double b = mt * sigma2_target;
    const double theta = 0.5 * std::atan2(2.0 * c, a - b);

    GroundTruth truth;
    truth.planted = UnitVec::normalize(std::cos(theta) * e1 + std::sin(theta) * vprime);
    truth.tail_rows = tail;
    return {StreamMatrix(std::move(m)), std::move(truth)};
}

std::size_t default_partial_duplicate_rows(std::size_t d, std::size_t k) {
    if (k == 0) throw std::invalid_argument("partial_duplicate: k must be >= 1");
    return d / (9 * k);
}

Generated gen_partial_duplicate(std::size_t d, std::size_t n, std::size_t k, std::uint64_t seed, bool shuffle) {
    if (d < 2 || d % 2 != 0) throw std::invalid_argument("gen_partial_duplicate: d must be even and >= 2");
    if (k < 1) throw std::invalid_argument("gen_partial_duplicate: k must be >= 1");
    Prng rng(seed);
    const auto dd = static_cast<Eigen::Index>(d);
    const Eigen::Index half = dd / 2;

    Vec x = Vec::Zero(dd);
    Vec y = Vec::Zero(dd);
    for (Eigen::Index j = 0; j < half; ++j) x[j] = rng.rademacher();
    for (Eigen::Index j = half; j < dd; ++j) y[j] = rng.rademacher();

    RowMatrix m(static_cast<Eigen::Index>(k + n + 1), dd);
    m.row(0) = (x + y).transpose();
    for (std::size_t i = 1; i <= k; ++i) m.row(static_cast<Eigen::Index>(i)) = x.transpose();
    for (std::size_t i = k + 1; i < k + n + 1; ++i) {
        for (Eigen::Index j = 0; j < dd; ++j) m(static_cast<Eigen::Index>(i), j) = rng.rademacher();
    }
    if (shuffle) {
        std::vector<Eigen::Index> order(static_cast<std::size_t>(m.rows()));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        rng.shuffle(order.begin(), order.end());
        RowMatrix p(m.rows(), m.cols());
        for (std::size_t i = 0; i < order.size(); ++i) p.row(static_cast<Eigen::Index>(i)) = m.row(order[i]);
        m = std::move(p);
    }

    GroundTruth truth;
    truth.planted = UnitVec::normalize(x);
    truth.x = std::move(x);
    truth.y = std::move(y);
    return {StreamMatrix(std::move(m)), std::move(truth)};
}

Generated gen_mergeable_hard(std::size_t d, std::size_t p, std::uint64_t seed) {
    if (p < 2 || d == 0 || d % p != 0) throw std::invalid_argument("gen_mergeable_hard: need p >= 2 dividing d");
    Prng rng(seed);
    const std::size_t k = d / p;
    const auto dd = static_cast<Eigen::Index>(d);

    Vec vstar(dd);
    for (Eigen::Index j = 0; j < dd; ++j) vstar[j] = rng.normal();

    GroundTruth truth;
    truth.block_rows = k;
    RowMatrix m(dd, dd);
    for (std::size_t block = 0; block < p; ++block) {
        const std::size_t jstar = rng.uniform_index(k);
        truth.j_star.push_back(jstar);
        for (std::size_t j = 0; j < k; ++j) {
            const auto row = static_cast<Eigen::Index>(block * k + j);
            if (j == jstar) {
                m.row(row) = vstar.transpose();
            } else {
                for (Eigen::Index c = 0; c < dd; ++c) m(row, c) = rng.normal();
            }
        }
    }
    truth.planted = UnitVec::normalize(vstar);
    return {StreamMatrix(std::move(m)), std::move(truth)};
}

Eigen::MatrixXd gen_matsample_tight(std::size_t n) {
    if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("gen_matsample_tight: n must be a power of two >= 2");
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nn, nn + 1);
    for (Eigen::Index i = 0; i < nn; ++i) {
        for (Eigen::Index j = 0; j < nn; ++j) {
            a(i, j + 1) = std::log(static_cast<double>(n) / (1.0 + static_cast<double>(std::abs(i - j))));
        }
    }
    return a;
}

Generated generate(const StreamSpec& spec) {
    switch (spec.kind) {
        case StreamKind::spiked:
            return gen_spiked(spec.d, spec.n, spec.ratio, spec.lambda2, spec.seed);
        case StreamKind::commutative: {
            const std::size_t d = spec.d ? spec.d : spec.counts.size();
            return {gen_commutative(d, spec.counts), GroundTruth{}};
        }
        case StreamKind::end_rotation:
            return gen_end_rotation(spec.d, spec.n, spec.eta, spec.sigma2, spec.seed);
        case StreamKind::partial_duplicate:
            return gen_partial_duplicate(spec.d, spec.n, spec.k, spec.seed, spec.shuffle);
        case StreamKind::mergeable_hard:
            return gen_mergeable_hard(spec.d, spec.p, spec.seed);
        case StreamKind::matsample_tight: {
            RowMatrix m = gen_matsample_tight(spec.n);
            return {StreamMatrix(std::move(m)), GroundTruth{}};
        }
    }
    throw std::invalid_argument("generate: unknown kind");
}

}  // namespace ojas
