#include "ojas/lemma_lab.hpp"

#include "ojas/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ojas;

TEST(ProdAB, Examples) {
    const Sides empty = check_prodab({});
    EXPECT_EQ(empty.lhs, 0.0);
    EXPECT_EQ(empty.rhs, 0.0);
    const double l2 = std::log(2.0);
    const Sides s = check_prodab({l2, l2});
    EXPECT_NEAR(s.lhs, 3.0 * l2, 1e-15);
    EXPECT_NEAR(s.rhs, 3.0, 1e-15);
    EXPECT_THROW(check_prodab({0.1, -0.1}), std::invalid_argument);
}

TEST(ProdAB, Fuzz) {
    Prng rng(1);
    const FuzzReport r = fuzz_prodab(500, rng);
    EXPECT_TRUE(r.passed());
    EXPECT_GE(r.min_slack, -1e-9);
}

TEST(MaxA, EqualWeights) {
    const MaxaSides s = check_maxa(1.0, 1.0, 1.0, 0.0);
    EXPECT_EQ(s.lhs, 1.0);
    EXPECT_NEAR(s.rhs, (1.0 + std::sqrt(2.0)) / 2.0, 1e-15);
    const double t = s.equality_point;
    EXPECT_NEAR(t, (1.0 + 1.0 / std::sqrt(2.0)) / 2.0, 1e-15);
    const MaxaSides at = check_maxa(1.0, 1.0, std::sqrt(t), std::sqrt(1.0 - t));
    EXPECT_NEAR(at.lhs, at.rhs, 1e-14);
}

TEST(MaxA, BadWeightsAndFuzz) {
    EXPECT_THROW(check_maxa(0.0, 1.0, 1.0, 1.0), std::invalid_argument);
    Prng rng(2);
    EXPECT_TRUE(fuzz_maxa(500, rng).passed());
}

TEST(MatSample, Degenerate) {
    const Sides zero = check_matsample(Eigen::MatrixXd::Zero(3, 5));
    EXPECT_EQ(zero.lhs, 0.0);
    EXPECT_EQ(zero.rhs, 0.0);

    Eigen::MatrixXd one(2, 2);
    one << 0.0, 3.0, 0.0, -4.0;
    const Sides s = check_matsample(one);
    EXPECT_EQ(s.lhs, 25.0);
    EXPECT_GE(s.rhs, s.lhs);
    EXPECT_EQ(max_subsequence_energy(one), 25.0);

    Eigen::MatrixXd bad = one;
    bad(0, 0) = 1e-300;
    EXPECT_THROW(check_matsample(bad), std::invalid_argument);
}

TEST(MatSample, TightInstanceFrozen) {
    const Eigen::MatrixXd a2 = gen_matsample_tight(2);
    const Sides s2 = check_matsample(a2);
    EXPECT_NEAR(s2.lhs, 0.9609060278364028, 1e-14);
    EXPECT_NEAR(s2.rhs, 3.843624111345611, 1e-14);
    EXPECT_NEAR(max_subsequence_energy(a2), 1.441359041754604, 1e-14);

    const Eigen::MatrixXd a = gen_matsample_tight(256);
    const Sides s = check_matsample(a);
    EXPECT_NEAR(s.lhs, 7871.742180035812, 1e-8);
    EXPECT_NEAR(s.rhs, 126470.10646276393, 1e-6);
    EXPECT_NEAR(max_subsequence_energy(a), 2297.1992599009163, 1e-8);
}

TEST(MatSample, Fuzz) {
    Prng rng(3);
    EXPECT_TRUE(fuzz_matsample(40, rng, 64, 16).passed());
}

// ---------------------------------------------------------------------------

namespace {

MonitorContext context(const StreamMatrix& X, double eta) {
    const SpectralSummary s = top_two_eigs(X);
    MonitorContext ctx;
    ctx.X = &X;
    ctx.eta = eta;
    ctx.vstar = s.vstar;
    ctx.sigma2 = sigma_pair(X, eta, s).sigma2;
    return ctx;
}

}  // namespace

TEST(Monitors, PureTopDirectionStream) {
    const StreamMatrix X = StreamMatrix::from_rows(std::vector<Vec>(50, UnitVec::basis(3, 0).vec()));
    const OjaRun run = oja_run_from(X, UnitVec::basis(3, 0), {0.1, kFullPrecisionBits, true, std::nullopt});
    MonitorContext ctx;
    ctx.X = &X;
    ctx.eta = 0.1;
    ctx.vstar = UnitVec::basis(3, 0);
    ctx.sigma2 = 0.0;
    const MonitorReport g = monitor_growth_correctness(*run.trace, ctx, 0.0);
    EXPECT_TRUE(g.passed());
    EXPECT_EQ(g.n_checks, 51u);
    Prng rng(1);
    const MonitorReport m = monitor_movement(*run.trace, ctx, 20, rng);
    EXPECT_TRUE(m.passed());
    EXPECT_LE(m.max_violation, 0.0);
}

TEST(Monitors, SpikedStreamPasses) {
    const Generated gen = gen_spiked(16, 800, 30.0, 1.0, 4);
    const double eta = 0.5 / gen.X.max_row_norm2();
    MonitorContext ctx = context(gen.X, eta);
    Prng rng(5);
    const OjaRun run = oja_run(gen.X, {eta, kFullPrecisionBits, true, std::nullopt}, rng);
    const double pv0 = perp_norm(run.trace->directions.front(), ctx.vstar);
    EXPECT_TRUE(monitor_growth_correctness(*run.trace, ctx, pv0).passed());

    const OjaRun from_top = oja_run_from(gen.X, ctx.vstar, {eta, kFullPrecisionBits, true, std::nullopt});
    EXPECT_TRUE(monitor_movement(*from_top.trace, ctx, 100, rng).passed());
}

TEST(Monitors, Inapplicable) {
    const Generated gen = gen_spiked(8, 100, 10.0, 1.0, 6);
    const double eta = 2.0 / gen.X.max_row_norm2();
    MonitorContext ctx = context(gen.X, eta);
    Prng rng(1);
    const OjaRun run = oja_run(gen.X, {eta, kFullPrecisionBits, true, std::nullopt}, rng);
    EXPECT_EQ(monitor_growth_correctness(*run.trace, ctx, 1.0).status, MonitorStatus::inapplicable);

    // A random start is not on v*.
    ctx.eta = 0.5 / gen.X.max_row_norm2();
    const OjaRun slow = oja_run(gen.X, {ctx.eta, kFullPrecisionBits, true, std::nullopt}, rng);
    EXPECT_EQ(monitor_movement(*slow.trace, ctx, 10, rng).status, MonitorStatus::inapplicable);
}

TEST(Monitors, PerpNorm) {
    Vec w(2);
    w << 3.0, 4.0;
    EXPECT_NEAR(perp_norm(w, UnitVec::basis(2, 0)), 0.8, 1e-15);
}

// ---------------------------------------------------------------------------

TEST(StatChecks, GaussianVecNorm) {
    Prng rng(7);
    const StatReport r = stat_check(StatClaim::gaussianvecnorm, {}, 2000, rng);
    EXPECT_EQ(r.claimed, 0.1);
    EXPECT_TRUE(r.passed());
    EXPECT_GT(r.failures, 0u);
}

TEST(StatChecks, SubgammaAndRudelson) {
    Prng rng(8);
    StatParams p;
    p.n = 128;
    p.d = 32;
    EXPECT_TRUE(stat_check(StatClaim::subgamma_sum, p, 200, rng).passed());
    p.d = 0;
    EXPECT_TRUE(stat_check(StatClaim::rudelson_opnorm, p, 100, rng).passed());
}

TEST(StatChecks, Validation) {
    Prng rng(9);
    EXPECT_THROW(stat_check(StatClaim::gaussianvecnorm, {}, 99, rng), std::invalid_argument);
    EXPECT_EQ(parse_stat_claim("subgamma_sum"), StatClaim::subgamma_sum);
    EXPECT_THROW(parse_stat_claim("x"), std::invalid_argument);
}

TEST(Bands, SmallInstances) {
    const BandReport pd = pdup_band(512, 4, 10, 1);
    EXPECT_EQ(pd.required, 9u);
    EXPECT_EQ(pd.primary.size(), 10u);
    EXPECT_TRUE(pd.passed());
    const BandReport dp = dp_band(128, 8, 10, 2);
    EXPECT_TRUE(dp.passed());
    for (double r : dp.primary) EXPECT_GE(r, 0.0);
}
