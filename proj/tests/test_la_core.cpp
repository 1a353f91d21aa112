#include "ojas/la_core.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ojas;

namespace {

StreamMatrix rows(std::initializer_list<std::initializer_list<double>> r) {
    std::vector<Vec> out;
    for (auto row : r) {
        Vec v(static_cast<Eigen::Index>(row.size()));
        Eigen::Index j = 0;
        for (double x : row) v[j++] = x;
        out.push_back(v);
    }
    return StreamMatrix::from_rows(out);
}

Vec e(std::size_t d, std::size_t i) { return UnitVec::basis(d, i).vec(); }

}  // namespace

TEST(UnitVec, RejectsNonUnit) {
    EXPECT_THROW(UnitVec::from_unit(Vec::Constant(2, 1.0)), std::invalid_argument);
    EXPECT_NO_THROW(UnitVec::from_unit(e(3, 1)));
    EXPECT_THROW(UnitVec::normalize(Vec::Zero(3)), std::invalid_argument);
}

TEST(StreamMatrix, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(StreamMatrix(RowMatrix(0, 3)), std::invalid_argument);
    RowMatrix m = RowMatrix::Zero(2, 2);
    m(1, 1) = std::nan("");
    EXPECT_THROW(StreamMatrix{m}, std::invalid_argument);
}

TEST(TopTwoEigs, DiagonalCase) {
    const SpectralSummary s = top_two_eigs(rows({{1, 0, 0}, {1, 0, 0}, {0, 1, 0}}));
    EXPECT_NEAR(s.lambda1, 2.0, 1e-12);
    EXPECT_NEAR(s.lambda2, 1.0, 1e-12);
    EXPECT_NEAR(s.vstar[0], 1.0, 1e-12);
    EXPECT_NEAR(s.ratio, 2.0, 1e-12);
}

TEST(TopTwoEigs, SingleRowHasInfiniteRatio) {
    const SpectralSummary s = top_two_eigs(rows({{1, 0, 0}}));
    EXPECT_NEAR(s.lambda1, 1.0, 1e-12);
    EXPECT_EQ(s.lambda2, 0.0);
    EXPECT_TRUE(std::isinf(s.ratio));
}

TEST(TopTwoEigs, FrozenDenseValues) {
    // numpy.linalg.eigh on XᵀX
    const SpectralSummary s = top_two_eigs(rows({{1, 2, 0}, {0, 1, -1}, {2, 0, 1}, {1, 1, 1}, {-1, 0, 2}}));
    EXPECT_NEAR(s.lambda1, 9.757701765450758, 1e-8 * 9.76);
    EXPECT_NEAR(s.lambda2, 6.90088500973085, 1e-8 * 6.9);
    EXPECT_NEAR(s.vstar[0], 0.7518854276473457, 1e-8);
    EXPECT_NEAR(s.vstar[1], 0.6002754938353816, 1e-8);
    EXPECT_NEAR(s.vstar[2], 0.27264928973363706, 1e-8);
}

TEST(TopTwoEigs, SignedMatrixMatchesDenseSolver) {
    Prng rng(7);
    RowMatrix m(64, 16);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.rademacher();
    const StreamMatrix X(m);
    const SpectralSummary s = top_two_eigs(X);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.matrix().transpose() * X.matrix());
    EXPECT_NEAR(s.lambda1, es.eigenvalues()[15], 1e-8 * es.eigenvalues()[15]);
    EXPECT_NEAR(s.lambda2, es.eigenvalues()[14], 1e-8 * es.eigenvalues()[14]);
}

TEST(TopTwoEigs, DualGramAgreesWhenDExceedsN) {
    Prng rng(3);
    RowMatrix m(5, 40);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
    const StreamMatrix X(m);
    const SpectralSummary s = top_two_eigs(X);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.matrix().transpose() * X.matrix());
    EXPECT_NEAR(s.lambda1, es.eigenvalues()[39], 1e-8 * s.lambda1);
    EXPECT_NEAR(s.lambda2, es.eigenvalues()[38], 1e-8 * s.lambda1);
    EXPECT_NEAR(std::abs(s.vstar.vec().dot(es.eigenvectors().col(39))), 1.0, 1e-10);
}

TEST(TopTwoEigs, Errors) {
    EXPECT_THROW(top_two_eigs(rows({{0, 0}, {0, 0}})), ZeroMatrix);
    EXPECT_THROW(top_two_eigs(rows({{1, 0}, {0, 1}})), DegenerateGap);
    EigenOptions bad;
    bad.tol = 0.0;
    EXPECT_THROW(top_two_eigs(rows({{1, 0}}), bad), std::invalid_argument);
}

TEST(TopTwoEigs, SignConvention) {
    const SpectralSummary s = top_two_eigs(rows({{-3, -1}, {-3, -1}}));
    EXPECT_GT(s.vstar[0], 0.0);
}

TEST(SigmaPair, DiagonalCase) {
    const StreamMatrix X = rows({{1, 0, 0}, {1, 0, 0}, {0, 1, 0}});
    const SigmaPair sp = sigma_pair(X, 0.1, top_two_eigs(X));
    EXPECT_NEAR(sp.sigma1, 0.2, 1e-12);
    EXPECT_NEAR(sp.sigma2, 0.1, 1e-12);
    EXPECT_THROW(sigma_pair(X, 0.0, top_two_eigs(X)), std::invalid_argument);
}

TEST(SigmaPair, RatioMatchesOracleOnSpikedData) {
    Prng rng(3);
    const UnitVec v = random_unit(32, rng);
    RowMatrix m(512, 32);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Vec g(32);
        for (Eigen::Index j = 0; j < 32; ++j) g[j] = rng.normal();
        const double a = g.dot(v.vec());
        m.row(i) = (std::sqrt(10.0) * a * v.vec() + (g - a * v.vec())).transpose();
    }
    const StreamMatrix X(m);
    const SpectralSummary s = top_two_eigs(X);
    const SigmaPair sp = sigma_pair(X, 0.01, s);
    EXPECT_NEAR(sp.sigma2 / sp.sigma1, s.lambda2 / s.lambda1, 1e-8);
}

TEST(SigmaPair, PrefixMonotone) {
    Prng rng(4);
    RowMatrix m(60, 6);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal() * (j == 0 ? 3.0 : 1.0);
    const StreamMatrix full(m);
    const SpectralSummary s = top_two_eigs(full);
    const double total = deflated_top_eigenvalue(full, s.vstar);
    for (Eigen::Index k : {5, 20, 40}) {
        const StreamMatrix prefix(RowMatrix(m.topRows(k)));
        EXPECT_LE(deflated_top_eigenvalue(prefix, s.vstar), total + 1e-9 * total);
    }
}

TEST(Sin2Error, Examples) {
    const UnitVec e1 = UnitVec::basis(3, 0);
    EXPECT_EQ(sin2_error(e1, e1), 0.0);
    EXPECT_EQ(sin2_error(UnitVec::basis(3, 1), e1), 1.0);
    const UnitVec diag = UnitVec::normalize(e(3, 0) + e(3, 1));
    EXPECT_NEAR(sin2_error(diag, e1), 0.5, 1e-15);
    const UnitVec neg = UnitVec::normalize(-diag.vec());
    EXPECT_NEAR(sin2_error(neg, e1), 0.5, 1e-15);
    const double c = diag.vec().dot(e1.vec());
    EXPECT_NEAR(sin2_error(diag, e1) + c * c, 1.0, 1e-12);
}

TEST(RandomUnit, DeterministicAndUnit) {
    Prng a(42), b(42);
    const UnitVec u = random_unit(32, a);
    const UnitVec v = random_unit(32, b);
    EXPECT_EQ(u.vec(), v.vec());
    EXPECT_NEAR(u.vec().norm(), 1.0, 1e-12);
    Prng c(1);
    EXPECT_NEAR(std::abs(random_unit(1, c)[0]), 1.0, 1e-15);
}

TEST(RandomUnit, CoordinateMeansNearZero) {
    Prng rng(9);
    Vec sum = Vec::Zero(64);
    for (int t = 0; t < 10000; ++t) sum += random_unit(64, rng).vec();
    sum /= 10000.0;
    // each coordinate has standard deviation 1/√d per draw
    EXPECT_LT(sum.cwiseAbs().maxCoeff(), 4.0 / std::sqrt(10000.0) / std::sqrt(64.0) * 1.5);
}

TEST(Prng, DeriveIsPureFunctionOfSeedAndStream) {
    const Prng base(5);
    EXPECT_EQ(base.derive(3).next_u64(), Prng(5).derive(3).next_u64());
    EXPECT_NE(base.derive(3).next_u64(), base.derive(4).next_u64());
}

TEST(Quantize, Examples) {
    EXPECT_EQ(quantize(1.0 / 3.0, 52), 1.0 / 3.0);
    EXPECT_EQ(quantize(1.0, 3), 1.0);
    EXPECT_EQ(quantize(0.0, 3), 0.0);
    EXPECT_EQ(quantize(1.0 / 3.0, 8), 0.3330078125);
    EXPECT_LE(std::abs(quantize(1.0 / 3.0, 8) - 1.0 / 3.0), std::ldexp(1.0, -8) / 3.0);
    EXPECT_THROW(quantize(1.0, 0), std::invalid_argument);
    EXPECT_THROW(quantize(1.0, 53), std::invalid_argument);
}

TEST(Quantize, BoundAndIdempotent) {
    Prng rng(11);
    for (int t = 0; t < 200; ++t) {
        Vec v(8);
        for (Eigen::Index j = 0; j < 8; ++j) v[j] = rng.normal() * std::exp(4.0 * rng.normal());
        const int bits = 1 + static_cast<int>(rng.uniform_index(52));
        const Vec q = quantize(v, bits);
        EXPECT_LE((q - v).cwiseAbs().maxCoeff(), std::ldexp(1.0, -bits) * v.cwiseAbs().maxCoeff());
        EXPECT_EQ(quantize(q, bits), q);
    }
}

TEST(SubspaceIteration, ClusteredSpectrum) {
    // λ2 and λ3 differ by one part in 10^4: single-vector power iteration would stall.
    Eigen::VectorXd diag(6);
    diag << 10.0, 5.0, 4.9995, 1.0, 0.5, 0.1;
    Prng rng(2);
    Eigen::MatrixXd G(6, 6);
    for (Eigen::Index i = 0; i < 6; ++i)
        for (Eigen::Index j = 0; j < 6; ++j) G(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    const Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd M = Q * diag.asDiagonal() * Q.transpose();
    const RitzResult r = subspace_iteration(M, 2, 1e-10, 20000, 0.0, 1);
    EXPECT_NEAR(r.values[0], 10.0, 1e-9);
    EXPECT_NEAR(r.values[1], 5.0, 1e-8);
}
