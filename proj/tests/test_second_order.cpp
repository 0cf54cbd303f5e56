#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "rcar/error.hpp"
#include "rcar/harness.hpp"
#include "rcar/second_order.hpp"
#include "rcar/simulate.hpp"

using namespace rcar;

namespace {

ModelMoments ar1(double theta, double sigma2) {
    ModelMoments m;
    m.theta = theta;
    m.eps = noise_moments({NoiseFamily::Gaussian, sigma2});
    return m;
}

}  // namespace

TEST(SecondOrder, LambdaAtAlphaZero) {
    const auto p = gen::gaussian(0.3, 0.0, 1.7, 0.2);
    const auto t = build_second_order(p);
    EXPECT_NEAR(t.Lambda[0], 1.7 / (1.0 - 0.29), 1e-12);
}

TEST(SecondOrder, ClassicalAr1) {
    const auto t = build_second_order(ar1(0.6, 2.0));
    EXPECT_NEAR(t.Lambda[0], 2.0 / (1.0 - 0.36), 1e-12);
    EXPECT_EQ(t.Lambda[1], 0.0);
    EXPECT_NEAR(autocovariance(t, 2), 2.0 * 0.36 / (1.0 - 0.36), 1e-12);
}

TEST(SecondOrder, ZeroThetaAndAlpha) {
    const auto p = gen::gaussian(0.0, 0.0, 1.0, 0.2);
    const auto t = build_second_order(p);
    EXPECT_EQ(t.Lambda[1], 0.0);
    const SmallMatrix expected{{0.2, 0, 0}, {0, 0, 0}, {0.12, 0, 0}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(t.M(i, j), expected(i, j), 1e-15);
    EXPECT_NEAR(t.Lambda[2], 0.12 / 0.8 + 0.2, 1e-12);  // tau4 lambda0 + sigma2 tau2
}

TEST(SecondOrder, ExplicitDisplayMatchesColumnConstruction) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto p = gen::admissible(rng);
        const auto& m = p.moments();
        const double th = m.theta, al = m.alpha, t2 = m.t(2), t4 = m.t(4);
        const SmallMatrix explicit_m{{th * th + t2, 2 * al * th, al * al},
                                     {2 * th * t2, 2 * al * t2, 0},
                                     {th * th * t2 + t4, 2 * al * th * t2, al * al * t2}};
        const auto M = second_moment_matrix(m);
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(M(r, c), explicit_m(r, c), 1e-15);
    }
}

TEST(SecondOrder, SolveIdentityOnRandomDraws) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        const auto p = gen::admissible(rng);
        const auto t = build_second_order(p);
        const auto lhs = (SmallMatrix::identity(3) - t.M) * t.Lambda;
        for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(lhs[k], t.sigma2 * t.U0[k], 1e-10);
    }
}

TEST(SecondOrder, HypothesisViolationThrows) {
    const auto p = gen::gaussian(0.95, 0.0, 1.0, 0.2);
    try {
        build_second_order(p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Hypothesis);
    }
}

TEST(Autocovariance, LagZeroIsLambda0) {
    const auto t = build_second_order(gen::gaussian(0.3, 0.5, 1.0, 0.1));
    EXPECT_EQ(autocovariance(t, 0), t.Lambda[0]);
    EXPECT_THROW(autocovariance(t, 1001), Error);
}

TEST(Autocovariance, LagOneRatioIsThetaStar) {
    const auto t = build_second_order(gen::gaussian(0.3, 0.5, 1.0, 0.1));
    const auto a = acvf(t, 5);
    EXPECT_NEAR(a.theta_star, 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(a.values[1] / a.values[0], 1.0 / 3.0, 1e-14);
}

TEST(Autocovariance, EvenAndDominated) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 30; ++i) {
        const auto t = build_second_order(gen::admissible(rng));
        const double g0 = autocovariance(t, 0);
        for (int h = -5; h <= 5; ++h) {
            EXPECT_EQ(autocovariance(t, h), autocovariance(t, -h));
            EXPECT_LE(std::abs(autocovariance(t, h)), g0 * (1 + 1e-14));
        }
    }
}

TEST(SecondMomentSequence, FirstSequenceEntries) {
    const auto p = gen::gaussian(0.4, 0.7, 1.0, 0.15);
    const auto& m = p.moments();
    const auto u0 = lemma1_sequence(m, 0, 0);
    EXPECT_EQ(u0, (Vector{1.0, 0.0, 0.15}));
    const auto u1 = lemma1_sequence(m, 1, 0);
    EXPECT_NEAR(u1[0], 0.16 + 0.15 + 0.49 * 0.15, 1e-15);
    EXPECT_NEAR(u1[1], 2 * 0.4 * 0.15, 1e-15);
}

TEST(SecondMomentSequence, MatchesMatrixProducts) {
    const auto p = gen::gaussian(-0.2, 0.4, 1.0, 0.2);
    const auto& m = p.moments();
    const auto M = second_moment_matrix(m), N = lag_matrix(m);
    const Vector u0{1.0, 0.0, 0.2};
    for (unsigned k = 0; k < 4; ++k) {
        for (unsigned h = 0; h < 4; ++h) {
            Vector v = u0;
            for (unsigned i = 0; i < k; ++i) v = M * v;
            for (unsigned i = 0; i < h; ++i) v = N * v;
            const auto got = lemma1_sequence(m, k, h);
            for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(got[j], v[j], 1e-14);
        }
    }
}

TEST(CoefficientMoments, Cells) {
    const auto p = gen::gaussian(0.3, 0.0, 1.0, 0.2);
    const auto& m = p.moments();
    const double th = 0.3, t2 = 0.2, t4 = 0.12, t6 = 15 * 0.008;
    EXPECT_EQ(table1_moment(0, 0, m), 1.0);
    EXPECT_NEAR(table1_moment(1, 1, m), t2, 1e-15);
    EXPECT_NEAR(table1_moment(2, 4, m), std::pow(th, 4) * t2 + 6 * th * th * t4 + t6, 1e-14);
}

TEST(CoefficientMoments, MatchesMonteCarlo) {
    const auto p = gen::gaussian(0.3, 0.0, 1.0, 0.2);
    NoiseSampler draw(*p.eta());
    std::mt19937_64 rng(31);
    const int n = 1000000;
    double sum[5][5] = {}, sq[5][5] = {};
    for (int i = 0; i < n; ++i) {
        const double e = draw(rng);
        double ea = 1.0;
        for (int a = 0; a < 5; ++a) {
            double cb = 1.0;
            for (int b = 0; b < 5; ++b) {
                const double v = ea * cb;
                sum[a][b] += v;
                sq[a][b] += v * v;
                cb *= 0.3 + e;
            }
            ea *= e;
        }
    }
    for (int a = 0; a < 5; ++a) {
        for (int b = 0; b < 5; ++b) {
            const double mean = sum[a][b] / n;
            const double se = std::sqrt((sq[a][b] / n - mean * mean) / n);
            EXPECT_NEAR(table1_moment(a, b, p.moments()), mean, 3 * se + 1e-15) << "a=" << a << " b=" << b;
        }
    }
}

TEST(SecondOrder, LambdaMatchesLongPaths) {
    std::mt19937_64 rng(10);
    for (int set = 0; set < 5; ++set) {
        const auto p = gen::admissible(rng, 0.6);
        const auto t = build_second_order(p);
        const auto tr = simulate(p, 1000000, derive_seed(77, set), kDefaultBurnIn, {true, true});
        for (int a = 0; a < 3; ++a) {
            const auto est = mixed_moment_average({0, a, 0, 0, 2}, tr);
            EXPECT_NEAR(est.estimate, t.Lambda[a], 3 * est.standard_error) << "set " << set << " a=" << a;
        }
    }
}
