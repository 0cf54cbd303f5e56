#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "rcar/asymptotics.hpp"
#include "rcar/error.hpp"
#include "rcar/estimate.hpp"

using namespace rcar;

namespace {

Trajectory series(std::vector<double> x) {
    Trajectory t;
    t.x = std::move(x);
    t.source = "test";
    return t;
}

}  // namespace

TEST(SampleMean, Examples) {
    EXPECT_EQ(sample_mean(series({5, 1, 2, 3})), 2.0);
    EXPECT_EQ(sample_mean(series({0, 0, 0, 0})), 0.0);
}

TEST(SampleMean, WithinCltBand) {
    const auto p = gen::gaussian(0.3, 0.5, 1.0, 0.1);
    const double kappa = std::sqrt(kappa_squared(p.moments(), build_second_order(p)));
    const std::size_t n = 100000;
    EXPECT_LT(std::abs(sample_mean(simulate(p, n, 20))), 4 * kappa / std::sqrt(double(n)));
}

TEST(ThetaHat, Examples) {
    EXPECT_EQ(theta_hat(series({1, 1, 1, 1})), 1.0);
    EXPECT_EQ(theta_hat(series({1, 0, 1, 0})), 0.0);
    EXPECT_EQ(vartheta_hat(series({1, 0, 1, 0})), 1.0);
}

TEST(ThetaHat, ZeroWindowIsDegenerate) {
    try {
        theta_hat(series({0, 0, 0, 0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Degenerate);
    }
    EXPECT_THROW(vartheta_hat(series({0, 0, 0, 0})), Error);
}

TEST(ThetaHat, ConvergesToThetaStarNotTheta) {
    const auto p = gen::gaussian(0.3, 0.5, 1.0, 0.1);
    const auto st = sigma_psi(p.moments());
    const std::size_t n = 100000;
    const double th = theta_hat(simulate(p, n, 21));
    EXPECT_LT(std::abs(th - 1.0 / 3.0), 4 * std::sqrt(st.omega2 / double(n)));
}

TEST(FMap, Examples) {
    const auto a = f_map(0.5, 0.25);
    EXPECT_DOUBLE_EQ(a.first, 0.5);
    EXPECT_EQ(a.second, 0.0);
    const auto b = f_map(0.0, 0.37);
    EXPECT_EQ(b.first, 0.0);
    EXPECT_DOUBLE_EQ(b.second, 0.37);
    const auto c = f_map(1.0 / 3.0, (0.09 + 0.05 * 0.9) / 0.9);
    EXPECT_NEAR(c.first, 0.3, 1e-15);
    EXPECT_NEAR(c.second, 0.05, 1e-15);
    try {
        f_map(1.0 / std::sqrt(2.0), 0.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Pathological);
    }
}

TEST(FMap, JacobianMatchesDifferences) {
    for (auto [x, y] : {std::pair{0.2, 0.1}, std::pair{-0.4, 0.3}, std::pair{0.9, 0.5}}) {
        const auto J = f_jacobian(x, y);
        const double h = 1e-6;
        const auto px = f_map(x + h, y), mx = f_map(x - h, y), py = f_map(x, y + h), my = f_map(x, y - h);
        EXPECT_NEAR(J(0, 0), (px.first - mx.first) / (2 * h), 1e-6);
        EXPECT_NEAR(J(1, 0), (px.second - mx.second) / (2 * h), 1e-6);
        EXPECT_NEAR(J(0, 1), (py.first - my.first) / (2 * h), 1e-6);
        EXPECT_NEAR(J(1, 1), (py.second - my.second) / (2 * h), 1e-6);
    }
}

TEST(YuleWalker, TildeIsFImage) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 20; ++i) {
        const auto tr = simulate(gen::admissible(rng), 500, derive_seed(22, i));
        const auto yw = yule_walker(tr.x);
        EXPECT_DOUBLE_EQ(yw.theta_hat, theta_hat(tr));
        EXPECT_DOUBLE_EQ(yw.vartheta_hat, vartheta_hat(tr));
        const auto f = f_map(yw.theta_hat, yw.vartheta_hat);
        EXPECT_EQ(yw.theta_tilde, f.first);
        EXPECT_EQ(yw.gamma_tilde, f.second);
    }
}

TEST(Residuals, Examples) {
    EXPECT_EQ(residual_variance(series({1, 0.5, 0.25, 0.125}), 0.5).sigma2_hat, 0.0);
    // X_0 is excluded, so the residuals are x_1..x_3 = (0, 1, 0).
    const auto r = residual_variance(series({1, 0, 1, 0}), 0.0);
    EXPECT_DOUBLE_EQ(r.sigma2_hat, 1.0 / 3.0);
    EXPECT_EQ(r.residuals, (std::vector<double>{0, 1, 0}));
}

TEST(Residuals, AlphaZeroLimit) {
    const double th = 0.3, t2 = 0.2, s2 = 1.5;
    const auto p = gen::gaussian(th, 0.0, s2, t2);
    const auto tr = simulate(p, 1000000, 23);
    const double target = s2 * (1 - th * th) / (1 - th * th - t2);
    EXPECT_NEAR(residual_variance(tr, theta_hat(tr)).sigma2_hat, target, 0.02 * target);
}

TEST(NicholsQuinn, EqualResidualsGiveZeroSlope) {
    const auto tr = series({1, 2, -1, 3, 0.5, 2});
    const std::vector<double> e(tr.n(), 0.7);
    const auto nq = nicholls_quinn(tr, e);
    EXPECT_NEAR(nq.tau2_bar, 0.0, 1e-15);
    EXPECT_NEAR(nq.sigma2_bar, 0.49, 1e-15);
    EXPECT_THROW(nicholls_quinn(series({1, 1, 1, 1}), std::vector<double>(3, 1.0)), Error);
    EXPECT_THROW(nicholls_quinn(tr, std::vector<double>(2, 1.0)), Error);
}

TEST(NicholsQuinn, ConsistentAtAlphaZero) {
    // Replicate spread gives the Monte Carlo standard error of the estimator at n = 1e5.
    const double th = 0.3, t2 = 0.1, s2 = 1.0;
    const auto p = gen::gaussian(th, 0.0, s2, t2);
    const int R = 40;
    double st = 0, sst = 0, ss = 0, sss = 0;
    for (int r = 0; r < R; ++r) {
        const auto tr = simulate(p, 100000, derive_seed(24, r));
        const auto fit = residual_variance(tr, theta_hat(tr));
        const auto nq = nicholls_quinn(tr, fit.residuals);
        st += nq.tau2_bar;
        sst += nq.tau2_bar * nq.tau2_bar;
        ss += nq.sigma2_bar;
        sss += nq.sigma2_bar * nq.sigma2_bar;
    }
    const double mt = st / R, ms = ss / R;
    const double se_t = std::sqrt((sst / R - mt * mt) * R / (R - 1)), se_s = std::sqrt((sss / R - ms * ms) * R / (R - 1));
    EXPECT_NEAR(mt, t2, 3 * se_t / std::sqrt(double(R)));
    EXPECT_NEAR(ms, s2, 3 * se_s / std::sqrt(double(R)));
}

TEST(CorrelationTest, ZeroGammaGivesUnitPValue) {
    // Nonzero only on every fourth index: lag-1 and lag-2 products vanish, so theta_hat = vartheta_hat = 0.
    std::vector<double> y(200, 0.0);
    for (std::size_t t = 0; t < y.size(); t += 4) y[t] = 1.0 + double(t % 3);
    const auto r = correlation_test(series(y), 0.05);
    EXPECT_EQ(r.theta_hat, 0.0);
    EXPECT_EQ(r.vartheta_hat, 0.0);
    EXPECT_EQ(r.gamma_tilde, 0.0);
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
    EXPECT_FALSE(r.reject);
}

TEST(CorrelationTest, ReportInvariants) {
    std::mt19937_64 rng(25);
    for (int i = 0; i < 30; ++i) {
        const auto p = gen::admissible(rng);
        const auto tr = simulate(p, 2000, derive_seed(25, i));
        try {
            const auto r = correlation_test(tr, 0.05);
            EXPECT_GE(r.statistic, 0.0);
            EXPECT_GE(r.p_value, 0.0);
            EXPECT_LE(r.p_value, 1.0);
            EXPECT_EQ(r.reject, r.p_value < 0.05);
            const auto f = f_map(r.theta_hat, r.vartheta_hat);
            EXPECT_EQ(r.theta_tilde, f.first);
            EXPECT_EQ(r.gamma_tilde, f.second);
            EXPECT_DOUBLE_EQ(r.statistic, double(r.n) * r.gamma_tilde * r.gamma_tilde / r.psi0_hat);
        } catch (const Error& e) {
            // A nonpositive plug-in is a reported outcome at finite n.
            EXPECT_EQ(e.kind(), ErrorKind::Degenerate) << e.what();
        }
    }
}

TEST(CorrelationTest, DomainAndLength) {
    const auto tr = simulate(gen::gaussian(0.3, 0.0, 1.0, 0.1), 1000, 26);
    EXPECT_THROW(correlation_test(tr, 0.0), Error);
    EXPECT_THROW(correlation_test(tr, 1.5), Error);
    EXPECT_EQ(correlation_test(tr, 1.0).reject, correlation_test(tr, 1.0).p_value < 1.0);
    EXPECT_THROW(correlation_test(simulate(gen::gaussian(0.3, 0.0, 1.0, 0.1), 40, 26), 0.05), Error);
}

TEST(CorrelationTest, SourceSwitch) {
    const auto tr = simulate(gen::gaussian(0.3, 0.5, 1.0, 0.1), 5000, 27);
    const auto a = correlation_test(tr, 0.05, ThetaSource::Tilde);
    const auto b = correlation_test(tr, 0.05, ThetaSource::Hat);
    EXPECT_EQ(a.theta_hat_source, ThetaSource::Tilde);
    EXPECT_EQ(b.theta_hat_source, ThetaSource::Hat);
    EXPECT_EQ(a.gamma_tilde, b.gamma_tilde);
    EXPECT_NE(a.psi0_hat, b.psi0_hat);
    EXPECT_EQ(parse_theta_source("hat"), ThetaSource::Hat);
    EXPECT_THROW(parse_theta_source("bar"), Error);
}

TEST(Invariance, ScaleLeavesRatiosAndScalesVariance) {
    const auto tr = simulate(gen::gaussian(0.3, 0.5, 1.0, 0.1), 3000, 28);
    for (double c : {-2.0, 0.5, 1e3}) {
        auto scaled = tr;
        for (auto& v : scaled.x) v *= c;
        EXPECT_NEAR(theta_hat(scaled), theta_hat(tr), 1e-13);
        EXPECT_NEAR(vartheta_hat(scaled), vartheta_hat(tr), 1e-13);
        const double th = theta_hat(tr);
        EXPECT_NEAR(residual_variance(scaled, th).sigma2_hat, c * c * residual_variance(tr, th).sigma2_hat,
                    1e-12 * c * c * residual_variance(tr, th).sigma2_hat);
    }
}

TEST(Consistency, ClassicalAr1ThetaHat) {
    const double th = 0.5;
    const ModelParams p(th, 0.0, {NoiseFamily::Gaussian, 1.0}, std::nullopt);
    const std::size_t n = 2000;
    const double band = 4 * std::sqrt((1 - th * th) / double(n));
    int inside = 0;
    for (int r = 0; r < 1000; ++r)
        if (std::abs(theta_hat(simulate(p, n, derive_seed(29, r))) - th) < band) ++inside;
    EXPECT_GE(inside, 950);
}
