#include <cmath>
#include <random>
#include <string>

#include "rcar/asymptotics.hpp"
#include "rcar/error.hpp"
#include "rcar/fourth_order.hpp"
#include "rcar/model.hpp"
#include "rcar/second_order.hpp"

namespace rcar {

HypothesisReport check_hypotheses(const ModelParams& params, long mc_draws, unsigned long long seed) {
    HypothesisReport r;
    const auto& m = params.moments();
    const double t2 = m.t(2), s2 = m.s(2);

    r.rho_M = spectral_radius(second_moment_matrix(m));
    r.rho_H = spectral_radius(fourth_moment_matrix(m));

    // (H1): Monte Carlo mean of ln|theta + alpha eta_0 + eta_1|.
    const long draws = std::max(mc_draws, 10000L);
    if (mc_draws < 10000) r.warnings.push_back("mc_draws raised to the minimum of 10000");
    if (!params.eta()) {
        r.log_moment_estimate = std::log(std::abs(m.theta));
        r.log_moment_halfwidth = 0.0;
    } else {
        std::mt19937_64 rng(seed);
        NoiseSampler eta(*params.eta());
        double mean = 0.0, m2 = 0.0;
        for (long i = 0; i < draws; ++i) {
            const double e0 = eta(rng), e1 = eta(rng);
            const double v = std::log(std::abs(m.theta + m.alpha * e0 + e1));
            const double d = v - mean;
            mean += d / double(i + 1);
            m2 += d * (v - mean);
        }
        r.log_moment_estimate = mean;
        r.log_moment_halfwidth = 3.0 * std::sqrt(m2 / double(draws - 1) / double(draws));
    }
    if (r.log_moment_estimate + r.log_moment_halfwidth < 0.0) {
        r.h1 = Verdict::Holds;
    } else if (r.log_moment_estimate - r.log_moment_halfwidth >= 0.0) {
        r.h1 = Verdict::Fails;
    } else {
        r.h1 = Verdict::Uncertain;
        r.warnings.push_back("H1: confidence interval of E ln|theta + alpha eta0 + eta1| straddles 0");
    }

    // Supported families are symmetric with closed-form moments.
    r.h2 = Verdict::Holds;
    r.h5 = Verdict::Holds;
    r.h3 = (r.rho_M < 1.0 && t2 > 0.0 && s2 > 0.0) ? Verdict::Holds : Verdict::Fails;
    r.h4 = (r.rho_H < 1.0) ? Verdict::Holds : Verdict::Fails;
    if (t2 == 0.0) r.warnings.push_back("H3: tau2 = 0, fixed-coefficient model");

    const double w = 1.0 - 2.0 * m.alpha * t2;
    r.two_alpha_tau2_one = std::abs(w) < kTwoAlphaTau2Tol;
    const double rt2 = std::sqrt(2.0) * m.theta;
    r.sqrt2_theta_boundary = std::abs(rt2 - w) < kSqrt2ThetaTol || std::abs(rt2 + w) < kSqrt2ThetaTol;
    r.psi00_zero = std::abs(psi00_numerator(m.theta, t2, m.t(4), s2, m.s(4))) < kPsi00Tol;
    if (r.sqrt2_theta_boundary) r.warnings.push_back("parameters lie on the boundary sqrt(2) theta = +-(1 - 2 alpha tau2)");
    if (r.psi00_zero) r.warnings.push_back("psi00 vanishes: the test construction degenerates");
    return r;
}

}  // namespace rcar
