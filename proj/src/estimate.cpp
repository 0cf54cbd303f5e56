#include "rcar/estimate.hpp"

#include <cmath>
#include <string>
#include <tuple>

#include "rcar/asymptotics.hpp"
#include "rcar/error.hpp"
#include "rcar/kernels.hpp"

namespace rcar {

namespace {

std::span<const double> series(const Trajectory& traj) { return {traj.x.data(), traj.x.size()}; }

void require_length(const Trajectory& traj, std::size_t n, const char* op) {
    if (traj.n() < n)
        fail(ErrorKind::Degenerate, std::string(op) + ": series needs n >= " + std::to_string(n));
}

}  // namespace

std::string_view to_string(ThetaSource s) noexcept { return s == ThetaSource::Hat ? "hat" : "tilde"; }

ThetaSource parse_theta_source(std::string_view s) {
    if (s == "hat") return ThetaSource::Hat;
    if (s == "tilde") return ThetaSource::Tilde;
    fail(ErrorKind::Config, "theta source must be 'hat' or 'tilde'");
}

double sample_mean(const Trajectory& traj) {
    require_length(traj, 1, "sample_mean");
    return kernels::active().sum(series(traj).subspan(1)) / double(traj.n());
}

double theta_hat(const Trajectory& traj) {
    require_length(traj, 1, "theta_hat");
    const auto s = kernels::active().lag_sums(series(traj));
    if (!(s.s00 > 0.0)) fail(ErrorKind::Degenerate, "theta_hat: all-zero window, denominator vanishes");
    return s.s01 / s.s00;
}

double vartheta_hat(const Trajectory& traj) {
    require_length(traj, 2, "vartheta_hat");
    const auto s = kernels::active().lag_sums(series(traj));
    if (!(s.s22 > 0.0)) fail(ErrorKind::Degenerate, "vartheta_hat: all-zero window, denominator vanishes");
    return s.s02 / s.s22;
}

std::pair<double, double> f_map(double x, double y) {
    const double d = 1.0 - 2.0 * x * x;
    if (std::abs(d) <= 1e-9) fail(ErrorKind::Pathological, "f: x = +-1/sqrt(2)");
    return {(1.0 - 2.0 * y) * x / d, (y - x * x) / d};
}

SmallMatrix f_jacobian(double x, double y) {
    const double d = 1.0 - 2.0 * x * x;
    if (std::abs(d) <= 1e-9) fail(ErrorKind::Pathological, "f: x = +-1/sqrt(2)");
    const double d2 = d * d;
    return {{(1 - 2 * y) * (1 + 2 * x * x) / d2, -2 * x / d}, {-2 * x * (1 - 2 * y) / d2, 1 / d}};
}

YuleWalker yule_walker(std::span<const double> x) {
    if (x.size() < 3) fail(ErrorKind::Degenerate, "yule_walker: series needs n >= 2");
    const auto s = kernels::active().lag_sums(x);
    if (!(s.s00 > 0.0) || !(s.s22 > 0.0)) fail(ErrorKind::Degenerate, "yule_walker: all-zero window");
    YuleWalker yw;
    yw.theta_hat = s.s01 / s.s00;
    yw.vartheta_hat = s.s02 / s.s22;
    std::tie(yw.theta_tilde, yw.gamma_tilde) = f_map(yw.theta_hat, yw.vartheta_hat);
    return yw;
}

ResidualFit residual_variance(const Trajectory& traj, double theta_used) {
    require_length(traj, 2, "residual_variance");
    const auto& x = traj.x;
    ResidualFit fit;
    fit.residuals.resize(traj.n());
    for (std::size_t t = 1; t < x.size(); ++t) fit.residuals[t - 1] = x[t] - theta_used * x[t - 1];
    fit.sigma2_hat = kernels::active().residual_sums(series(traj), theta_used).see / double(traj.n());
    return fit;
}

NichollsQuinn nicholls_quinn(const Trajectory& traj, std::span<const double> residuals) {
    const std::size_t n = traj.n();
    if (residuals.size() != n) fail(ErrorKind::Domain, "nicholls_quinn: need one residual per transition");
    const auto& x = traj.x;
    double zsum = 0.0, esum = 0.0, zsq = 0.0;
    for (std::size_t t = 1; t <= n; ++t) {
        zsum += x[t - 1] * x[t - 1];
        esum += residuals[t - 1] * residuals[t - 1];
    }
    const double zbar = zsum / double(n);
    double szz = 0.0, sze = 0.0;
    for (std::size_t t = 1; t <= n; ++t) {
        const double z = x[t - 1] * x[t - 1];
        const double dz = z - zbar;
        szz += dz * dz;
        sze += dz * residuals[t - 1] * residuals[t - 1];
        zsq += z * z;
    }
    if (!(szz > 1e-12 * zsq)) fail(ErrorKind::Degenerate, "nicholls_quinn: regressor X_{t-1}^2 is constant");
    NichollsQuinn nq;
    nq.tau2_bar = sze / szz;
    nq.sigma2_bar = esum / double(n) - zbar * nq.tau2_bar;
    return nq;
}

EstimationReport correlation_test(const Trajectory& traj, double level, ThetaSource source,
                                  PlugInFamilies families) {
    if (!(level > 0.0 && level <= 1.0)) fail(ErrorKind::Domain, "correlation_test: level must lie in (0, 1]");
    require_length(traj, kMinTestLength, "correlation_test");
    const auto& k = kernels::active();
    const auto x = series(traj);
    const double n = double(traj.n());

    EstimationReport r;
    r.n = traj.n();
    r.level = level;
    r.theta_hat_source = source;
    r.families = families;
    r.xbar = k.sum(x.subspan(1)) / n;

    const auto yw = yule_walker(x);
    r.theta_hat = yw.theta_hat;
    r.vartheta_hat = yw.vartheta_hat;
    r.theta_tilde = yw.theta_tilde;
    r.gamma_tilde = yw.gamma_tilde;

    const auto rs = k.residual_sums(x, r.theta_hat);
    r.sigma2_hat = rs.see / n;
    const double zbar = rs.sz / n;
    const auto reg = k.regression_sums(x, r.theta_hat, zbar);
    if (!(reg.szz > 0.0)) fail(ErrorKind::Degenerate, "correlation_test: regressor X_{t-1}^2 is constant");
    r.tau2_bar = reg.sze / reg.szz;
    r.sigma2_bar = r.sigma2_hat - zbar * r.tau2_bar;
    r.sigma4_bar = kurtosis_ratio(families.eps) * r.sigma2_bar * r.sigma2_bar;
    r.tau4_bar = kurtosis_ratio(families.eta) * r.tau2_bar * r.tau2_bar;

    const double theta_bar = source == ThetaSource::Tilde ? r.theta_tilde : r.theta_hat;
    try {
        r.psi0_hat = psi0_closed_form(theta_bar, r.tau2_bar, r.tau4_bar, r.sigma2_bar, r.sigma4_bar).psi0;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Pathological) throw;
        fail(ErrorKind::Degenerate, std::string("correlation_test: invalid plug-in: ") + e.what());
    }
    if (!(r.psi0_hat > 0.0))
        fail(ErrorKind::Degenerate,
             "correlation_test: invalid plug-in, psi0_hat = " + format_double(r.psi0_hat) + " is not positive");

    r.statistic = n * r.gamma_tilde * r.gamma_tilde / r.psi0_hat;
    r.p_value = chisq1_tail(r.statistic);
    r.reject = r.p_value < level;
    return r;
}

}  // namespace rcar
