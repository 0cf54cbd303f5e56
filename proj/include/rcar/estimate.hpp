#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "rcar/numerics.hpp"
#include "rcar/simulate.hpp"

namespace rcar {

enum class ThetaSource { Hat, Tilde };
std::string_view to_string(ThetaSource s) noexcept;
ThetaSource parse_theta_source(std::string_view s);

/// Families assumed for the (H5) maps sigma4 = g(sigma2), tau4 = h(tau2).
struct PlugInFamilies {
    NoiseFamily eps = NoiseFamily::Gaussian;
    NoiseFamily eta = NoiseFamily::Gaussian;
};

struct EstimationReport {
    std::size_t n = 0;
    double xbar = 0.0;
    double theta_hat = 0.0;
    double vartheta_hat = 0.0;
    double theta_tilde = 0.0;
    double gamma_tilde = 0.0;
    double sigma2_hat = 0.0;
    double tau2_bar = 0.0;
    double sigma2_bar = 0.0;
    double sigma4_bar = 0.0;
    double tau4_bar = 0.0;
    double psi0_hat = 0.0;
    double statistic = 0.0;
    double p_value = 1.0;
    double level = 0.05;
    bool reject = false;
    ThetaSource theta_hat_source = ThetaSource::Tilde;
    PlugInFamilies families;
};

/// Mean of x_1..x_n (x_0 excluded).
double sample_mean(const Trajectory& traj);
double theta_hat(const Trajectory& traj);
double vartheta_hat(const Trajectory& traj);

/// Yule-Walker correction f(x, y) = ((1 - 2y) x / (1 - 2x^2), (y - x^2) / (1 - 2x^2)).
std::pair<double, double> f_map(double x, double y);
/// Jacobian J(i, j) = d f_i / d x_j.
SmallMatrix f_jacobian(double x, double y);

struct YuleWalker {
    double theta_hat = 0.0;
    double vartheta_hat = 0.0;
    double theta_tilde = 0.0;
    double gamma_tilde = 0.0;
};

/// theta_hat, vartheta_hat and their f-image in one pass over x.
YuleWalker yule_walker(std::span<const double> x);

struct ResidualFit {
    double sigma2_hat = 0.0;
    std::vector<double> residuals;  ///< eps_hat_1..eps_hat_n
};

ResidualFit residual_variance(const Trajectory& traj, double theta_used);

struct NichollsQuinn {
    double tau2_bar = 0.0;
    double sigma2_bar = 0.0;
};

/// Regression of squared residuals on Z_t = X_{t-1}^2.
NichollsQuinn nicholls_quinn(const Trajectory& traj, std::span<const double> residuals);

/// Chi-square test of H0: alpha = 0. level in (0, 1].
EstimationReport correlation_test(const Trajectory& traj, double level, ThetaSource source = ThetaSource::Tilde,
                                  PlugInFamilies families = {});

inline constexpr std::size_t kMinTestLength = 50;

}  // namespace rcar
