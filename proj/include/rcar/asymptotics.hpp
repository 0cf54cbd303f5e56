#pragma once

#include <array>
#include <vector>

#include "rcar/fourth_order.hpp"

namespace rcar {

struct LimitSet {
    double theta_star = 0.0;
    double vartheta_star = 0.0;
    double gamma = 0.0;  ///< alpha * tau2
    double sigma2_star = 0.0;
};

LimitSet limits(const ModelMoments& m, const SecondOrderTables& so);

/// Asymptotic variance of sqrt(n) * Xbar_n.
double kappa_squared(const ModelMoments& m, const SecondOrderTables& so);

/// mu_{a,b,c,p,q} = E[eta_{t-1}^a eta_t^b eps_t^c X_{t-1}^p X_t^q].
struct MixedMomentKey {
    int a = 0, b = 0, c = 0, p = 0, q = 0;
    friend bool operator==(const MixedMomentKey&, const MixedMomentKey&) = default;
};

double mixed_moment(const MixedMomentKey& key, const ModelMoments& m, const SecondOrderTables& so,
                    const FourthOrderTables& fo);

/// The distinct mu keys entering Upsilon and ell.
std::vector<MixedMomentKey> upsilon_ell_keys();

/// Asymptotic variance of sqrt(n) (theta_hat - theta*).
double omega_squared(const ModelMoments& m, const SecondOrderTables& so, const FourthOrderTables& fo);

// Constant tables and moment matrices, exposed for inspection and tests.
SmallMatrix kbar_matrix(const ModelMoments& m);
SmallMatrix gammabar_matrix(const SecondOrderTables& so);
SmallMatrix k_matrix(const ModelMoments& m);
SmallMatrix gamma_matrix(const SecondOrderTables& so, const FourthOrderTables& fo);
SmallMatrix l_matrix(const ModelMoments& m);
SmallMatrix upsilon_matrix(const ModelMoments& m, const SecondOrderTables& so, const FourthOrderTables& fo);
double ell_scalar(const ModelMoments& m, const SecondOrderTables& so, const FourthOrderTables& fo);

struct CovarianceStack {
    LimitSet lim;
    double kappa2 = 0.0;
    double omega2 = 0.0;
    SmallMatrix Kbar, Gammabar;
    SmallMatrix K, Gamma;
    SmallMatrix L, Upsilon;
    double ell = 0.0;
    SmallMatrix SigmaML;  ///< 7x7
    SmallMatrix A;        ///< 2x7
    SmallMatrix Sigma;    ///< asymptotic covariance of sqrt(n) (theta_hat - theta*, vartheta_hat - vartheta*)
    SmallMatrix gradF;    ///< transposed Jacobian of f at (theta*, vartheta*): gradF(i, j) = d f_j / d x_i
    SmallMatrix Psi;      ///< gradF^T Sigma gradF
    double psi = 0.0;     ///< Psi lower-right entry, asymptotic variance of sqrt(n) gamma_tilde
    double psi0 = 0.0;    ///< closed form at alpha = 0 with the same (theta, tau, sigma); NaN if undefined
    double psi00 = 0.0;
};

/// Full stack. Throws ErrorKind::Pathological when |1 - 2 theta*^2| < 1e-9.
CovarianceStack sigma_psi(const ModelMoments& m, const SecondOrderTables& so, const FourthOrderTables& fo);
CovarianceStack sigma_psi(const ModelMoments& m);

struct Psi0 {
    double psi0 = 0.0;
    double psi00 = 0.0;  ///< numerator
};

double psi00_numerator(double theta, double tau2, double tau4, double sigma2, double sigma4);
Psi0 psi0_closed_form(double theta, double tau2, double tau4, double sigma2, double sigma4);

}  // namespace rcar
