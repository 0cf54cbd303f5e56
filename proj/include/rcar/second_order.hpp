#pragma once

#include <vector>

#include "rcar/model.hpp"
#include "rcar/numerics.hpp"

namespace rcar {

struct SecondOrderTables {
    Vector U0, U1, U2;
    SmallMatrix M;
    SmallMatrix N;
    Vector Lambda;  ///< (lambda0, lambda1, lambda2), lambda_a = E[eta_t^a X_t^2]
    double sigma2 = 0.0;
    double rho_M = 0.0;
};

/// Autocovariances gamma_X(h) for h = 0..max_lag.
struct Acvf {
    std::vector<double> values;
    double theta_star = 0.0;     ///< rho_X(1)
    double vartheta_star = 0.0;  ///< rho_X(2)
};

SmallMatrix second_moment_matrix(const ModelMoments& m);  ///< M
SmallMatrix lag_matrix(const ModelMoments& m);            ///< N

/// Throws ErrorKind::Hypothesis when rho(M) >= 1.
SecondOrderTables build_second_order(const ModelMoments& m);
inline SecondOrderTables build_second_order(const ModelParams& p) { return build_second_order(p.moments()); }

inline constexpr int kMaxLag = 1000;

/// gamma_X(h) = [N^|h| Lambda]_1, |h| <= 1000.
double autocovariance(const SecondOrderTables& tables, int h);
Acvf acvf(const SecondOrderTables& tables, int max_lag);

/// N^h M^k U0.
Vector lemma1_sequence(const ModelMoments& m, unsigned k, unsigned h);

/// E[eta^a (theta + eta)^b] for a, b in 0..4.
double table1_moment(int a, int b, const ModelMoments& m);

}  // namespace rcar
