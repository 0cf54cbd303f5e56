#include "rcar/second_order.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "rcar/error.hpp"

namespace rcar {

namespace {

struct UVectors {
    Vector U0, U1, U2;
};

UVectors u_vectors(const ModelMoments& m) {
    const double t2 = m.t(2), t4 = m.t(4);
    return {{1.0, 0.0, t2}, {0.0, t2, 0.0}, {t2, 0.0, t4}};
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

}  // namespace

SmallMatrix second_moment_matrix(const ModelMoments& m) {
    const double th = m.theta, al = m.alpha;
    const auto u = u_vectors(m);
    const Vector c1 = (th * th) * u.U0 + (2.0 * th) * u.U1 + u.U2;
    const Vector c2 = (2.0 * al) * (th * u.U0 + u.U1);
    const Vector c3 = (al * al) * u.U0;
    return SmallMatrix::from_columns({c1, c2, c3});
}

SmallMatrix lag_matrix(const ModelMoments& m) {
    const auto u = u_vectors(m);
    return SmallMatrix::from_columns({m.theta * u.U0 + u.U1, m.alpha * u.U0, Vector(3, 0.0)});
}

SecondOrderTables build_second_order(const ModelMoments& m) {
    SecondOrderTables t;
    const auto u = u_vectors(m);
    t.U0 = u.U0;
    t.U1 = u.U1;
    t.U2 = u.U2;
    t.M = second_moment_matrix(m);
    t.N = lag_matrix(m);
    t.sigma2 = m.s(2);
    t.rho_M = spectral_radius(t.M);
    if (!(t.rho_M < 1.0))
        fail(ErrorKind::Hypothesis,
             "no second-order stationary solution (H3 violated): rho(M) = " + std::to_string(t.rho_M));
    t.Lambda = t.sigma2 * solve(SmallMatrix::identity(3) - t.M, t.U0, "Lambda = sigma2 (I3 - M)^-1 U0");
    if (!(t.Lambda[0] > 1e-12))
        fail(ErrorKind::Pathological, "gamma_X(0) vanishes: the process is deterministic");
    return t;
}

double autocovariance(const SecondOrderTables& tables, int h) {
    const int a = std::abs(h);
    if (a > kMaxLag) fail(ErrorKind::Domain, "autocovariance: |h| exceeds 1000");
    return (mat_power(tables.N, unsigned(a)) * tables.Lambda)[0];
}

Acvf acvf(const SecondOrderTables& tables, int max_lag) {
    if (max_lag < 0 || max_lag > kMaxLag) fail(ErrorKind::Domain, "acvf: lag range must be within 0..1000");
    Acvf out;
    Vector v = tables.Lambda;
    out.values.reserve(std::size_t(max_lag) + 1);
    for (int h = 0; h <= max_lag; ++h) {
        out.values.push_back(v[0]);
        v = tables.N * v;
    }
    const double g0 = tables.Lambda[0];
    out.theta_star = autocovariance(tables, 1) / g0;
    out.vartheta_star = autocovariance(tables, 2) / g0;
    return out;
}

Vector lemma1_sequence(const ModelMoments& m, unsigned k, unsigned h) {
    const Vector u0 = u_vectors(m).U0;
    return mat_power(lag_matrix(m), h) * (mat_power(second_moment_matrix(m), k) * u0);
}

double table1_moment(int a, int b, const ModelMoments& m) {
    if (a < 0 || a > 4 || b < 0 || b > 4) fail(ErrorKind::Domain, "table1_moment: a and b must lie in 0..4");
    double s = 0.0;
    for (int i = 0; i <= b; ++i) s += binom(b, i) * std::pow(m.theta, b - i) * m.t(a + i);
    return s;
}

}  // namespace rcar
