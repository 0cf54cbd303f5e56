#include "rcar/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rcar/error.hpp"
#include "rcar/estimate.hpp"

namespace rcar {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

// E[eta^b (theta + eta)^k].
double coefficient_moment(int b, int k, const ModelMoments& m) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += binom(k, i) * std::pow(m.theta, k - i) * m.t(b + i);
    return s;
}

// E[eta_t^e X_t^p] from the solved moment vectors.
double eta_x_moment(int e, int p, const ModelMoments& m, const FourthOrderTables& fo) {
    if (p % 2 == 1) return 0.0;
    if (p == 0) return m.t(e);
    if (e > 4 || (p != 2 && p != 4))
        fail(ErrorKind::Domain, "mixed_moment: E[eta^" + std::to_string(e) + " X^" + std::to_string(p) +
                                    "] is outside the solved moment tables");
    return p == 2 ? fo.Lambda5[std::size_t(e)] : fo.Delta[std::size_t(e)];
}

double sum_all(const SmallMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j);
    return s;
}

// Appendix constants. c = 1 - 2 alpha tau2 + alpha theta^2 recurs throughout.
struct Constants {
    double th, al, t2, t4, t6, s2, s4, c;
    explicit Constants(const ModelMoments& m)
        : th(m.theta), al(m.alpha), t2(m.t(2)), t4(m.t(4)), t6(m.t(6)), s2(m.s(2)), s4(m.s(4)),
          c(1 - 2 * m.alpha * m.t(2) + m.alpha * m.theta * m.theta) {}

    // Kbar
    double kb1() const { return (1 + al * th) * (1 + al * th) * t2 + al * al * (t4 - t2 * t2); }
    double kb12() const { return al * al * (1 + al * th) * t2; }
    double kb2() const { return std::pow(al, 4) * t2; }
    double kb3() const { return (1 + al * al * t2) * s2; }

    // K
    double k1() const { return s2 * (1 + 4 * al * al * (th * th * t2 - t2 * t2 + t4)); }
    double k13() const { return 4 * std::pow(al, 3) * th * t2 * s2; }
    double k2() const { return c * (2 * al * t4 + t2 * c) + al * al * (t6 + 4 * th * th * (t4 - t2 * t2)); }
    double k24() const {
        return 2 * al * al * th * t2 * (1 + al * th * th - 4 * al * t2) + 6 * std::pow(al, 3) * th * t4;
    }
    double k25() const { return std::pow(al, 3) * (al * t4 + t2 * c); }
    double k26() const { return al * s2 * (al * t4 + t2 * c); }
    double k3() const { return 4 * std::pow(al, 4) * t2 * s2; }
    double k4() const { return 4 * std::pow(al, 4) * (th * th * t2 - t2 * t2 + t4); }
    double k45() const { return 2 * std::pow(al, 5) * th * t2; }
    double k46() const { return 2 * std::pow(al, 3) * th * t2 * s2; }
    double k5() const { return std::pow(al, 6) * t2; }
    double k56() const { return std::pow(al, 4) * t2 * s2; }
    double k6() const { return al * al * t2 * s4; }

    // L: primed (first column) and unprimed constants.
    double lp1() const { return s2; }
    double l1() const { return 2 * al * al * th * t2 * s2; }
    double lp2() const { return al * th * (t2 * c - al * (2 * t2 * t2 - 3 * t4)); }
    double l2() const { return al * t4 + t2 * c; }
    double l3() const { return 2 * std::pow(al, 3) * t2 * s2; }
    double lp4() const { return 2 * std::pow(al, 3) * (th * th * t2 - t2 * t2 + t4); }
    double l4() const { return 2 * al * al * th * t2; }
    // alpha^3 tau2, from the row-5 cross term.
    double l5() const { return std::pow(al, 3) * t2; }
    double l6() const { return al * t2 * s2 * (1 + al); }

    // m constants of ell.
    double m1() const { return s2 * (1 + t2 * (1 + al * al)); }
    double m2() const { return th * th * (1 + al * al) * t2 + (1 - al * al) * t2 * t2 + al * al * t4; }
    double m3() const { return 2 * al * th * (1 + al * al) * t2; }
    double m4() const { return al * al * (1 + al * al) * t2; }
    double m5() const { return 2 * al * th * t2; }
    double m6() const { return 2 * al * al * t2; }
};

}  // namespace

LimitSet limits(const ModelMoments& m, const SecondOrderTables& so) {
    const double t2 = m.t(2);
    const double w = 1.0 - 2.0 * m.alpha * t2;
    if (std::abs(w) < kTwoAlphaTau2Tol) fail(ErrorKind::Pathological, "limits: 2*alpha*tau2 = 1");
    LimitSet l;
    l.theta_star = m.theta / w;
    l.vartheta_star = (m.theta * m.theta + m.alpha * t2 * w) / w;
    l.gamma = m.alpha * t2;
    l.sigma2_star = (1.0 - l.theta_star * l.theta_star) * so.Lambda[0];
    return l;
}

SmallMatrix kbar_matrix(const ModelMoments& m) {
    const Constants k(m);
    return {{k.kb1(), k.kb12(), 0.0}, {k.kb12(), k.kb2(), 0.0}, {0.0, 0.0, k.kb3()}};
}

SmallMatrix gammabar_matrix(const SecondOrderTables& so) {
    const auto& L = so.Lambda;
    return {{L[0], L[1], 0.0}, {L[1], L[2], 0.0}, {0.0, 0.0, 1.0}};
}

double kappa_squared(const ModelMoments& m, const SecondOrderTables& so) {
    const double den = 1.0 - m.theta - m.alpha * m.t(2);
    if (std::abs(den) < 1e-9) fail(ErrorKind::Pathological, "kappa_squared: theta + alpha*tau2 = 1");
    return sum_all(hadamard(kbar_matrix(m), gammabar_matrix(so))) / (den * den);
}

double mixed_moment(const MixedMomentKey& key, const ModelMoments& m, const SecondOrderTables&,
                    const FourthOrderTables& fo) {
    const auto [a, b, c, p, q] = key;
    if (a < 0 || b < 0 || c < 0 || p < 0 || q < 0) fail(ErrorKind::Domain, "mixed_moment: negative exponent");
    if (b + q > 8 || c + q > 8) fail(ErrorKind::Domain, "mixed_moment: noise moment order above 8");
    // X_t = theta_t X_{t-1} + eps_t, theta_t = alpha eta_{t-1} + (theta + eta_t).
    double s = 0.0;
    for (int j = 0; j <= q; ++j) {
        const double sj = m.s(c + q - j);
        if (sj == 0.0) continue;
        for (int i = 0; i <= j; ++i) {
            const double ex = eta_x_moment(a + i, p + j, m, fo);
            if (ex == 0.0) continue;
            s += binom(q, j) * binom(j, i) * std::pow(m.alpha, i) * sj * coefficient_moment(b, j - i, m) * ex;
        }
    }
    return s;
}

std::vector<MixedMomentKey> upsilon_ell_keys() {
    return {{0, 0, 0, 2, 2}, {0, 1, 0, 2, 2}, {1, 0, 0, 2, 2}, {0, 0, 1, 1, 2}, {0, 2, 0, 2, 2},
            {1, 1, 0, 2, 2}, {0, 1, 1, 1, 2}, {0, 3, 0, 2, 2}, {1, 2, 0, 2, 2}, {0, 2, 1, 1, 2}};
}

SmallMatrix k_matrix(const ModelMoments& m) {
    const Constants k(m);
    return {{k.k1(), 0, k.k13(), 0, 0, 0},
            {0, k.k2(), 0, k.k24(), k.k25(), k.k26()},
            {k.k13(), 0, k.k3(), 0, 0, 0},
            {0, k.k24(), 0, k.k4(), k.k45(), k.k46()},
            {0, k.k25(), 0, k.k45(), k.k5(), k.k56()},
            {0, k.k26(), 0, k.k46(), k.k56(), k.k6()}};
}

SmallMatrix gamma_matrix(const SecondOrderTables& so, const FourthOrderTables& fo) {
    const double l0 = so.Lambda[0], l1 = so.Lambda[1], l2 = so.Lambda[2];
    const auto& d = fo.Delta;
    return {{l0, 0, l1, 0, 0, 0},
            {0, d[0], 0, d[1], d[2], l0},
            {l1, 0, l2, 0, 0, 0},
            {0, d[1], 0, d[2], d[3], l1},
            {0, d[2], 0, d[3], d[4], l2},
            {0, l0, 0, l1, l2, 1}};
}

SmallMatrix l_matrix(const ModelMoments& m) {
    const Constants k(m);
    const double th = k.th, al = k.al, al2 = al * al;
    const double l2 = k.l2(), l4 = k.l4(), l5 = k.l5(), l6 = k.l6();
    return {{k.lp1(), k.l1(), 0, 0, 0, 0},
            {k.lp2(), al2 * l2, th * l2, l2, al * l2, l2},
            {k.l3(), 0, 0, 0, 0, 0},
            {k.lp4(), al2 * l4, th * l4, l4, al * l4, l4},
            {al * th * l5, al2 * l5, th * l5, l5, al * l5, l5},
            {th * l6, al * l6, 0, 0, 0, 0}};
}

SmallMatrix upsilon_matrix(const ModelMoments& m, const SecondOrderTables& so, const FourthOrderTables& fo) {
    auto mu = [&](int a, int b, int c, int p, int q) { return mixed_moment({a, b, c, p, q}, m, so, fo); };
    const double l0 = so.Lambda[0], l1 = so.Lambda[1];
    const double ts = limits(m, so).theta_star;
    const auto& d = fo.Delta;
    return {{ts * l0, l0, 0, 0, 0, 0},
            {d[0], d[1], mu(0, 0, 0, 2, 2), mu(0, 1, 0, 2, 2), mu(1, 0, 0, 2, 2), mu(0, 0, 1, 1, 2)},
            {l1, 0, 0, 0, 0, 0},
            {d[1], d[2], mu(0, 1, 0, 2, 2), mu(0, 2, 0, 2, 2), mu(1, 1, 0, 2, 2), mu(0, 1, 1, 1, 2)},
            {d[2], d[3], mu(0, 2, 0, 2, 2), mu(0, 3, 0, 2, 2), mu(1, 2, 0, 2, 2), mu(0, 2, 1, 1, 2)},
            {l0, l1, 0, 0, 0, 0}};
}

double ell_scalar(const ModelMoments& m, const SecondOrderTables& so, const FourthOrderTables& fo) {
    auto mu = [&](int a, int b, int c, int p, int q) { return mixed_moment({a, b, c, p, q}, m, so, fo); };
    const Constants k(m);
    const auto& d = fo.Delta;
    const double th = k.th, al = k.al, m5 = k.m5(), m6 = k.m6();
    return k.m1() * so.Lambda[0] + k.m2() * d[0] + k.m3() * d[1] + k.m4() * d[2] +
           th * m5 * mu(0, 0, 0, 2, 2) + al * m5 * mu(1, 0, 0, 2, 2) + (1 + al) * m5 * mu(0, 1, 0, 2, 2) +
           m5 * mu(0, 0, 1, 1, 2) + m6 * mu(0, 2, 0, 2, 2) + al * m6 * mu(1, 1, 0, 2, 2) +
           m6 * mu(0, 1, 1, 1, 2);
}

double omega_squared(const ModelMoments& m, const SecondOrderTables& so, const FourthOrderTables& fo) {
    const double w = 1.0 - 2.0 * m.alpha * m.t(2);
    const double l0 = so.Lambda[0];
    return sum_all(hadamard(k_matrix(m), gamma_matrix(so, fo))) / (l0 * l0 * w * w);
}

CovarianceStack sigma_psi(const ModelMoments& m, const SecondOrderTables& so, const FourthOrderTables& fo) {
    CovarianceStack st;
    st.lim = limits(m, so);
    if (std::abs(1.0 - 2.0 * st.lim.theta_star * st.lim.theta_star) < 1e-9)
        fail(ErrorKind::Pathological, "sigma_psi: theta* = +-1/sqrt(2), f is undefined");
    st.kappa2 = kappa_squared(m, so);
    st.omega2 = omega_squared(m, so, fo);
    st.Kbar = kbar_matrix(m);
    st.Gammabar = gammabar_matrix(so);
    st.K = k_matrix(m);
    st.Gamma = gamma_matrix(so, fo);
    st.L = l_matrix(m);
    st.Upsilon = upsilon_matrix(m, so, fo);
    st.ell = ell_scalar(m, so, fo);

    const SmallMatrix KG = hadamard(st.K, st.Gamma);
    const Vector LU = hadamard(st.L, st.Upsilon) * Vector(6, 1.0);
    st.SigmaML = SmallMatrix(7, 7);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) st.SigmaML(i, j) = KG(i, j);
        st.SigmaML(i, 6) = LU[i];
        st.SigmaML(6, i) = LU[i];
    }
    st.SigmaML(6, 6) = st.ell;

    const double l0 = so.Lambda[0];
    const double w = 1.0 - 2.0 * m.alpha * m.t(2);
    st.A = SmallMatrix(2, 7);
    for (std::size_t j = 0; j < 6; ++j) {
        st.A(0, j) = 1.0 / (l0 * w);
        st.A(1, j) = m.theta / (l0 * w);
    }
    st.A(1, 6) = 1.0 / l0;
    st.Sigma = st.A * st.SigmaML * st.A.transpose();

    st.gradF = f_jacobian(st.lim.theta_star, st.lim.vartheta_star).transpose();
    st.Psi = st.gradF.transpose() * st.Sigma * st.gradF;
    st.psi = st.Psi(1, 1);

    try {
        const auto p0 = psi0_closed_form(m.theta, m.t(2), m.t(4), m.s(2), m.s(4));
        st.psi0 = p0.psi0;
        st.psi00 = p0.psi00;
    } catch (const Error&) {
        st.psi0 = std::numeric_limits<double>::quiet_NaN();
        st.psi00 = psi00_numerator(m.theta, m.t(2), m.t(4), m.s(2), m.s(4));
    }
    return st;
}

CovarianceStack sigma_psi(const ModelMoments& m) {
    const auto so = build_second_order(m);
    const auto fo = build_fourth_order(m, so);
    return sigma_psi(m, so, fo);
}

double psi00_numerator(double th, double t2, double t4, double s2, double s4) {
    const double th2 = th * th, th4 = th2 * th2, th6 = th4 * th2;
    const double a = s4 * t2 *
                     ((6 * th2 - 1) * t2 * t2 + (8 * th4 - 9 * th2 + 1) * t2 + 2 * th2 * (th2 - 1) * (th2 - 1));
    const double b = s2 * s2 * t2 *
                     (-36 * t2 * t2 * th2 + 6 * t2 * t2 - 12 * t2 * th4 + 12 * t2 * th2 - 6 * th6 + 17 * th4 +
                      6 * t4 * th2 - 12 * th2 - t4 + 1);
    const double c = s2 * s2 * (th6 - th4 + th2 * t4 - th2 - t4 + 1);
    return (t2 + th2 - 1) * (a + b + c);
}

Psi0 psi0_closed_form(double th, double t2, double t4, double s2, double s4) {
    const double th2 = th * th;
    const double quartic = th2 * th2 + 6 * th2 * t2 + t4;
    if (!(quartic < 1.0)) fail(ErrorKind::Domain, "psi0_closed_form: requires theta^4 + 6 theta^2 tau2 + tau4 < 1");
    if (std::abs(1 - 2 * th2) <= 1e-9) fail(ErrorKind::Pathological, "psi0_closed_form: theta = +-1/sqrt(2)");
    const double den = (1 - 2 * th2) * (1 - 2 * th2) * s2 * s2 * (quartic - 1);
    if (std::abs(den) < 1e-9) fail(ErrorKind::Pathological, "psi0_closed_form: vanishing denominator");
    Psi0 out;
    out.psi00 = psi00_numerator(th, t2, t4, s2, s4);
    out.psi0 = out.psi00 / den;
    return out;
}

}  // namespace rcar
