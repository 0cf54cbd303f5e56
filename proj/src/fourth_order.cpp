#include "rcar/fourth_order.hpp"

#include <string>

#include "rcar/error.hpp"

namespace rcar {

std::array<Vector, 5> v_vectors(const ModelMoments& m) {
    const double t2 = m.t(2), t4 = m.t(4), t6 = m.t(6), t8 = m.t(8);
    return {Vector{1.0, 0.0, t2, 0.0, t4}, Vector{0.0, t2, 0.0, t4, 0.0}, Vector{t2, 0.0, t4, 0.0, t6},
            Vector{0.0, t4, 0.0, t6, 0.0}, Vector{t4, 0.0, t6, 0.0, t8}};
}

SmallMatrix fourth_moment_matrix(const ModelMoments& m) {
    const auto V = v_vectors(m);
    const double th = m.theta, al = m.alpha;
    const double th2 = th * th, th3 = th2 * th, th4 = th2 * th2;
    const double al2 = al * al;
    const Vector h1 = th4 * V[0] + (4 * th3) * V[1] + (6 * th2) * V[2] + (4 * th) * V[3] + V[4];
    const Vector h2 = (4 * al) * (th3 * V[0] + (3 * th2) * V[1] + (3 * th) * V[2] + V[3]);
    const Vector h3 = (6 * al2) * (th2 * V[0] + (2 * th) * V[1] + V[2]);
    const Vector h4 = (4 * al2 * al) * (th * V[0] + V[1]);
    const Vector h5 = (al2 * al2) * V[0];
    return SmallMatrix::from_columns({h1, h2, h3, h4, h5});
}

SmallMatrix g_matrix(const ModelMoments& m) {
    const auto V = v_vectors(m);
    const double th = m.theta, al = m.alpha;
    const Vector g1 = (th * th) * V[0] + (2 * th) * V[1] + V[2];
    const Vector g2 = (2 * al) * (th * V[0] + V[1]);
    const Vector g3 = (al * al) * V[0];
    return SmallMatrix::from_columns({g1, g2, g3, Vector(5, 0.0), Vector(5, 0.0)});
}

FourthOrderTables build_fourth_order(const ModelMoments& m, const SecondOrderTables& so) {
    FourthOrderTables t;
    t.V = v_vectors(m);
    t.H = fourth_moment_matrix(m);
    t.G = g_matrix(m);
    t.rho_H = spectral_radius(t.H);
    if (!(t.rho_H < 1.0))
        fail(ErrorKind::Hypothesis,
             "fourth moments do not exist (H4 violated): rho(H) = " + std::to_string(t.rho_H));
    const auto& L = so.Lambda;
    t.R = (6 * L[0]) * t.G.column(0) + (6 * L[1]) * t.G.column(1) + (6 * L[2]) * t.G.column(2);
    const auto I5 = SmallMatrix::identity(5);
    t.Delta = solve(I5 - t.H, m.s(2) * t.R + m.s(4) * t.V[0], "Delta = (I5 - H)^-1 (sigma2 R + sigma4 V0)");
    t.Lambda5 = m.s(2) * solve(I5 - t.G, t.V[0], "Lambda5 = sigma2 (I5 - G)^-1 V0");
    return t;
}

Vector lemma2_sequence(const ModelMoments& m, unsigned k) {
    return mat_power(fourth_moment_matrix(m), k) * v_vectors(m)[0];
}

Vector lemma3_sequence(const ModelMoments& m, unsigned l, unsigned k) {
    if (!(k >= 1 && k < l)) fail(ErrorKind::Domain, "lemma3_sequence: requires 1 <= k < l");
    return mat_power(fourth_moment_matrix(m), k) * (mat_power(g_matrix(m), l - k) * v_vectors(m)[0]);
}

}  // namespace rcar
