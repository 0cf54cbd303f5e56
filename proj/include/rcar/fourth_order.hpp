#pragma once

#include <array>

#include "rcar/second_order.hpp"

namespace rcar {

struct FourthOrderTables {
    std::array<Vector, 5> V;  ///< V0..V4
    SmallMatrix H;
    SmallMatrix G;
    Vector R;
    Vector Delta;    ///< delta_a = E[eta_t^a X_t^4], a = 0..4
    Vector Lambda5;  ///< E[eta_t^a X_t^2], a = 0..4
    double rho_H = 0.0;
};

std::array<Vector, 5> v_vectors(const ModelMoments& m);
SmallMatrix fourth_moment_matrix(const ModelMoments& m);  ///< H
SmallMatrix g_matrix(const ModelMoments& m);              ///< G

/// Throws ErrorKind::Hypothesis when rho(H) >= 1.
FourthOrderTables build_fourth_order(const ModelMoments& m, const SecondOrderTables& so);
inline FourthOrderTables build_fourth_order(const ModelParams& p, const SecondOrderTables& so) {
    return build_fourth_order(p.moments(), so);
}

/// H^k V0.
Vector lemma2_sequence(const ModelMoments& m, unsigned k);
/// H^k G^(l-k) V0, requires 1 <= k < l.
Vector lemma3_sequence(const ModelMoments& m, unsigned l, unsigned k);

}  // namespace rcar
