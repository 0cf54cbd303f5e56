#include "rcar/kernels.hpp"

namespace rcar::kernels::scalar {

double sum(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

LagSums lag_sums(std::span<const double> x) {
    LagSums r;
    const std::size_t len = x.size();
    if (len < 2) return r;
    double s22 = 0.0, s01 = 0.0, s02 = 0.0;
    for (std::size_t i = 0; i + 2 < len; ++i) {
        s22 += x[i] * x[i];
        s01 += x[i] * x[i + 1];
        s02 += x[i] * x[i + 2];
    }
    const double a = x[len - 2], b = x[len - 1];
    r.s22 = s22;
    r.s02 = s02;
    r.s00 = s22 + a * a;
    r.s01 = s01 + a * b;
    return r;
}

ResidualSums residual_sums(std::span<const double> x, double theta) {
    ResidualSums r;
    for (std::size_t t = 1; t < x.size(); ++t) {
        const double e = x[t] - theta * x[t - 1];
        r.see += e * e;
        r.sz += x[t - 1] * x[t - 1];
    }
    return r;
}

RegressionSums regression_sums(std::span<const double> x, double theta, double zbar) {
    RegressionSums r;
    for (std::size_t t = 1; t < x.size(); ++t) {
        const double e = x[t] - theta * x[t - 1];
        const double dz = x[t - 1] * x[t - 1] - zbar;
        r.szz += dz * dz;
        r.sze += dz * e * e;
    }
    return r;
}

}  // namespace rcar::kernels::scalar
