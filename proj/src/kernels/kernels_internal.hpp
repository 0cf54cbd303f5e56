#pragma once

#include "rcar/kernels.hpp"

namespace rcar::kernels::avx2 {
double sum(std::span<const double> x);
LagSums lag_sums(std::span<const double> x);
ResidualSums residual_sums(std::span<const double> x, double theta);
RegressionSums regression_sums(std::span<const double> x, double theta, double zbar);
}  // namespace rcar::kernels::avx2
