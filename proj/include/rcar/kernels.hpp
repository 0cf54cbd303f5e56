#pragma once

#include <span>
#include <string_view>

namespace rcar::kernels {

/// Lagged cross-product sums of x_0..x_n (n = x.size() - 1).
struct LagSums {
    double s00 = 0.0;  ///< sum_{t=1..n} x_{t-1}^2
    double s01 = 0.0;  ///< sum_{t=1..n} x_{t-1} x_t
    double s22 = 0.0;  ///< sum_{t=2..n} x_{t-2}^2
    double s02 = 0.0;  ///< sum_{t=2..n} x_{t-2} x_t
};

/// With e_t = x_t - theta x_{t-1} and z_t = x_{t-1}^2, t = 1..n.
struct ResidualSums {
    double see = 0.0;  ///< sum e_t^2
    double sz = 0.0;   ///< sum z_t
};

struct RegressionSums {
    double szz = 0.0;  ///< sum (z_t - zbar)^2
    double sze = 0.0;  ///< sum (z_t - zbar) e_t^2
};

struct KernelTable {
    double (*sum)(std::span<const double>);
    LagSums (*lag_sums)(std::span<const double>);
    ResidualSums (*residual_sums)(std::span<const double>, double theta);
    RegressionSums (*regression_sums)(std::span<const double>, double theta, double zbar);
};

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

/// Table for a given ISA, or nullptr when it is not compiled in or not supported by this CPU.
const KernelTable* table_for(Isa isa) noexcept;

/// Best supported ISA, unless RCAR_KERNELS=scalar forces the reference kernels.
Isa active_isa() noexcept;
const KernelTable& active() noexcept;

namespace scalar {
double sum(std::span<const double> x);
LagSums lag_sums(std::span<const double> x);
ResidualSums residual_sums(std::span<const double> x, double theta);
RegressionSums regression_sums(std::span<const double> x, double theta, double zbar);
}  // namespace scalar

}  // namespace rcar::kernels
