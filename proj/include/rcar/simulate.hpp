#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rcar/model.hpp"

namespace rcar {

inline constexpr std::string_view kGeneratorId = "mt19937_64/splitmix64-seed/v1";
inline constexpr std::size_t kDefaultBurnIn = 2000;
inline constexpr std::size_t kMaxBurnIn = std::size_t(1) << 16;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;
/// Seed of replicate `index` under master seed `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Noise values aligned with x: eta[t], eps[t] drive the step into x[t].
struct NoisePath {
    std::vector<double> eta;
    std::vector<double> eps;
};

struct Trajectory {
    std::vector<double> x;  ///< x_0..x_n
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;
    bool burn_in_converged = true;
    std::optional<ModelParams> params_echo;
    std::optional<NoisePath> noise;
    std::string source = "simulated";

    std::size_t n() const noexcept { return x.empty() ? 0 : x.size() - 1; }
};

struct CoefficientPath {
    std::vector<double> theta_t;  ///< theta_1..theta_n
    std::uint64_t seed = 0;
};

struct SimulateOptions {
    bool record_noise = false;
    bool adaptive_burn_in = true;  ///< double burn_in (up to 2^16) until starts at 0 and 100 agree to 1e-8
};

/// Starts at Y_0 = 0, discards burn_in steps, returns the next n + 1 values.
Trajectory simulate(const ModelParams& params, std::size_t n, std::uint64_t seed,
                    std::size_t burn_in = kDefaultBurnIn, SimulateOptions options = {});

/// theta_t = theta + alpha eta_{t-1} + eta_t for t = 1..n from the eta stream of `seed`.
CoefficientPath simulate_coefficients(const ModelParams& params, std::size_t n, std::uint64_t seed);

/// Coefficient path of a trajectory simulated with record_noise.
CoefficientPath coefficient_path(const Trajectory& traj);

Trajectory read_csv(std::istream& in, const std::string& source_name);
Trajectory ingest(const std::string& path);
void write_csv(const Trajectory& traj, std::ostream& out);

/// 17 significant digits, which round-trips every double.
std::string format_double(double v);

}  // namespace rcar
