#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rcar/asymptotics.hpp"
#include "rcar/estimate.hpp"
#include "rcar/simulate.hpp"

namespace rcar {

enum class Experiment { CltMean, CltTheta, CltCouple, SizePower, Rates, MixedMomentOracle };

std::string_view to_string(Experiment e) noexcept;
Experiment parse_experiment(std::string_view s);

struct MCConfig {
    explicit MCConfig(ModelParams p) : params(std::move(p)) {}

    ModelParams params;
    std::size_t n = 5000;
    std::size_t replicates = 2000;
    std::uint64_t master_seed = 0;
    double level = 0.05;
    Experiment experiment = Experiment::CltTheta;
    std::size_t burn_in = kDefaultBurnIn;
    unsigned workers = 1;
    std::vector<double> alpha_grid;         ///< size_power; must contain 0
    ThetaSource theta_source = ThetaSource::Tilde;
    PlugInFamilies families;
    std::vector<MixedMomentKey> keys;       ///< mixed_moment_oracle; empty means the Upsilon/ell keys plus (1,0,0,2,0)
    bool keep_replicates = true;            ///< include per-replicate summaries in the report
};

struct NamedValue {
    std::string name;
    double value = 0.0;
};

/// One pass/fail flag with its tolerance rule spelled out.
struct Check {
    std::string name;
    double empirical = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    std::string rule;
    bool pass = false;
};

struct MCReport {
    Experiment experiment = Experiment::CltTheta;
    std::size_t n = 0;
    std::size_t replicates = 0;
    std::uint64_t master_seed = 0;
    double level = 0.0;
    std::size_t replicates_failed = 0;
    std::vector<std::string> failure_messages;  ///< first few, for diagnosis
    std::string status;                         ///< "ok" or "inconclusive"
    std::vector<NamedValue> targets;
    std::vector<NamedValue> empirical;
    std::vector<Check> checks;
    std::vector<std::string> columns;              ///< names of per-replicate summary fields
    std::vector<std::vector<double>> per_replicate;
    std::vector<std::string> notes;

    bool pass() const;
    double target(std::string_view name) const;
    double value(std::string_view name) const;
    const Check& check(std::string_view name) const;
};

struct OracleEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
};

/// Mean and batch-means standard error of a serially correlated sequence.
OracleEstimate batch_means(std::span<const double> values, std::size_t batches = 100);

/// Time average of eta_{t-1}^a eta_t^b eps_t^c X_{t-1}^p X_t^q over t = 1..n of a path with recorded noise.
OracleEstimate mixed_moment_average(const MixedMomentKey& key, const Trajectory& traj, std::size_t batches = 100);

/// Simulates one path of length n (n >= 10^6) and averages the key.
OracleEstimate mixed_moment_oracle(const MixedMomentKey& key, const ModelParams& params, std::size_t n,
                                   std::uint64_t seed);

/// sum X_{t-1} X_t / sum X_{t-1}^2 with a batch-means standard error (ratio linearized).
OracleEstimate lag1_ratio(const Trajectory& traj, std::size_t batches = 100);

MCReport run_clt_theta(const MCConfig& cfg);
MCReport run_clt_mean(const MCConfig& cfg);
MCReport run_clt_couple(const MCConfig& cfg);
MCReport run_size_power(const MCConfig& cfg, const std::vector<double>& alpha_grid);
MCReport run_rates(const MCConfig& cfg);
MCReport run_mixed_moment_oracle(const MCConfig& cfg);

/// Dispatches on cfg.experiment.
MCReport run_experiment(const MCConfig& cfg);

}  // namespace rcar
