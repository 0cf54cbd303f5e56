#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rcar/model.hpp"

namespace rcar::cli {

/// Flags shared by every subcommand that needs a parameter point.
struct ModelFlags {
    double theta = 0.3;
    double alpha = 0.0;
    std::string eps = "gaussian:1";
    std::string eta = "gaussian:0.1";  ///< "none" for a fixed coefficient
};

void add_model_flags(CLI::App& sub, ModelFlags& f);
ModelParams make_params(const ModelFlags& f);
std::optional<NoiseSpec> parse_eta(const std::string& text);

/// Applies a flat key = value run file to `sub`. Keys name long options without the
/// leading dashes, optionally prefixed with the subcommand ("mc.n"). Options already
/// given on the command line keep their command-line value; unknown keys are an error.
void apply_run_file(CLI::App& sub, const std::string& path);

struct Seed {
    std::uint64_t value = 0;
    std::string source;  ///< "flag", "RCAR_SEED" or "default"
};

/// --seed, then RCAR_SEED, then 0.
Seed resolve_seed(const std::optional<std::uint64_t>& flag);

/// Inclusive grid "a:b:step".
std::vector<double> parse_range(const std::string& text);

/// Tool version, generator id, kernel ISA, params, seed and every option value of `sub`.
nlohmann::json provenance(const CLI::App& sub, const std::optional<ModelParams>& params,
                          const std::optional<Seed>& seed);

}  // namespace rcar::cli
