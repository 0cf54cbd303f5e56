#pragma once

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace rcar {

enum class NoiseFamily { Gaussian, Uniform, Laplace, Rademacher };

std::string_view to_string(NoiseFamily f) noexcept;
NoiseFamily parse_noise_family(std::string_view name);

/**
 * @brief Symmetric noise law.
 *
 * scale is the family's natural parameter: the variance for Gaussian,
 * the half-width c of U[-c, c], b for Laplace(0, b), the amplitude s of +-s.
 */
struct NoiseSpec {
    NoiseFamily family = NoiseFamily::Gaussian;
    double scale = 1.0;

    /// Parses "family:scale", e.g. "gaussian:0.2".
    static NoiseSpec parse(std::string_view text);
    std::string str() const;
    void validate() const;
};

/// Even moments of one noise. Odd moments are zero by symmetry.
struct MomentSet {
    double m2 = 0.0, m4 = 0.0, m6 = 0.0, m8 = 0.0;

    /// Moment of order k in 0..8; 0 for odd k.
    double operator[](int k) const;
    void validate() const;
    static MomentSet zero() noexcept { return {}; }
};

MomentSet noise_moments(const NoiseSpec& spec);

/// m4 / m2^2 of the family; the (H5) map is g(t) = ratio * t^2.
double kurtosis_ratio(NoiseFamily f) noexcept;

/// Draws from one noise law. Holds distribution state, so keep one per stream.
class NoiseSampler {
public:
    explicit NoiseSampler(const NoiseSpec& spec);
    double operator()(std::mt19937_64& rng);

private:
    NoiseFamily family_;
    double scale_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
    std::exponential_distribution<double> exponential_;
    std::bernoulli_distribution coin_;
};

/// Everything the moment machinery needs: (theta, alpha) and the two moment sets.
/// eta may be all zeros (fixed-coefficient AR(1)).
struct ModelMoments {
    double theta = 0.0;
    double alpha = 0.0;
    MomentSet eps;
    MomentSet eta;

    double s(int k) const { return eps[k]; }
    double t(int k) const { return eta[k]; }
};

/**
 * @brief Full parameterization of the process.
 *
 * An absent eta means a fixed coefficient (theta_t = theta).
 */
class ModelParams {
public:
    ModelParams(double theta, double alpha, NoiseSpec eps, std::optional<NoiseSpec> eta);

    double theta() const noexcept { return theta_; }
    double alpha() const noexcept { return alpha_; }
    const NoiseSpec& eps() const noexcept { return eps_; }
    const std::optional<NoiseSpec>& eta() const noexcept { return eta_; }
    bool random_coefficient() const noexcept { return eta_.has_value(); }

    const ModelMoments& moments() const noexcept { return moments_; }
    double sigma(int k) const { return moments_.eps[k]; }
    double tau(int k) const { return moments_.eta[k]; }

private:
    double theta_;
    double alpha_;
    NoiseSpec eps_;
    std::optional<NoiseSpec> eta_;
    ModelMoments moments_;
};

/// Proximity thresholds for the excluded parameter set.
inline constexpr double kTwoAlphaTau2Tol = 1e-9;
inline constexpr double kSqrt2ThetaTol = 1e-9;
inline constexpr double kPsi00Tol = 1e-8;

enum class Verdict { Holds, Fails, Uncertain };
std::string_view to_string(Verdict v) noexcept;

struct HypothesisReport {
    double rho_M = 0.0;
    double rho_H = 0.0;
    double log_moment_estimate = 0.0;
    double log_moment_halfwidth = 0.0;  ///< 3 standard errors
    bool two_alpha_tau2_one = false;
    bool sqrt2_theta_boundary = false;
    bool psi00_zero = false;
    Verdict h1 = Verdict::Holds;
    Verdict h2 = Verdict::Holds;
    Verdict h3 = Verdict::Holds;
    Verdict h4 = Verdict::Holds;
    Verdict h5 = Verdict::Holds;
    std::vector<std::string> warnings;
};

/// Report-only check of (H1)-(H5) and of the excluded set. Never throws for valid params.
HypothesisReport check_hypotheses(const ModelParams& params, long mc_draws, unsigned long long seed);

}  // namespace rcar
