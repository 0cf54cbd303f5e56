#include "rcar/model.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "rcar/error.hpp"

namespace rcar {

std::string_view to_string(NoiseFamily f) noexcept {
    switch (f) {
        case NoiseFamily::Gaussian: return "gaussian";
        case NoiseFamily::Uniform: return "uniform";
        case NoiseFamily::Laplace: return "laplace";
        case NoiseFamily::Rademacher: return "rademacher";
    }
    return "unknown";
}

NoiseFamily parse_noise_family(std::string_view name) {
    if (name == "gaussian" || name == "normal") return NoiseFamily::Gaussian;
    if (name == "uniform") return NoiseFamily::Uniform;
    if (name == "laplace") return NoiseFamily::Laplace;
    if (name == "rademacher") return NoiseFamily::Rademacher;
    fail(ErrorKind::Config, "unsupported noise family '" + std::string(name) + "'");
}

NoiseSpec NoiseSpec::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        fail(ErrorKind::Config, "noise spec '" + std::string(text) + "' must be family:scale");
    NoiseSpec spec;
    spec.family = parse_noise_family(text.substr(0, colon));
    const auto num = text.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), spec.scale);
    if (ec != std::errc() || ptr != num.data() + num.size())
        fail(ErrorKind::Config, "noise spec '" + std::string(text) + "': bad scale");
    spec.validate();
    return spec;
}

std::string NoiseSpec::str() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(family) << ':' << scale;
    return os.str();
}

void NoiseSpec::validate() const {
    if (!std::isfinite(scale) || !(scale > 0.0))
        fail(ErrorKind::Config, "noise scale must be finite and positive (variance > 0)");
}

double MomentSet::operator[](int k) const {
    switch (k) {
        case 0: return 1.0;
        case 2: return m2;
        case 4: return m4;
        case 6: return m6;
        case 8: return m8;
        default:
            if (k > 0 && k < 8 && k % 2 == 1) return 0.0;
            fail(ErrorKind::Domain, "noise moment of order " + std::to_string(k) + " unavailable");
    }
}

void MomentSet::validate() const {
    if (!(m2 > 0.0)) fail(ErrorKind::Config, "noise moments: m2 must be positive");
    if (!(m4 >= m2 * m2 * (1.0 - 1e-12))) fail(ErrorKind::Config, "noise moments: m4 < m2^2");
    if (!(m6 >= 0.0) || !(m8 >= 0.0)) fail(ErrorKind::Config, "noise moments: negative m6 or m8");
    if (!std::isfinite(m8)) fail(ErrorKind::Config, "noise moments: non-finite m8");
}

MomentSet noise_moments(const NoiseSpec& spec) {
    spec.validate();
    const double v = spec.scale;
    MomentSet m;
    switch (spec.family) {
        case NoiseFamily::Gaussian:
            m = {v, 3 * v * v, 15 * v * v * v, 105 * v * v * v * v};
            break;
        case NoiseFamily::Uniform: {
            const double c2 = v * v;
            m = {c2 / 3, c2 * c2 / 5, c2 * c2 * c2 / 7, c2 * c2 * c2 * c2 / 9};
            break;
        }
        case NoiseFamily::Laplace: {
            const double b2 = v * v;
            m = {2 * b2, 24 * b2 * b2, 720 * b2 * b2 * b2, 40320 * b2 * b2 * b2 * b2};
            break;
        }
        case NoiseFamily::Rademacher: {
            const double s2 = v * v;
            m = {s2, s2 * s2, s2 * s2 * s2, s2 * s2 * s2 * s2};
            break;
        }
        default:
            fail(ErrorKind::Config, "unsupported noise family");
    }
    m.validate();
    return m;
}

double kurtosis_ratio(NoiseFamily f) noexcept {
    switch (f) {
        case NoiseFamily::Gaussian: return 3.0;
        case NoiseFamily::Uniform: return 9.0 / 5.0;
        case NoiseFamily::Laplace: return 6.0;
        case NoiseFamily::Rademacher: return 1.0;
    }
    return 3.0;
}

NoiseSampler::NoiseSampler(const NoiseSpec& spec)
    : family_(spec.family),
      scale_(spec.scale),
      normal_(0.0, std::sqrt(spec.scale)),
      uniform_(-spec.scale, spec.scale),
      exponential_(1.0 / spec.scale),
      coin_(0.5) {
    spec.validate();
}

double NoiseSampler::operator()(std::mt19937_64& rng) {
    switch (family_) {
        case NoiseFamily::Gaussian: return normal_(rng);
        case NoiseFamily::Uniform: return uniform_(rng);
        case NoiseFamily::Laplace: {
            const double e = exponential_(rng);
            return coin_(rng) ? e : -e;
        }
        case NoiseFamily::Rademacher: return coin_(rng) ? scale_ : -scale_;
    }
    return 0.0;
}

ModelParams::ModelParams(double theta, double alpha, NoiseSpec eps, std::optional<NoiseSpec> eta)
    : theta_(theta), alpha_(alpha), eps_(eps), eta_(eta) {
    if (!std::isfinite(theta) || !std::isfinite(alpha))
        fail(ErrorKind::Config, "theta and alpha must be finite");
    moments_.theta = theta;
    moments_.alpha = alpha;
    moments_.eps = noise_moments(eps_);
    moments_.eta = eta_ ? noise_moments(*eta_) : MomentSet::zero();
    if (std::abs(2.0 * alpha * moments_.eta.m2 - 1.0) < kTwoAlphaTau2Tol)
        fail(ErrorKind::Pathological, "2*alpha*tau2 = 1: the process is deterministic");
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        case Verdict::Uncertain: return "uncertain";
    }
    return "unknown";
}

}  // namespace rcar
