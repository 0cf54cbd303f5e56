#include "rcar/simulate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

#include "rcar/error.hpp"

namespace rcar {

namespace {

constexpr double kExplosion = 1e300;
constexpr double kForgetTol = 1e-8;
constexpr double kAltStart = 100.0;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

struct Attempt {
    Trajectory traj;
    bool forgot = true;
};

Attempt run(const ModelParams& p, std::size_t n, std::uint64_t seed, std::size_t burn_in, bool record) {
    std::mt19937_64 rng(seed);
    NoiseSampler eps(p.eps());
    std::optional<NoiseSampler> eta;
    if (p.eta()) eta.emplace(*p.eta());
    const double th = p.theta(), al = p.alpha();

    Attempt out;
    auto& tr = out.traj;
    tr.x.resize(n + 1);
    if (record) tr.noise = NoisePath{std::vector<double>(n + 1), std::vector<double>(n + 1)};

    double eta_prev = eta ? (*eta)(rng) : 0.0;
    double y = 0.0, z = kAltStart;
    if (burn_in == 0) {
        tr.x[0] = y;
        if (record) tr.noise->eta[0] = eta_prev;
    }
    const std::size_t total = burn_in + n;
    for (std::size_t s = 1; s <= total; ++s) {
        const double e = eta ? (*eta)(rng) : 0.0;
        const double u = eps(rng);
        const double coef = th + al * eta_prev + e;
        y = coef * y + u;
        if (s <= burn_in) z = coef * z + u;
        if (!(std::abs(y) <= kExplosion))
            fail(ErrorKind::Explosion,
                 "trajectory overflow at step " + std::to_string(s) + "; (H1) is likely violated");
        eta_prev = e;
        if (s == burn_in) {
            out.forgot = std::abs(y - z) < kForgetTol;
            tr.x[0] = y;
            if (record) {
                tr.noise->eta[0] = e;
                tr.noise->eps[0] = u;
            }
        } else if (s > burn_in) {
            const std::size_t t = s - burn_in;
            tr.x[t] = y;
            if (record) {
                tr.noise->eta[t] = e;
                tr.noise->eps[t] = u;
            }
        }
    }
    return out;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return mix64(mix64(master) ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
}

Trajectory simulate(const ModelParams& params, std::size_t n, std::uint64_t seed, std::size_t burn_in,
                    SimulateOptions options) {
    if (n < 1) fail(ErrorKind::Domain, "simulate: n must be at least 1");
    Attempt a = run(params, n, seed, burn_in, options.record_noise);
    if (options.adaptive_burn_in && burn_in > 0) {
        while (!a.forgot && burn_in < kMaxBurnIn) {
            burn_in = std::min(burn_in * 2, kMaxBurnIn);
            a = run(params, n, seed, burn_in, options.record_noise);
        }
    }
    a.traj.seed = seed;
    a.traj.burn_in = burn_in;
    a.traj.burn_in_converged = a.forgot;
    a.traj.params_echo = params;
    return std::move(a.traj);
}

CoefficientPath simulate_coefficients(const ModelParams& params, std::size_t n, std::uint64_t seed) {
    CoefficientPath path;
    path.seed = seed;
    path.theta_t.resize(n);
    std::mt19937_64 rng(seed);
    if (!params.eta()) {
        std::fill(path.theta_t.begin(), path.theta_t.end(), params.theta());
        return path;
    }
    NoiseSampler eta(*params.eta());
    double prev = eta(rng);
    for (std::size_t t = 0; t < n; ++t) {
        const double e = eta(rng);
        path.theta_t[t] = params.theta() + params.alpha() * prev + e;
        prev = e;
    }
    return path;
}

CoefficientPath coefficient_path(const Trajectory& traj) {
    if (!traj.noise || !traj.params_echo)
        fail(ErrorKind::Domain, "coefficient_path: trajectory was not simulated with recorded noise");
    const auto& p = *traj.params_echo;
    const auto& eta = traj.noise->eta;
    CoefficientPath path;
    path.seed = traj.seed;
    path.theta_t.resize(traj.n());
    for (std::size_t t = 1; t <= traj.n(); ++t)
        path.theta_t[t - 1] = p.theta() + p.alpha() * eta[t - 1] + eta[t];
    return path;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_csv(const Trajectory& traj, std::ostream& out) {
    out << "t,x\n";
    for (std::size_t t = 0; t < traj.x.size(); ++t) out << t << ',' << format_double(traj.x[t]) << '\n';
}

Trajectory read_csv(std::istream& in, const std::string& source_name) {
    auto err = [&](std::size_t line, const std::string& msg) {
        fail(ErrorKind::Parse, source_name + ": line " + std::to_string(line) + ": " + msg);
    };
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    Trajectory tr;
    tr.source = source_name;
    while (std::getline(in, line)) {
        ++lineno;
        const auto s = trim(line);
        if (!header) {
            if (s != "t,x") err(lineno, "expected header 't,x'");
            header = true;
            continue;
        }
        if (s.empty()) continue;
        const auto comma = s.find(',');
        if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos)
            err(lineno, "expected two comma-separated fields");
        const auto ts = trim(s.substr(0, comma));
        const auto xs = trim(s.substr(comma + 1));
        long long t = -1;
        auto r1 = std::from_chars(ts.data(), ts.data() + ts.size(), t);
        if (r1.ec != std::errc() || r1.ptr != ts.data() + ts.size()) err(lineno, "index is not an integer");
        if (t != static_cast<long long>(tr.x.size()))
            err(lineno, "index " + std::to_string(t) + " breaks the contiguous sequence (expected " +
                            std::to_string(tr.x.size()) + ")");
        double x = 0.0;
        auto r2 = std::from_chars(xs.data(), xs.data() + xs.size(), x);
        if (r2.ec != std::errc() || r2.ptr != xs.data() + xs.size()) err(lineno, "value is not a number");
        if (!std::isfinite(x)) err(lineno, "value is not finite");
        tr.x.push_back(x);
    }
    if (!header) err(1, "missing header 't,x'");
    if (tr.x.empty()) err(lineno, "no data rows");
    return tr;
}

Trajectory ingest(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Parse, "cannot open '" + path + "'");
    return read_csv(in, path);
}

}  // namespace rcar
