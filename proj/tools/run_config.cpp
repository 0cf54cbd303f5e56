#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "rcar/error.hpp"
#include "rcar/kernels.hpp"
#include "rcar/simulate.hpp"

namespace rcar::cli {

namespace {

std::string strip_dashes(std::string s) {
    while (!s.empty() && s.front() == '-') s.erase(s.begin());
    return s;
}

double parse_number(std::string_view s, const std::string& what) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v))
        fail(ErrorKind::Config, what + ": '" + std::string(s) + "' is not a finite number");
    return v;
}

}  // namespace

void add_model_flags(CLI::App& sub, ModelFlags& f) {
    sub.add_option("--theta", f.theta, "mean coefficient theta");
    sub.add_option("--alpha", f.alpha, "MA weight alpha of the coefficient noise");
    sub.add_option("--eps", f.eps, "innovation law family:scale");
    sub.add_option("--eta", f.eta, "coefficient noise law family:scale, or none");
}

std::optional<NoiseSpec> parse_eta(const std::string& text) {
    if (text == "none") return std::nullopt;
    return NoiseSpec::parse(text);
}

ModelParams make_params(const ModelFlags& f) {
    return ModelParams(f.theta, f.alpha, NoiseSpec::parse(f.eps), parse_eta(f.eta));
}

void apply_run_file(CLI::App& sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Config, "cannot open run file '" + path + "'");
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_config(in);
    } catch (const CLI::Error& e) {
        fail(ErrorKind::Config, "run file '" + path + "': " + e.what());
    }
    for (const auto& item : items) {
        if (item.parents.size() > 1 || (item.parents.size() == 1 && item.parents[0] != sub.get_name()))
            fail(ErrorKind::Config, "run file '" + path + "': unknown key '" + item.fullname() + "'");
        if (item.name == "config") fail(ErrorKind::Config, "run file '" + path + "': nested config is not allowed");
        CLI::Option* opt = sub.get_option_no_throw("--" + item.name);
        if (opt == nullptr)
            fail(ErrorKind::Config, "run file '" + path + "': unknown key '" + item.fullname() + "'");
        if (opt->count() > 0) continue;
        try {
            opt->add_result(item.inputs);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            fail(ErrorKind::Config, "run file '" + path + "': key '" + item.name + "': " + e.what());
        }
    }
}

Seed resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return {*flag, "flag"};
    if (const char* env = std::getenv("RCAR_SEED"); env != nullptr && *env != '\0') {
        std::uint64_t v = 0;
        const std::string_view s(env);
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            fail(ErrorKind::Config, "RCAR_SEED='" + std::string(s) + "' is not an unsigned 64-bit integer");
        return {v, "RCAR_SEED"};
    }
    return {0, "default"};
}

std::vector<double> parse_range(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
        fail(ErrorKind::Config, "range '" + text + "' must look like a:b:step");
    const std::string_view t(text);
    const double a = parse_number(t.substr(0, c1), "range start");
    const double b = parse_number(t.substr(c1 + 1, c2 - c1 - 1), "range end");
    const double step = parse_number(t.substr(c2 + 1), "range step");
    if (!(step > 0.0) || b < a) fail(ErrorKind::Config, "range '" + text + "' needs a <= b and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 1000000) fail(ErrorKind::Config, "range '" + text + "' has more than 10^6 points");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = a + double(i) * step;
    return out;
}

nlohmann::json provenance(const CLI::App& sub, const std::optional<ModelParams>& params,
                          const std::optional<Seed>& seed) {
    nlohmann::json p;
    p["tool"] = "rcar";
    p["version"] = RCAR_VERSION;
    p["command"] = sub.get_name();
    p["generator"] = std::string(kGeneratorId);
    p["kernels"] = std::string(kernels::to_string(kernels::active_isa()));
    if (params) {
        nlohmann::json m;
        m["theta"] = params->theta();
        m["alpha"] = params->alpha();
        m["eps"] = params->eps().str();
        m["eta"] = params->eta() ? params->eta()->str() : "none";
        m["sigma2"] = params->sigma(2);
        m["sigma4"] = params->sigma(4);
        m["tau2"] = params->tau(2);
        m["tau4"] = params->tau(4);
        p["params"] = m;
    }
    if (seed) {
        p["seed"] = seed->value;
        p["seed_source"] = seed->source;
    }
    nlohmann::json settings = nlohmann::json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = strip_dashes(opt->get_name());
        if (name == "help" || name.empty()) continue;
        if (opt->count() > 0) {
            const auto& r = opt->results();
            if (r.size() == 1) {
                settings[name] = r.front();
            } else {
                settings[name] = r;
            }
        } else {
            settings[name] = opt->get_default_str();
        }
    }
    p["settings"] = settings;
    return p;
}

}  // namespace rcar::cli
