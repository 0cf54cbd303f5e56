// rcar: command-line front end for the RCAR(1) library.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rcar/asymptotics.hpp"
#include "rcar/error.hpp"
#include "rcar/estimate.hpp"
#include "rcar/harness.hpp"
#include "rcar/simulate.hpp"
#include "run_config.hpp"

using nlohmann::json;

namespace rcar::cli {
namespace {

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kDegenerate = 3, kHypothesis = 4, kPathological = 5 };

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Config:
        case ErrorKind::Domain: return kUsage;
        case ErrorKind::Parse:
        case ErrorKind::Degenerate:
        case ErrorKind::Numeric: return kDegenerate;
        case ErrorKind::Hypothesis:
        case ErrorKind::Explosion: return kHypothesis;
        case ErrorKind::Pathological: return kPathological;
    }
    return kInternal;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const SmallMatrix& a) {
    json rows = json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < a.cols(); ++j) r.push_back(num(a(i, j)));
        rows.push_back(r);
    }
    return rows;
}

json to_json(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

struct OutputFlags {
    std::string out;
    std::string format;
};

void add_output_flags(CLI::App& sub, OutputFlags& o) {
    sub.add_option("--out", o.out, "output path (default stdout); 'json' or 'csv' selects the format");
    sub.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

/// Resolves the format and writes either the JSON document or the CSV body.
void emit(OutputFlags o, const std::string& default_format, const json& doc,
          const std::function<void(std::ostream&)>& csv = {}) {
    if (o.out == "json" || o.out == "csv") {
        o.format = o.out;
        o.out.clear();
    }
    const std::string fmt = o.format.empty() ? default_format : o.format;
    if (fmt == "csv" && !csv) fail(ErrorKind::Config, "this subcommand writes JSON only");
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) fail(ErrorKind::Config, "cannot open '" + o.out + "' for writing");
    }
    std::ostream& os = o.out.empty() ? std::cout : file;
    if (fmt == "csv") {
        csv(os);
    } else {
        os << doc.dump(2) << '\n';
    }
    os.flush();
    if (!os) fail(ErrorKind::Config, "write to '" + (o.out.empty() ? std::string("stdout") : o.out) + "' failed");
}

json hypotheses_json(const HypothesisReport& r) {
    json j;
    j["rho_M"] = r.rho_M;
    j["rho_H"] = r.rho_H;
    j["log_moment_estimate"] = r.log_moment_estimate;
    j["log_moment_halfwidth"] = r.log_moment_halfwidth;
    j["H1"] = to_string(r.h1);
    j["H2"] = to_string(r.h2);
    j["H3"] = to_string(r.h3);
    j["H4"] = to_string(r.h4);
    j["H5"] = to_string(r.h5);
    j["two_alpha_tau2_one"] = r.two_alpha_tau2_one;
    j["sqrt2_theta_boundary"] = r.sqrt2_theta_boundary;
    j["psi00_zero"] = r.psi00_zero;
    j["warnings"] = r.warnings;
    return j;
}

json estimation_json(const EstimationReport& r) {
    json j;
    j["n"] = r.n;
    j["xbar"] = r.xbar;
    j["theta_hat"] = r.theta_hat;
    j["vartheta_hat"] = r.vartheta_hat;
    j["theta_tilde"] = r.theta_tilde;
    j["gamma_tilde"] = r.gamma_tilde;
    j["sigma2_hat"] = r.sigma2_hat;
    j["tau2_bar"] = r.tau2_bar;
    j["sigma2_bar"] = r.sigma2_bar;
    j["sigma4_bar"] = r.sigma4_bar;
    j["tau4_bar"] = r.tau4_bar;
    j["psi0_hat"] = r.psi0_hat;
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    j["level"] = r.level;
    j["reject"] = r.reject;
    j["theta_bar_source"] = std::string(to_string(r.theta_hat_source));
    j["eps_family"] = std::string(to_string(r.families.eps));
    j["eta_family"] = std::string(to_string(r.families.eta));
    return j;
}

json mc_json(const MCReport& r) {
    json j;
    j["experiment"] = std::string(to_string(r.experiment));
    j["status"] = r.status;
    j["pass"] = r.pass();
    j["n"] = r.n;
    j["replicates"] = r.replicates;
    j["master_seed"] = r.master_seed;
    j["level"] = r.level;
    j["replicates_failed"] = r.replicates_failed;
    j["failure_messages"] = r.failure_messages;
    json t = json::object(), e = json::object(), tol = json::object(), pass = json::object();
    for (const auto& v : r.targets) t[v.name] = num(v.value);
    for (const auto& v : r.empirical) e[v.name] = num(v.value);
    json checks = json::array();
    for (const auto& c : r.checks) {
        tol[c.name] = num(c.tolerance);
        pass[c.name] = c.pass;
        checks.push_back({{"name", c.name},
                          {"empirical", num(c.empirical)},
                          {"target", num(c.target)},
                          {"tolerance", num(c.tolerance)},
                          {"rule", c.rule},
                          {"pass", c.pass}});
    }
    j["targets"] = t;
    j["empirical"] = e;
    j["tolerance"] = tol;
    j["checks_pass"] = pass;
    j["checks"] = checks;
    j["notes"] = r.notes;
    j["columns"] = r.columns;
    json rows = json::array();
    for (const auto& row : r.per_replicate) rows.push_back(to_json(row));
    j["per_replicate"] = rows;
    return j;
}

void mc_csv(const MCReport& r, std::ostream& os) {
    os << "replicate";
    for (const auto& c : r.columns) os << ',' << c;
    os << '\n';
    for (std::size_t i = 0; i < r.per_replicate.size(); ++i) {
        os << i;
        for (double v : r.per_replicate[i]) os << ',' << format_double(v);
        os << '\n';
    }
}

MixedMomentKey parse_key(const std::string& text) {
    MixedMomentKey k;
    int* f[] = {&k.a, &k.b, &k.c, &k.p, &k.q};
    std::size_t pos = 0;
    for (int i = 0; i < 5; ++i) {
        const auto next = text.find(',', pos);
        const bool last = i == 4;
        if (last != (next == std::string::npos)) fail(ErrorKind::Config, "key '" + text + "' must be a,b,c,p,q");
        const std::string part = text.substr(pos, last ? std::string::npos : next - pos);
        try {
            std::size_t used = 0;
            *f[i] = std::stoi(part, &used);
            if (used != part.size() || *f[i] < 0) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            fail(ErrorKind::Config, "key '" + text + "' must hold five non-negative integers");
        }
        pos = next + 1;
    }
    return k;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Random-coefficient AR(1) with MA(1) coefficient noise: moments, simulation, estimation, test"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.set_version_flag("--version", RCAR_VERSION);

    ModelFlags mf;
    OutputFlags of;
    std::string config_path;
    std::optional<std::uint64_t> seed_flag;

    auto with_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run file of key = value lines");
    };

    auto* moments = app.add_subcommand("moments", "second-order tables and autocovariances (fourth-order with --order 4)");
    int order = 2;
    int max_lag = 10;
    add_model_flags(*moments, mf);
    moments->add_option("--order", order, "2 or 4")->check(CLI::IsMember({2, 4}));
    moments->add_option("--max-lag", max_lag, "largest lag of the autocovariance")->check(CLI::Range(0, kMaxLag));
    add_output_flags(*moments, of);
    with_config(moments);

    auto* variance = app.add_subcommand("variance", "limits and asymptotic variances");
    add_model_flags(*variance, mf);
    add_output_flags(*variance, of);
    with_config(variance);

    auto* check = app.add_subcommand("check", "stationarity and moment conditions");
    long mc_draws = 100000;
    add_model_flags(*check, mf);
    check->add_option("--mc-draws", mc_draws, "draws for the log-moment condition");
    check->add_option("--seed", seed_flag, "master seed (RCAR_SEED if absent)");
    add_output_flags(*check, of);
    with_config(check);

    auto* simulate_cmd = app.add_subcommand("simulate", "simulate one trajectory");
    std::size_t sim_n = 1000;
    std::size_t burn_in = kDefaultBurnIn;
    add_model_flags(*simulate_cmd, mf);
    simulate_cmd->add_option("--n", sim_n, "path length");
    simulate_cmd->add_option("--burn-in", burn_in, "initial burn-in (doubled until the start is forgotten)");
    simulate_cmd->add_option("--seed", seed_flag, "master seed (RCAR_SEED if absent)");
    add_output_flags(*simulate_cmd, of);
    with_config(simulate_cmd);

    std::string in_path;
    double level = 0.05;
    std::string theta_source = "tilde";
    std::string eps_family = "gaussian";
    std::string eta_family = "gaussian";
    auto add_test_flags = [&](CLI::App* sub) {
        sub->add_option("--in", in_path, "CSV series with header t,x")->required();
        sub->add_option("--level", level, "test level in (0, 1]");
        sub->add_option("--theta-source", theta_source, "hat or tilde")->check(CLI::IsMember({"hat", "tilde"}));
        sub->add_option("--eps-family", eps_family, "family assumed for sigma4 = g(sigma2)");
        sub->add_option("--eta-family", eta_family, "family assumed for tau4 = h(tau2)");
        add_output_flags(*sub, of);
        with_config(sub);
    };
    auto* estimate_cmd = app.add_subcommand("estimate", "full estimation report of a series");
    add_test_flags(estimate_cmd);
    auto* test_cmd = app.add_subcommand("test", "chi-square test of alpha = 0");
    add_test_flags(test_cmd);

    auto* mc = app.add_subcommand("mc", "Monte Carlo experiments");
    std::string experiment = "clt_theta";
    std::size_t replicates = 2000;
    unsigned workers = 1;
    std::vector<double> alpha_grid;
    std::vector<std::string> keys;
    bool no_replicates = false;
    std::size_t mc_n = 5000;
    add_model_flags(*mc, mf);
    mc->add_option("--experiment", experiment, "clt_mean, clt_theta, clt_couple, size_power, rates, mixed_moment_oracle");
    mc->add_option("--n", mc_n, "path length");
    mc->add_option("--replicates", replicates, "number of replicates");
    mc->add_option("--seed", seed_flag, "master seed (RCAR_SEED if absent)");
    mc->add_option("--level", level, "test level for size_power");
    mc->add_option("--workers", workers, "worker threads; output does not depend on it");
    mc->add_option("--burn-in", burn_in, "initial burn-in");
    mc->add_option("--alpha-grid", alpha_grid, "alpha values for size_power (must include 0)")->delimiter(',');
    mc->add_option("--theta-source", theta_source, "hat or tilde")->check(CLI::IsMember({"hat", "tilde"}));
    mc->add_option("--eps-family", eps_family, "family assumed for sigma4 = g(sigma2)");
    mc->add_option("--eta-family", eta_family, "family assumed for tau4 = h(tau2)");
    mc->add_option("--key", keys, "mixed moment key a,b,c,p,q (repeatable)");
    mc->add_flag("--no-replicates", no_replicates, "omit per-replicate rows from the report");
    add_output_flags(*mc, of);
    with_config(mc);

    auto* region = app.add_subcommand("region", "grid of spectral radii rho(M), rho(H)");
    std::string theta_range = "-1:1:0.05";
    std::string alpha_range = "-1:1:0.05";
    add_model_flags(*region, mf);
    region->add_option("--theta-range", theta_range, "a:b:step");
    region->add_option("--alpha-range", alpha_range, "a:b:step");
    add_output_flags(*region, of);
    with_config(region);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        if (!config_path.empty()) apply_run_file(*sub, config_path);

        if (sub == moments) {
            const auto params = make_params(mf);
            const auto& m = params.moments();
            const auto so = build_second_order(m);
            const auto a = acvf(so, max_lag);
            json doc;
            doc["provenance"] = provenance(*sub, params, std::nullopt);
            doc["U0"] = to_json(so.U0);
            doc["M"] = to_json(so.M);
            doc["N"] = to_json(so.N);
            doc["Lambda"] = to_json(so.Lambda);
            doc["rho_M"] = so.rho_M;
            doc["acvf"] = to_json(a.values);
            doc["theta_star"] = a.theta_star;
            doc["vartheta_star"] = a.vartheta_star;
            if (order == 4) {
                const auto fo = build_fourth_order(m, so);
                doc["H"] = to_json(fo.H);
                doc["G"] = to_json(fo.G);
                doc["Delta"] = to_json(fo.Delta);
                doc["Lambda5"] = to_json(fo.Lambda5);
                doc["rho_H"] = fo.rho_H;
            }
            emit(of, "json", doc);
        } else if (sub == variance) {
            const auto params = make_params(mf);
            const auto st = sigma_psi(params.moments());
            json doc;
            doc["provenance"] = provenance(*sub, params, std::nullopt);
            doc["theta_star"] = st.lim.theta_star;
            doc["vartheta_star"] = st.lim.vartheta_star;
            doc["gamma"] = st.lim.gamma;
            doc["kappa2"] = st.kappa2;
            doc["omega2"] = st.omega2;
            doc["Sigma"] = to_json(st.Sigma);
            doc["Psi"] = to_json(st.Psi);
            doc["psi"] = st.psi;
            doc["psi0"] = num(st.psi0);
            doc["psi00"] = num(st.psi00);
            emit(of, "json", doc);
        } else if (sub == check) {
            const auto params = make_params(mf);
            const auto seed = resolve_seed(seed_flag);
            const auto r = check_hypotheses(params, mc_draws, seed.value);
            json doc = hypotheses_json(r);
            doc["provenance"] = provenance(*sub, params, seed);
            emit(of, "json", doc);
        } else if (sub == simulate_cmd) {
            const auto params = make_params(mf);
            const auto seed = resolve_seed(seed_flag);
            const auto tr = simulate(params, sim_n, seed.value, burn_in);
            json doc;
            doc["provenance"] = provenance(*sub, params, seed);
            doc["burn_in"] = tr.burn_in;
            doc["burn_in_converged"] = tr.burn_in_converged;
            doc["x"] = to_json(tr.x);
            emit(of, "csv", doc, [&](std::ostream& os) { write_csv(tr, os); });
            if (!tr.burn_in_converged)
                std::cerr << "rcar: warning: burn-in did not forget the start within " << tr.burn_in << " steps\n";
        } else if (sub == estimate_cmd || sub == test_cmd) {
            const auto tr = ingest(in_path);
            const PlugInFamilies fam{parse_noise_family(eps_family), parse_noise_family(eta_family)};
            const auto r = correlation_test(tr, level, parse_theta_source(theta_source), fam);
            json doc;
            if (sub == estimate_cmd) {
                doc = estimation_json(r);
            } else {
                doc = {{"n", r.n},
                       {"gamma_tilde", r.gamma_tilde},
                       {"psi0_hat", r.psi0_hat},
                       {"statistic", r.statistic},
                       {"p_value", r.p_value},
                       {"level", r.level},
                       {"reject", r.reject}};
            }
            doc["provenance"] = provenance(*sub, std::nullopt, std::nullopt);
            doc["provenance"]["input"] = in_path;
            emit(of, "json", doc);
        } else if (sub == mc) {
            const auto params = make_params(mf);
            const auto seed = resolve_seed(seed_flag);
            MCConfig cfg{params};
            cfg.n = mc_n;
            cfg.replicates = replicates;
            cfg.master_seed = seed.value;
            cfg.level = level;
            cfg.experiment = parse_experiment(experiment);
            cfg.burn_in = burn_in;
            cfg.workers = workers;
            cfg.alpha_grid = alpha_grid;
            cfg.theta_source = parse_theta_source(theta_source);
            cfg.families = {parse_noise_family(eps_family), parse_noise_family(eta_family)};
            for (const auto& k : keys) cfg.keys.push_back(parse_key(k));
            cfg.keep_replicates = !no_replicates;
            const auto rep = run_experiment(cfg);
            json doc = mc_json(rep);
            doc["provenance"] = provenance(*sub, params, seed);
            emit(of, "json", doc, [&](std::ostream& os) { mc_csv(rep, os); });
        } else if (sub == region) {
            const auto eps = NoiseSpec::parse(mf.eps);
            eps.validate();
            const auto eta = parse_eta(mf.eta);
            const auto thetas = parse_range(theta_range);
            const auto alphas = parse_range(alpha_range);
            ModelMoments m;
            m.eps = noise_moments(eps);
            m.eta = eta ? noise_moments(*eta) : MomentSet::zero();
            struct Row { double theta, alpha, rho_M, rho_H; };
            std::vector<Row> rows;
            rows.reserve(thetas.size() * alphas.size());
            for (double th : thetas) {
                for (double al : alphas) {
                    m.theta = th;
                    m.alpha = al;
                    rows.push_back({th, al, spectral_radius(second_moment_matrix(m)),
                                    spectral_radius(fourth_moment_matrix(m))});
                }
            }
            json doc;
            doc["provenance"] = provenance(*sub, std::nullopt, std::nullopt);
            doc["provenance"]["eps"] = eps.str();
            doc["provenance"]["eta"] = eta ? eta->str() : "none";
            doc["columns"] = {"theta", "alpha", "rho_M", "rho_H"};
            json data = json::array();
            for (const auto& r : rows) data.push_back({r.theta, r.alpha, r.rho_M, r.rho_H});
            doc["rows"] = data;
            emit(of, "csv", doc, [&](std::ostream& os) {
                os << "theta,alpha,rho_M,rho_H\n";
                for (const auto& r : rows)
                    os << format_double(r.theta) << ',' << format_double(r.alpha) << ','
                       << format_double(r.rho_M) << ',' << format_double(r.rho_H) << '\n';
            });
        }
    } catch (const Error& e) {
        std::cerr << "rcar: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "rcar: internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kOk;
}

}  // namespace rcar::cli

int main(int argc, char** argv) { return rcar::cli::run(argc, argv); }
