// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rcar/asymptotics.hpp"
#include "rcar/error.hpp"
#include "rcar/estimate.hpp"
#include "rcar/harness.hpp"

using namespace rcar;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

ModelParams gaussian(double theta, double alpha, double sigma2, double tau2) {
    return ModelParams(theta, alpha, {NoiseFamily::Gaussian, sigma2}, NoiseSpec{NoiseFamily::Gaussian, tau2});
}

double scale_for_variance(NoiseFamily f, double v) {
    switch (f) {
        case NoiseFamily::Gaussian: return v;
        case NoiseFamily::Uniform: return std::sqrt(3.0 * v);
        case NoiseFamily::Laplace: return std::sqrt(v / 2.0);
        case NoiseFamily::Rademacher: return std::sqrt(v);
    }
    return v;
}

// 20 alpha = 0 points; the families vary so sigma4 and tau4 are not tied to one law.
std::vector<ModelParams> alpha0_grid() {
    const NoiseFamily fams[] = {NoiseFamily::Gaussian, NoiseFamily::Uniform, NoiseFamily::Laplace,
                                NoiseFamily::Rademacher};
    const double thetas[] = {-0.6, -0.3, 0.0, 0.25, 0.5};
    const double tau2s[] = {0.03, 0.12};
    const double sigma2s[] = {0.6, 1.8};
    std::vector<ModelParams> g;
    int i = 0;
    for (double th : thetas)
        for (double t2 : tau2s)
            for (double s2 : sigma2s) {
                const auto fe = fams[i % 4], fn = fams[(i / 2 + 1) % 4];
                g.emplace_back(th, 0.0, NoiseSpec{fe, scale_for_variance(fe, s2)},
                               NoiseSpec{fn, scale_for_variance(fn, t2)});
                ++i;
            }
    return g;
}

double omega0_display(const ModelMoments& m) {
    const double th2 = m.theta * m.theta, t2 = m.t(2), t4 = m.t(4), s2 = m.s(2), s4 = m.s(4);
    return (1 - th2 - t2) * (t2 * s4 * (th2 + t2 - 1) + s2 * s2 * (th2 * th2 + t4 - 6 * t2 * t2 - 1)) /
           (s2 * s2 * (th2 * th2 + t4 + 6 * th2 * t2 - 1));
}

void c1(Outcome& o) {
    double worst = 0.0;
    for (const auto& p : alpha0_grid()) {
        const auto& m = p.moments();
        const auto so = build_second_order(m);
        const auto fo = build_fourth_order(m, so);
        const double r = rel(omega_squared(m, so, fo), omega0_display(m));
        worst = std::max(worst, r);
        o.require(r <= 1e-10, "omega2 vs display");
    }
    double worst00 = 0.0;
    for (double th : {-0.7, -0.2, 0.0, 0.4, 0.8}) {
        for (double s2 : {0.5, 2.0}) {
            const ModelParams p(th, 0.0, {NoiseFamily::Uniform, scale_for_variance(NoiseFamily::Uniform, s2)},
                                std::nullopt);
            const auto& m = p.moments();
            const auto so = build_second_order(m);
            const auto fo = build_fourth_order(m, so);
            const double a = rel(omega_squared(m, so, fo), 1 - th * th);
            const double b = rel(kappa_squared(m, so), m.s(2) / ((1 - th) * (1 - th)));
            worst00 = std::max({worst00, a, b});
            o.require(a <= 1e-12 && b <= 1e-12, "fixed-coefficient omega2/kappa2");
        }
    }
    o.detail << "max rel err " << worst << " (alpha=0), " << worst00 << " (tau=0)";
}

void c2(Outcome& o) {
    double worst = 0.0;
    for (const auto& p : alpha0_grid()) {
        const auto& m = p.moments();
        const auto st = sigma_psi(m);
        const auto c = psi0_closed_form(m.theta, m.t(2), m.t(4), m.s(2), m.s(4));
        const double r = rel(st.psi, c.psi0);
        worst = std::max(worst, r);
        o.require(r <= 1e-8, "psi vs closed form");
    }
    o.detail << "max rel err " << worst;
}

void c3(Outcome& o) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> th(-0.8, 0.8), al(-1.0, 1.0), t2(0.01, 0.3), s2(0.3, 3.0);
    const NoiseFamily fams[] = {NoiseFamily::Gaussian, NoiseFamily::Uniform, NoiseFamily::Laplace,
                                NoiseFamily::Rademacher};
    std::uniform_int_distribution<int> fam(0, 3);
    const auto I3 = SmallMatrix::identity(3), I5 = SmallMatrix::identity(5);
    double worst = 0.0;
    int draws = 0;
    while (draws < 100) {
        const auto fe = fams[fam(rng)], fn = fams[fam(rng)];
        const double tau2 = t2(rng), alpha = al(rng), theta = th(rng), sigma2 = s2(rng);
        if (std::abs(1 - 2 * alpha * tau2) < 0.05) continue;
        const ModelParams p(theta, alpha, {fe, scale_for_variance(fe, sigma2)},
                            NoiseSpec{fn, scale_for_variance(fn, tau2)});
        const auto& m = p.moments();
        if (spectral_radius(fourth_moment_matrix(m)) >= 0.95) continue;
        ++draws;
        const auto so = build_second_order(m);
        const auto fo = build_fourth_order(m, so);
        auto err = [&](const Vector& a, const Vector& b) {
            double e = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) e = std::max(e, std::abs(a[k] - b[k]) / std::max(1.0, std::abs(b[k])));
            return e;
        };
        const double e1 = err((I3 - so.M) * so.Lambda, m.s(2) * so.U0);
        const double e2 = err((I5 - fo.H) * fo.Delta, m.s(2) * fo.R + m.s(4) * fo.V[0]);
        const double e3 = err((I5 - fo.G) * fo.Lambda5, m.s(2) * fo.V[0]);
        const double e4 = err(Vector{fo.Lambda5[0], fo.Lambda5[1], fo.Lambda5[2]}, so.Lambda);
        const double e5 = std::abs(spectral_radius(fo.G) - spectral_radius(so.M));
        const double e = std::max({e1, e2, e3, e4, e5});
        worst = std::max(worst, e);
        o.require(e <= 1e-10, "solve identity");
    }
    o.detail << "max err " << worst << " over " << draws << " draws";
}

void c4(Outcome& o) {
    const auto p = gaussian(0.3, 0.5, 1.0, 0.1);
    const auto so = build_second_order(p);
    const auto fo = build_fourth_order(p, so);
    const auto tr = simulate(p, 1000000, derive_seed(4, 0), kDefaultBurnIn, {true, true});
    double worst = 0.0;
    for (int a = 0; a <= 2; ++a) {
        const auto e = mixed_moment_average({0, a, 0, 0, 2}, tr);
        const double z = std::abs(e.estimate - so.Lambda[a]) / e.standard_error;
        worst = std::max(worst, z);
        o.require(z <= 3.0, "E[eta^" + std::to_string(a) + " X^2]");
    }
    for (int a = 0; a <= 4; ++a) {
        const auto e = mixed_moment_average({0, a, 0, 0, 4}, tr);
        const double z = std::abs(e.estimate - fo.Delta[a]) / e.standard_error;
        worst = std::max(worst, z);
        o.require(z <= 3.0, "E[eta^" + std::to_string(a) + " X^4]");
    }
    const auto r = lag1_ratio(tr);
    const double z = std::abs(r.estimate - 1.0 / 3.0) / r.standard_error;
    worst = std::max(worst, z);
    o.require(z <= 3.0, "lag-1 ratio");
    o.detail << "max |z| " << worst << ", lag-1 ratio " << r.estimate;
}

MCConfig mc(const ModelParams& p, Experiment e, std::size_t n, std::size_t R, std::uint64_t seed) {
    MCConfig c(p);
    c.experiment = e;
    c.n = n;
    c.replicates = R;
    c.master_seed = seed;
    c.workers = workers();
    c.keep_replicates = false;
    return c;
}

void gate(Outcome& o, const MCReport& r, const std::string& check, const std::string& label) {
    const auto& c = r.check(check);
    o.require(r.status == "ok" && c.pass, label + " " + check);
    o.detail << label << " " << check << " " << c.empirical << " vs " << c.target << "; ";
}

void c5(Outcome& o) {
    const auto p1 = gaussian(0.3, 0.5, 1.0, 0.1);
    const auto p2 = gaussian(0.3, 0.0, 1.0, 0.2);
    gate(o, run_clt_theta(mc(p1, Experiment::CltTheta, 5000, 2000, 51)), "variance_vs_omega2", "(i)");
    gate(o, run_clt_theta(mc(p2, Experiment::CltTheta, 5000, 2000, 52)), "variance_vs_omega2", "(ii)");
    gate(o, run_clt_mean(mc(p1, Experiment::CltMean, 5000, 2000, 53)), "variance_vs_kappa2", "mean");
    const auto cp = run_clt_couple(mc(p1, Experiment::CltCouple, 5000, 2000, 54));
    for (const auto* k : {"cov00_vs_Psi00", "cov01_vs_Psi01", "cov11_vs_Psi11"}) gate(o, cp, k, "couple");
}

void c6(Outcome& o) {
    const auto r = run_clt_theta(mc(gaussian(0.3, 0.5, 1.0, 0.1), Experiment::CltTheta, 10000, 2000, 61));
    gate(o, r, "theta_hat_mean_away_from_theta", "");
    gate(o, r, "theta_hat_mean_vs_theta_star", "");
    o.detail << "se " << r.value("theta_hat_mean_se");
}

void c7(Outcome& o) {
    const auto base = gaussian(0.3, 0.0, 1.0, 0.1);
    auto run = [&](std::size_t n, std::uint64_t seed) {
        return run_size_power(mc(base, Experiment::SizePower, n, 2000, seed), {0.0, 0.5});
    };
    const auto r1 = run(2000, 71);
    const double size = r1.value("rejection_rate[alpha=0]");
    const double pow1 = r1.value("rejection_rate[alpha=0.5]");
    o.require(r1.status == "ok", "status at n=2000");
    o.require(size >= 0.035 && size <= 0.065, "size in [0.035, 0.065]");
    o.require(r1.check("power_at_alpha_0.5").pass, "power over H0 rate by > 5 SE");
    const auto r2 = run(4000, 72);
    const double pow2 = r2.value("rejection_rate[alpha=0.5]");
    o.require(r2.status == "ok", "status at n=4000");
    o.require(pow2 > pow1, "power increases when n doubles");
    o.detail << "size " << size << ", power " << pow1 << " (n=2000) -> " << pow2 << " (n=4000); failed replicates "
             << r1.replicates_failed << "+" << r2.replicates_failed;
}

void c8(Outcome& o) {
    const ModelParams p(0.5, 0.0, {NoiseFamily::Gaussian, 1.0}, std::nullopt);
    const auto r = run_rates(mc(p, Experiment::Rates, 100000, 1, 81));
    o.require(std::abs(r.target("omega2") - 0.75) < 1e-12, "omega2 = 0.75");
    gate(o, r, "L_n_in_band", "");
    o.detail << "LIL running max " << r.value("lil_running_max") << " (informational)";
}

void c9(Outcome& o) {
    const auto r = run_mixed_moment_oracle(mc(gaussian(0.3, 0.5, 1.0, 0.1), Experiment::MixedMomentOracle, 1000000, 1, 91));
    o.require(r.checks.size() == 11, "11 keys");
    double worst = 0.0;
    for (const auto& c : r.checks) {
        worst = std::max(worst, std::abs(c.empirical - c.target) / (c.tolerance / 3.0));
        o.require(c.pass, c.name);
    }
    o.detail << r.checks.size() << " keys, max |z| " << worst;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> all{
        {1, "closed-form cross-checks", 1, c1},   {2, "psi consistency", 1, c2},
        {3, "moment-solve identities", 5, c3},    {4, "simulation vs theory", 30, c4},
        {5, "CLT variance reproduction", 300, c5}, {6, "inconsistency exhibit", 120, c6},
        {7, "test calibration", 300, c7},          {8, "rate property", 10, c8},
        {9, "mixed-moment oracle", 60, c9},
    };
    int failed = 0;
    for (const auto& c : all) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) o.require(false, "runtime over budget");
        std::printf("%s criterion %d (%s): %s [%.2fs of %.0fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.str().c_str(), secs, c.budget_s);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", int(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
