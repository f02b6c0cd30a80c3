// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// pass. Criteria run out of numeric order (cheap ones first) and print in
// order at the end.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "cfsim/cfsim.hpp"

namespace fs = std::filesystem;
using namespace cfsim;

namespace {

struct Criterion {
    std::string id;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<Criterion> g_results;

template <class Fn>
void run_criterion(const std::string& id, Fn&& fn) {
    Criterion crit;
    crit.id = id;
    const auto start = std::chrono::steady_clock::now();
    try {
        fn(crit);
    } catch (const std::exception& e) {
        crit.pass = false;
        crit.detail = std::string("exception: ") + e.what();
    }
    crit.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "  ... " << id << (crit.pass ? " ok" : " FAILED") << " (" << crit.seconds << " s)\n";
    g_results.push_back(crit);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ScenarioConfig boundedness_config() {
    ScenarioConfig cfg;
    cfg.nx = cfg.ny = 64;
    cfg.lx = cfg.ly = 1.0;
    cfg.params = Params{};  // r = mu = alpha = beta = chi = 1, k = eta = 0.5
    cfg.initial.preset = InitialPreset::GaussianBump;
    cfg.initial.amplitude = 5.0;
    cfg.initial.width = 0.1;
    cfg.initial.center_x = 0.5;
    cfg.initial.center_y = 0.5;
    cfg.initial.c0 = 1.0;
    cfg.potential.preset = PotentialPreset::LinearGravity;
    cfg.potential.g = 1.0;
    cfg.forcing.preset = ForcingPreset::Oscillatory;
    cfg.forcing.amplitude = 0.1;
    cfg.forcing.frequency = 1.0;
    cfg.run.t_end = 50.0;
    cfg.run.snapshot_interval = 0.1;
    return cfg;
}

ScenarioConfig homogeneous_config() {
    ScenarioConfig cfg;
    cfg.nx = cfg.ny = 16;
    cfg.initial.preset = InitialPreset::Uniform;
    cfg.initial.n0 = 1.0;
    cfg.initial.c0 = 1.0;
    cfg.potential.preset = PotentialPreset::Constant;
    cfg.forcing.preset = ForcingPreset::Zero;
    cfg.run.t_end = 5.0;
    cfg.run.snapshot_interval = 0.25;
    return cfg;
}

// RK4 for the homogeneous (n, c) system, local to the gate.
struct Ode2 {
    double n, c;
};
Ode2 rk4_system(Ode2 y0, double t_end, double dt, const Params& p) {
    auto f = [&](Ode2 y) {
        return Ode2{p.r * y.n - p.mu * y.n * y.n / log_eta(y.n, p.eta),
                    -p.alpha * y.c + p.beta * y.n};
    };
    Ode2 y = y0;
    double t = 0.0;
    while (t < t_end - 1e-13) {
        const double h = std::min(dt, t_end - t);
        const Ode2 k1 = f(y);
        const Ode2 k2 = f({y.n + 0.5 * h * k1.n, y.c + 0.5 * h * k1.c});
        const Ode2 k3 = f({y.n + 0.5 * h * k2.n, y.c + 0.5 * h * k2.c});
        const Ode2 k4 = f({y.n + h * k3.n, y.c + h * k3.c});
        y.n += h / 6.0 * (k1.n + 2 * k2.n + 2 * k3.n + k4.n);
        y.c += h / 6.0 * (k1.c + 2 * k2.c + 2 * k3.c + k4.c);
        t += h;
    }
    return y;
}

}  // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / "cfsim_acceptance";
    std::error_code ec;
    fs::remove_all(work, ec);
    fs::create_directories(work);

    RunResult a1_result;  // shared by A1/A4/A5

    run_criterion("A3 mass dynamics oracle", [&](Criterion& crit) {
        const ScenarioConfig cfg = homogeneous_config();
        const double dt = cfg.step.dt_max;
        const RunResult result = run_scenario(cfg);
        if (result.summary.blowup) {
            crit.detail = "unexpected blow-up: " + result.summary.blowup_reason;
            return;
        }
        double worst = 0.0;
        for (const DiagnosticsRecord& rec : result.series) {
            const Ode2 ode = rk4_system({1.0, 1.0}, rec.t, 1e-4, cfg.params);
            const double area = cfg.lx * cfg.ly;
            worst = std::max(worst, std::abs(rec.mass_n / area - ode.n) / ode.n);
            worst = std::max(worst, std::abs(rec.mass_c / area - ode.c) / ode.c);
        }
        crit.pass = worst <= 5.0 * dt;
        std::ostringstream ss;
        ss << "max rel error " << worst << " vs bound " << 5.0 * dt;
        crit.detail = ss.str();
    });

    run_criterion("A7 lemma-lab suite", [&](Criterion& crit) {
        const LemmaCheck odi = check_odi_bound(100, 1001, 1e-8);
        const LemmaCheck odi_prime = check_odi_prime_bound(100, 1002, 1e-8);
        const LemmaCheck young = check_young_log(1000000, 1003);
        const LemmaCheck threshold = check_log_threshold();
        crit.pass = odi.pass && odi_prime.pass && young.pass && threshold.pass;
        crit.detail = "odi: " + odi.detail + "; odi': " + odi_prime.detail +
                      "; young: " + young.detail + "; threshold: " + threshold.detail;
    });

    run_criterion("A8 determinism & persistence", [&](Criterion& crit) {
        ScenarioConfig cfg = homogeneous_config();
        const RunResult r1 = run_scenario(cfg, (work / "det1").string());
        const RunResult r2 = run_scenario(cfg, (work / "det2").string());
        const bool csv_identical = slurp(r1.csv_path) == slurp(r2.csv_path);

        const SimState replay = read_checkpoint(r1.checkpoint_path);
        const bool state_exact = replay.t == r1.final_state.t &&
                                 replay.n.data() == r1.final_state.n.data() &&
                                 replay.c.data() == r1.final_state.c.data() &&
                                 replay.u.ux_data() == r1.final_state.u.ux_data() &&
                                 replay.u.uy_data() == r1.final_state.u.uy_data();
        const std::string copy = (work / "roundtrip.ckpt").string();
        write_checkpoint(replay, copy);
        const bool bytes_exact = slurp(copy) == slurp(r1.checkpoint_path);

        crit.pass = csv_identical && state_exact && bytes_exact;
        crit.detail = std::string("csv ") + (csv_identical ? "identical" : "DIFFER") +
                      ", checkpoint state " + (state_exact ? "exact" : "DIFFER") + ", bytes " +
                      (bytes_exact ? "exact" : "DIFFER");
    });

    run_criterion("A6 discretization order", [&](Criterion& crit) {
        ScenarioConfig base;
        base.nx = base.ny = 32;
        const ConvergenceReport diffusion =
            convergence_study(base, {32, 64, 128}, ManufacturedCase::Diffusion);
        const ConvergenceReport full =
            convergence_study(base, {32, 64, 128}, ManufacturedCase::FullSystem);
        const double composite = std::min({full.order_n, full.order_c, full.order_u});
        crit.pass = !diffusion.degenerate && diffusion.order_n >= 1.9 && !full.degenerate &&
                    composite >= 0.9;
        std::ostringstream ss;
        ss << "diffusion order " << diffusion.order_n << " (>= 1.9); full orders n=" << full.order_n
           << " c=" << full.order_c << " u=" << full.order_u << " (min >= 0.9)";
        crit.detail = ss.str();
    });

    run_criterion("A1 global boundedness", [&](Criterion& crit) {
        const ScenarioConfig cfg = boundedness_config();
        a1_result = run_scenario(cfg, (work / "a1").string());
        if (a1_result.summary.blowup) {
            crit.detail = "blow-up flagged: " + a1_result.summary.blowup_reason;
            return;
        }
        CriteriaSpec spec;  // max_n, l2_grad_c, l2_u, energy_F at factor 1.05
        const std::vector<Verdict> verdicts = summarize(a1_result.csv_path, spec);
        bool all = true;
        std::ostringstream ss;
        for (const Verdict& v : verdicts) {
            all = all && v.pass;
            ss << v.criterion << (v.pass ? " ok" : " FAIL") << " (tail " << v.measured << " vs "
               << v.threshold << "); ";
        }
        crit.pass = all;
        crit.detail = ss.str();
    });

    run_criterion("A4 positivity and comparison bound", [&](Criterion& crit) {
        if (a1_result.series.empty()) {
            crit.detail = "A1 run unavailable";
            return;
        }
        const double alpha = 1.0, min_c0 = 1.0;
        bool ok = !a1_result.summary.blowup;
        double worst_margin = 1e300;
        for (const DiagnosticsRecord& rec : a1_result.series) {
            if (rec.min_n < 0.0) ok = false;
            const double floor = std::exp(-alpha * rec.t) * min_c0 * (1.0 - 1e-6);
            worst_margin = std::min(worst_margin, rec.min_c - floor);
            if (rec.min_c < floor) ok = false;
        }
        if (a1_result.summary.clamp_activations != 0) ok = false;
        crit.pass = ok;
        std::ostringstream ss;
        ss << "min margin over floor " << worst_margin << ", clamps "
           << a1_result.summary.clamp_activations;
        crit.detail = ss.str();
    });

    run_criterion("A5 incompressibility", [&](Criterion& crit) {
        if (a1_result.series.empty()) {
            crit.detail = "A1 run unavailable";
            return;
        }
        crit.pass = !a1_result.summary.blowup && a1_result.summary.max_divergence <= 1e-9;
        std::ostringstream ss;
        ss << "max |div u| over all steps " << a1_result.summary.max_divergence;
        crit.detail = ss.str();
    });

    run_criterion("A2 absorbing set", [&](Criterion& crit) {
        const ScenarioConfig cfg = boundedness_config();
        const AbsorbingReport report =
            absorbing_experiment(cfg, {0.5, 1.0, 5.0}, (work / "a2").string());
        crit.pass = report.spread_max_n <= 1.5 && report.spread_linf_grad_c <= 1.5 &&
                    report.spread_linf_u <= 1.5;
        std::ostringstream ss;
        ss << "spreads: max_n " << report.spread_max_n << ", linf_grad_c "
           << report.spread_linf_grad_c << ", linf_u " << report.spread_linf_u << " (<= 1.5)";
        crit.detail = ss.str();
    });

    std::sort(g_results.begin(), g_results.end(),
              [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
    bool all_pass = true;
    std::cout << "\n=== acceptance criteria ===\n";
    for (const Criterion& crit : g_results) {
        all_pass = all_pass && crit.pass;
        std::cout << (crit.pass ? "[PASS] " : "[FAIL] ") << crit.id << " — " << crit.detail << " ["
                  << crit.seconds << " s]\n";
    }
    std::cout << (all_pass ? "ALL CRITERIA PASSED\n" : "SOME CRITERIA FAILED\n");
    return all_pass ? 0 : 1;
}
