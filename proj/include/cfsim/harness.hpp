#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "cfsim/checkpoint.hpp"
#include "cfsim/config.hpp"
#include "cfsim/diagnostics.hpp"
#include "cfsim/manufactured.hpp"
#include "cfsim/stepper.hpp"

namespace cfsim {

inline constexpr const char* kCsvHeader =
    "t,mass_n,mass_c,l2_u,l2_grad_u_win,l2_c,l2_grad_c,nlogn,nlogc,energy_F,"
    "dissipation_win,lp_n_2,lp_n_4,np_cq,grad_c_4,min_c,max_n,linf_grad_c";

inline std::string csv_row(const DiagnosticsRecord& r) {
    const double cols[] = {r.t,     r.mass_n, r.mass_c,          r.l2_u,   r.l2_grad_u_win,
                           r.l2_c,  r.l2_grad_c, r.nlogn,        r.nlogc,  r.energy_F,
                           r.dissipation_win, r.lp_n_2, r.lp_n_4, r.np_cq, r.grad_c_4,
                           r.min_c, r.max_n,  r.linf_grad_c};
    std::string out;
    bool first = true;
    for (double v : cols) {
        if (!first) out.push_back(',');
        first = false;
        out += detail::format_number(v);
    }
    return out;
}

struct RunSummary {
    long total_steps = 0;
    double min_dt = 0.0;
    std::int64_t clamp_activations = 0;
    double max_divergence = 0.0;
    bool blowup = false;
    std::string blowup_reason;
};

struct RunResult {
    SimState final_state;
    std::vector<DiagnosticsRecord> series;
    RunSummary summary;
    std::string csv_path;       // empty when no output directory was given
    std::string checkpoint_path;
};

/// Integrates one scenario to t_end (or until a flagged failure), emitting a
/// diagnostics record every snapshot_interval plus one at t = 0 and one at
/// the final time. Stepper failures become the blow-up flag, never escapes.
/// validate_config = false lets sweeps push parameters outside the theorem's
/// hypotheses (k >= 1, mu = 0) so the blow-up detector can be observed.
inline RunResult run_scenario(const ScenarioConfig& cfg, const std::string& out_dir = "",
                              bool validate_config = true) {
    if (validate_config) cfg.validate();
    RunResult result;
    SimState state = build_initial_state(cfg);
    const Forcing forcing = build_forcing(cfg);
    StepConfig step_cfg = cfg.step;
    step_cfg.solver = cfg.solver;
    const Params& params = cfg.params;

    DiagnosticsAccumulator acc(1.0);
    StencilWorkspace ws(state.n.grid());
    result.series.push_back(acc.snapshot_with_windows(state, params));
    result.summary.min_dt = step_cfg.dt_max;

    std::vector<std::pair<double, SimState>> checkpoints;
    double next_snapshot = cfg.run.snapshot_interval;
    double next_checkpoint =
        cfg.run.checkpoint_interval > 0.0 ? cfg.run.checkpoint_interval : cfg.run.t_end * 2.0;

    while (state.t < cfg.run.t_end) {
        const double remaining = cfg.run.t_end - state.t;
        if (remaining < step_cfg.dt_min) break;
        StepConfig this_step = step_cfg;
        this_step.dt_max = std::min(step_cfg.dt_max, remaining);
        try {
            const StepReport report = step(state, params, forcing, this_step, &ws);
            acc.accumulate(state, params, report.dt_used);
            ++result.summary.total_steps;
            result.summary.min_dt = std::min(result.summary.min_dt, report.dt_used);
            result.summary.clamp_activations += report.clamp_activations;
            result.summary.max_divergence =
                std::max(result.summary.max_divergence, report.max_divergence);
        } catch (const Error& e) {
            result.summary.blowup = true;
            result.summary.blowup_reason = e.what();
            break;
        }
        if (state.t + 1e-12 >= next_snapshot) {
            result.series.push_back(acc.snapshot_with_windows(state, params));
            while (next_snapshot <= state.t + 1e-12) next_snapshot += cfg.run.snapshot_interval;
        }
        if (state.t + 1e-12 >= next_checkpoint) {
            checkpoints.emplace_back(state.t, state);
            next_checkpoint += cfg.run.checkpoint_interval;
        }
    }
    if (result.series.empty() || result.series.back().t < state.t)
        result.series.push_back(acc.snapshot_with_windows(state, params));
    result.final_state = state;

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path dir(out_dir);
        const std::string csv_path = (dir / cfg.run.csv_name).string();
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) throw Error(ErrorCode::IO_ERROR, "cannot open " + csv_path);
        csv << kCsvHeader << "\n";
        for (const DiagnosticsRecord& rec : result.series) csv << csv_row(rec) << "\n";
        result.csv_path = csv_path;

        int idx = 0;
        for (const auto& [t, snap] : checkpoints) {
            std::ostringstream name;
            name << "checkpoint_" << idx++ << ".ckpt";
            write_checkpoint(snap, (dir / name.str()).string());
        }
        const std::string ckpt_path = (dir / cfg.run.checkpoint_name).string();
        write_checkpoint(state, ckpt_path);
        result.checkpoint_path = ckpt_path;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Absorbing-set experiment
// ---------------------------------------------------------------------------

struct AbsorbingTail {
    double scale = 1.0;
    double max_n = 0.0;
    double linf_grad_c = 0.0;
    double linf_u = 0.0;
};

struct AbsorbingReport {
    std::vector<AbsorbingTail> tails;  // one per scale, input order
    double spread_max_n = 1.0;
    double spread_linf_grad_c = 1.0;
    double spread_linf_u = 1.0;

    double worst_spread() const {
        return std::max({spread_max_n, spread_linf_grad_c, spread_linf_u});
    }
};

inline ScenarioConfig scale_initial_data(const ScenarioConfig& base, double scale) {
    ScenarioConfig cfg = base;
    cfg.initial.n0 *= scale;
    cfg.initial.c0 *= scale;
    cfg.initial.amplitude *= scale;
    cfg.initial.base *= scale;
    cfg.initial.level_a *= scale;
    cfg.initial.level_b *= scale;
    return cfg;
}

namespace detail {

inline double tail_spread(std::vector<double> values) {
    const double lo = *std::min_element(values.begin(), values.end());
    const double hi = *std::max_element(values.begin(), values.end());
    if (hi == 0.0) return 1.0;  // all-zero tails are identical
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

}  // namespace detail

/// Runs the base scenario at each initial-data scale and compares tail maxima
/// (last 20% of [0, t_end]) across runs. Any blow-up aborts with the
/// offending scale named.
inline AbsorbingReport absorbing_experiment(const ScenarioConfig& base,
                                            const std::vector<double>& scales,
                                            const std::string& out_dir = "", int threads = 1) {
    if (scales.size() < 3)
        throw Error(ErrorCode::VALIDATION_ERROR, "absorbing experiment needs >= 3 scales");

    auto run_one = [&](std::size_t idx) -> RunResult {
        ScenarioConfig cfg = scale_initial_data(base, scales[idx]);
        std::string dir;
        if (!out_dir.empty()) {
            std::ostringstream name;
            name << "scale_" << idx;
            dir = (std::filesystem::path(out_dir) / name.str()).string();
        }
        return run_scenario(cfg, dir);
    };

    std::vector<RunResult> results(scales.size());
    if (threads > 1) {
        std::vector<std::future<RunResult>> futures;
        futures.reserve(scales.size());
        for (std::size_t s = 0; s < scales.size(); ++s)
            futures.push_back(std::async(std::launch::async, run_one, s));
        for (std::size_t s = 0; s < scales.size(); ++s) results[s] = futures[s].get();
    } else {
        for (std::size_t s = 0; s < scales.size(); ++s) results[s] = run_one(s);
    }

    AbsorbingReport report;
    for (std::size_t s = 0; s < scales.size(); ++s) {
        const RunResult& rr = results[s];
        if (rr.summary.blowup)
            throw Error(ErrorCode::BLOWUP_SUSPECTED,
                        "scale " + detail::format_number(scales[s]) + ": " + rr.summary.blowup_reason);
        const double tail_start = 0.8 * base.run.t_end;
        AbsorbingTail tail;
        tail.scale = scales[s];
        for (const DiagnosticsRecord& rec : rr.series) {
            if (rec.t < tail_start) continue;
            tail.max_n = std::max(tail.max_n, rec.max_n);
            tail.linf_grad_c = std::max(tail.linf_grad_c, rec.linf_grad_c);
            tail.linf_u = std::max(tail.linf_u, rec.linf_u);
        }
        report.tails.push_back(tail);
    }
    std::vector<double> v1, v2, v3;
    for (const AbsorbingTail& t : report.tails) {
        v1.push_back(t.max_n);
        v2.push_back(t.linf_grad_c);
        v3.push_back(t.linf_u);
    }
    report.spread_max_n = detail::tail_spread(v1);
    report.spread_linf_grad_c = detail::tail_spread(v2);
    report.spread_linf_u = detail::tail_spread(v3);
    return report;
}

// ---------------------------------------------------------------------------
// Convergence study
// ---------------------------------------------------------------------------

enum class ManufacturedCase { Diffusion, FullSystem };

struct ConvergenceLevel {
    int nx = 0;
    double h = 0.0;
    double err_n = 0.0;
    double err_c = 0.0;
    double err_u = 0.0;
};

struct ConvergenceReport {
    ManufacturedCase kind = ManufacturedCase::Diffusion;
    std::vector<ConvergenceLevel> levels;
    std::vector<double> pair_orders_n;  // between successive levels
    std::vector<double> pair_orders_c;
    std::vector<double> pair_orders_u;
    double order_n = 0.0;  // finest-pair observed order (asymptotic estimate)
    double order_c = 0.0;
    double order_u = 0.0;
    double ls_slope_n = 0.0;  // least-squares slope across all levels
    bool degenerate = false;  // repeated levels make orders meaningless
};

namespace detail {

inline double l2_error_cells(const ScalarField& f, const std::function<double(double, double)>& exact) {
    const Grid& g = f.grid();
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = f(i, j) - exact(g.xc(i), g.yc(j));
            sum += d * d;
        }
    return std::sqrt(sum * g.hx * g.hy);
}

inline double ls_slope(const std::vector<double>& h, const std::vector<double>& err) {
    // slope of log(err) against log(h)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(h.size());
    for (std::size_t idx = 0; idx < h.size(); ++idx) {
        const double x = std::log(h[idx]);
        const double y = std::log(std::max(err[idx], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    return denom == 0.0 ? 0.0 : (m * sxy - sx * sy) / denom;
}

}  // namespace detail

/// Runs a manufactured solution at each grid level and reports the observed
/// orders of accuracy. The diffusion case scales dt with h^2 to expose the
/// spatial order; the full-system case scales dt with h, so the reported
/// order is the first-order composite of splitting + upwind.
inline ConvergenceReport convergence_study(const ScenarioConfig& base, const std::vector<int>& levels,
                                           ManufacturedCase kind, int threads = 1) {
    if (levels.size() < 2)
        throw Error(ErrorCode::VALIDATION_ERROR, "convergence study needs >= 2 levels");
    ConvergenceReport report;
    report.kind = kind;

    const double aspect = base.ly / base.lx;
    auto run_level = [&](int nx) -> ConvergenceLevel {
        const int ny = std::max(4, static_cast<int>(std::lround(nx * aspect)));
        const Grid g = make_grid(nx, ny, base.lx, base.ly);
        ConvergenceLevel lvl;
        lvl.nx = nx;
        lvl.h = std::min(g.hx, g.hy);

        Params params = base.params;
        StepConfig step_cfg = base.step;
        step_cfg.solver = base.solver;
        // tighten the solves well below the discretization error
        step_cfg.solver.tol = std::min(step_cfg.solver.tol, 1e-12);

        if (kind == ManufacturedCase::Diffusion) {
            params.chi = 0.0;
            params.r = 0.0;
            params.mu = 0.0;
            params.beta = 0.0;
            const DiffusionSolution exact(base.lx, base.ly);
            SimState state = exact.sample_state(g, 0.0);
            const Forcing forcing = Forcing::zero(g);
            step_cfg.dt_max = 0.2 * lvl.h * lvl.h;
            step_cfg.dt_min = std::min(step_cfg.dt_min, 1e-3 * step_cfg.dt_max);
            const double t_end = 0.1;
            StencilWorkspace ws(g);
            while (state.t < t_end - 1e-12) {
                StepConfig this_step = step_cfg;
                this_step.dt_max = std::min(step_cfg.dt_max, t_end - state.t);
                step(state, params, forcing, this_step, &ws);
            }
            lvl.err_n = detail::l2_error_cells(
                state.n, [&](double x, double y) { return exact.n(x, y, state.t); });
            lvl.err_c = 0.0;
            lvl.err_u = 0.0;
        } else {
            // a strong vortex makes the clean first-order advective error
            // dominate; the advective CFL then sets dt proportional to h
            const ManufacturedSolution exact(base.lx, base.ly, params, 1.2);
            SimState state = exact.sample_state(g, 0.0);
            const Forcing forcing = exact.make_forcing(g);
            step_cfg.dt_max = 0.3 * lvl.h;
            step_cfg.dt_min = std::min(step_cfg.dt_min, 1e-5 * step_cfg.dt_max);
            const double t_end = 0.25;
            StencilWorkspace ws(g);
            while (state.t < t_end - 1e-12) {
                StepConfig this_step = step_cfg;
                this_step.dt_max = std::min(step_cfg.dt_max, t_end - state.t);
                step(state, params, forcing, this_step, &ws);
            }
            lvl.err_n = detail::l2_error_cells(
                state.n, [&](double x, double y) { return exact.n(x, y, state.t); });
            lvl.err_c = detail::l2_error_cells(
                state.c, [&](double x, double y) { return exact.c(x, y, state.t); });
            double sum = 0.0;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 1; i < g.nx; ++i) {
                    const double d = state.u.ux(i, j) - exact.ux(g.xf(i), g.yc(j), state.t);
                    sum += d * d;
                }
            for (int j = 1; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double d = state.u.uy(i, j) - exact.uy(g.xc(i), g.yf(j), state.t);
                    sum += d * d;
                }
            lvl.err_u = std::sqrt(sum * g.hx * g.hy);
        }
        return lvl;
    };

    report.levels.resize(levels.size());
    if (threads > 1) {
        std::vector<std::future<ConvergenceLevel>> futures;
        for (int nx : levels) futures.push_back(std::async(std::launch::async, run_level, nx));
        for (std::size_t idx = 0; idx < futures.size(); ++idx) report.levels[idx] = futures[idx].get();
    } else {
        for (std::size_t idx = 0; idx < levels.size(); ++idx)
            report.levels[idx] = run_level(levels[static_cast<std::size_t>(idx)]);
    }

    auto pair_order = [](const ConvergenceLevel& a, const ConvergenceLevel& b, double ea, double eb) {
        return std::log(ea / eb) / std::log(a.h / b.h);
    };
    for (std::size_t idx = 0; idx + 1 < report.levels.size(); ++idx) {
        const ConvergenceLevel& a = report.levels[idx];
        const ConvergenceLevel& b = report.levels[idx + 1];
        if (a.h == b.h) {
            report.degenerate = true;
            report.pair_orders_n.push_back(0.0);
            report.pair_orders_c.push_back(0.0);
            report.pair_orders_u.push_back(0.0);
            continue;
        }
        report.pair_orders_n.push_back(pair_order(a, b, a.err_n, b.err_n));
        if (kind == ManufacturedCase::FullSystem) {
            report.pair_orders_c.push_back(pair_order(a, b, a.err_c, b.err_c));
            report.pair_orders_u.push_back(pair_order(a, b, a.err_u, b.err_u));
        }
    }
    if (!report.degenerate) {
        report.order_n = report.pair_orders_n.back();
        if (kind == ManufacturedCase::FullSystem) {
            report.order_c = report.pair_orders_c.back();
            report.order_u = report.pair_orders_u.back();
        }
        std::vector<double> hs, en;
        for (const ConvergenceLevel& lvl : report.levels) {
            hs.push_back(lvl.h);
            en.push_back(lvl.err_n);
        }
        report.ls_slope_n = detail::ls_slope(hs, en);
    }
    return report;
}

}  // namespace cfsim
