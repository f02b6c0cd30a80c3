// Command-line front end: single runs, absorbing-set experiments, parameter
// sweeps, convergence studies, the lemma suite, checkpoint inspection and
// CSV post-processing. Exit codes: 0 ok, 2 validation/parse error, 3 blow-up.

#include <filesystem>
#include <future>
#include <iostream>

#include <CLI11.hpp>

#include "cfsim/cfsim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBlowup = 3;

int classify(const cfsim::Error& e) {
    switch (e.code()) {
        case cfsim::ErrorCode::PARSE_ERROR:
        case cfsim::ErrorCode::VALIDATION_ERROR:
        case cfsim::ErrorCode::INVALID_DIMENSIONS:
        case cfsim::ErrorCode::IO_ERROR:
        case cfsim::ErrorCode::FORMAT_ERROR:
        case cfsim::ErrorCode::SCHEMA_ERROR:
        case cfsim::ErrorCode::NOT_FOUND:
            return kExitValidation;
        case cfsim::ErrorCode::BLOWUP_SUSPECTED:
        case cfsim::ErrorCode::DT_UNDERFLOW:
            return kExitBlowup;
        default:
            return kExitError;
    }
}

void print_summary(const cfsim::RunResult& result) {
    const cfsim::RunSummary& s = result.summary;
    std::cout << "steps: " << s.total_steps << "\n";
    std::cout << "min dt: " << s.min_dt << "\n";
    std::cout << "clamp activations: " << s.clamp_activations << "\n";
    std::cout << "max divergence: " << s.max_divergence << "\n";
    std::cout << "blow-up: " << (s.blowup ? "yes" : "no") << "\n";
    if (s.blowup) std::cout << "reason: " << s.blowup_reason << "\n";
    if (!result.series.empty()) {
        const cfsim::DiagnosticsRecord& last = result.series.back();
        std::cout << "final t = " << last.t << ", mass_n = " << last.mass_n
                  << ", max_n = " << last.max_n << ", min_c = " << last.min_c
                  << ", energy_F = " << last.energy_F << "\n";
    }
    if (!result.csv_path.empty()) std::cout << "series: " << result.csv_path << "\n";
    if (!result.checkpoint_path.empty()) std::cout << "checkpoint: " << result.checkpoint_path << "\n";
}

void apply_param(cfsim::ScenarioConfig& cfg, const std::string& name, double value) {
    if (name == "r") cfg.params.r = value;
    else if (name == "mu") cfg.params.mu = value;
    else if (name == "alpha") cfg.params.alpha = value;
    else if (name == "beta") cfg.params.beta = value;
    else if (name == "chi") cfg.params.chi = value;
    else if (name == "k") cfg.params.k = value;
    else if (name == "eta") cfg.params.eta = value;
    else if (name == "nu_visc") cfg.params.nu_visc = value;
    else throw cfsim::Error(cfsim::ErrorCode::VALIDATION_ERROR, "unknown sweep parameter '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chemotaxis-fluid simulator and diagnostics suite"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", checkpoint_path, report_dir;
    std::vector<double> scales;
    std::vector<double> sweep_values;
    std::vector<int> levels;
    std::string sweep_param, converge_case = "diffusion";
    int threads = 1;
    long long seed_override = -1;
    double report_factor = 1.05;

    CLI::App* run_cmd = app.add_subcommand("run", "integrate one scenario");
    run_cmd->add_option("config", config_path)->required();
    run_cmd->add_option("--out-dir", out_dir);
    run_cmd->add_option("--seed", seed_override);
    run_cmd->add_option("--threads", threads);

    CLI::App* absorbing_cmd = app.add_subcommand("absorbing", "multi-start absorbing-set experiment");
    absorbing_cmd->add_option("config", config_path)->required();
    absorbing_cmd->add_option("--scales", scales, "initial-data multipliers")->required()->delimiter(',');
    absorbing_cmd->add_option("--out-dir", out_dir);
    absorbing_cmd->add_option("--seed", seed_override);
    absorbing_cmd->add_option("--threads", threads);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweep");
    sweep_cmd->add_option("config", config_path)->required();
    sweep_cmd->add_option("--param", sweep_param)->required();
    sweep_cmd->add_option("--values", sweep_values)->required()->delimiter(',');
    sweep_cmd->add_option("--out-dir", out_dir);
    sweep_cmd->add_option("--seed", seed_override);
    sweep_cmd->add_option("--threads", threads);

    CLI::App* converge_cmd = app.add_subcommand("converge", "manufactured-solution convergence study");
    converge_cmd->add_option("config", config_path)->required();
    converge_cmd->add_option("--levels", levels)->required()->delimiter(',');
    converge_cmd->add_option("--case", converge_case, "diffusion or full");
    converge_cmd->add_option("--threads", threads);

    CLI::App* lemmas_cmd = app.add_subcommand("lemmas", "run the lemma suite");

    CLI::App* check_cmd = app.add_subcommand("check", "inspect a checkpoint file");
    check_cmd->add_option("checkpoint", checkpoint_path)->required();

    CLI::App* report_cmd = app.add_subcommand("report", "boundedness verdicts for CSV series");
    report_cmd->add_option("dir", report_dir)->required();
    report_cmd->add_option("--factor", report_factor);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            cfsim::ScenarioConfig cfg = cfsim::load_config(config_path);
            if (seed_override >= 0) cfg.run.seed = static_cast<unsigned>(seed_override);
            const cfsim::RunResult result = cfsim::run_scenario(cfg, out_dir);
            print_summary(result);
            return result.summary.blowup ? kExitBlowup : kExitOk;
        }
        if (absorbing_cmd->parsed()) {
            cfsim::ScenarioConfig cfg = cfsim::load_config(config_path);
            if (seed_override >= 0) cfg.run.seed = static_cast<unsigned>(seed_override);
            const cfsim::AbsorbingReport report =
                cfsim::absorbing_experiment(cfg, scales, out_dir, threads);
            std::cout << "scale,tail_max_n,tail_linf_grad_c,tail_linf_u\n";
            for (const cfsim::AbsorbingTail& t : report.tails)
                std::cout << t.scale << "," << t.max_n << "," << t.linf_grad_c << "," << t.linf_u
                          << "\n";
            std::cout << "spread max_n = " << report.spread_max_n << "\n";
            std::cout << "spread linf_grad_c = " << report.spread_linf_grad_c << "\n";
            std::cout << "spread linf_u = " << report.spread_linf_u << "\n";
            return kExitOk;
        }
        if (sweep_cmd->parsed()) {
            cfsim::ScenarioConfig base = cfsim::load_config(config_path);
            if (seed_override >= 0) base.run.seed = static_cast<unsigned>(seed_override);
            std::filesystem::create_directories(out_dir);

            auto run_one = [&](double value) {
                cfsim::ScenarioConfig cfg = base;
                apply_param(cfg, sweep_param, value);
                std::string dir = (std::filesystem::path(out_dir) /
                                   (sweep_param + "_" + cfsim::detail::format_number(value)))
                                      .string();
                return cfsim::run_scenario(cfg, dir, /*validate_config=*/false);
            };
            std::vector<cfsim::RunResult> results(sweep_values.size());
            if (threads > 1) {
                std::vector<std::future<cfsim::RunResult>> futures;
                for (double v : sweep_values)
                    futures.push_back(std::async(std::launch::async, run_one, v));
                for (std::size_t i = 0; i < futures.size(); ++i) results[i] = futures[i].get();
            } else {
                for (std::size_t i = 0; i < sweep_values.size(); ++i) results[i] = run_one(sweep_values[i]);
            }

            const std::string summary_path =
                (std::filesystem::path(out_dir) / "sweep_summary.csv").string();
            std::ofstream summary(summary_path, std::ios::binary);
            summary << "param,value,blowup,steps,min_dt,final_max_n\n";
            bool any_blowup = false;
            for (std::size_t i = 0; i < results.size(); ++i) {
                const cfsim::RunSummary& s = results[i].summary;
                any_blowup = any_blowup || s.blowup;
                summary << sweep_param << "," << cfsim::detail::format_number(sweep_values[i]) << ","
                        << (s.blowup ? "true" : "false") << "," << s.total_steps << ","
                        << cfsim::detail::format_number(s.min_dt) << ","
                        << cfsim::detail::format_number(
                               results[i].series.empty() ? 0.0 : results[i].series.back().max_n)
                        << "\n";
            }
            std::cout << "sweep summary: " << summary_path << "\n";
            return any_blowup ? kExitBlowup : kExitOk;
        }
        if (converge_cmd->parsed()) {
            cfsim::ScenarioConfig cfg = cfsim::load_config(config_path);
            const cfsim::ManufacturedCase kind = converge_case == "full"
                                                     ? cfsim::ManufacturedCase::FullSystem
                                                     : cfsim::ManufacturedCase::Diffusion;
            const cfsim::ConvergenceReport report =
                cfsim::convergence_study(cfg, levels, kind, threads);
            std::cout << "level,h,err_n,err_c,err_u\n";
            for (const cfsim::ConvergenceLevel& lvl : report.levels)
                std::cout << lvl.nx << "," << lvl.h << "," << lvl.err_n << "," << lvl.err_c << ","
                          << lvl.err_u << "\n";
            if (report.degenerate) {
                std::cout << "degenerate levels: orders not defined\n";
            } else {
                std::cout << "observed order (n): " << report.order_n << "\n";
                if (kind == cfsim::ManufacturedCase::FullSystem) {
                    std::cout << "observed order (c): " << report.order_c << "\n";
                    std::cout << "observed order (u): " << report.order_u << "\n";
                }
            }
            return kExitOk;
        }
        if (lemmas_cmd->parsed()) {
            bool all_pass = true;
            for (const cfsim::LemmaCheck& check : cfsim::run_lemma_suite()) {
                all_pass = all_pass && check.pass;
                std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << "  " << check.detail
                          << "\n";
            }
            return all_pass ? kExitOk : kExitError;
        }
        if (check_cmd->parsed()) {
            const cfsim::SimState state = cfsim::read_checkpoint(checkpoint_path);
            const cfsim::Grid& g = state.n.grid();
            std::cout << "grid: " << g.nx << "x" << g.ny << " on " << g.lx << "x" << g.ly << "\n";
            std::cout << "t = " << state.t << "\n";
            std::cout << "n in [" << state.n.min() << ", " << state.n.max() << "]\n";
            std::cout << "c in [" << state.c.min() << ", " << state.c.max() << "]\n";
            std::cout << "max |u| = " << state.u.max_abs() << "\n";
            std::cout << "max |div u| = " << cfsim::mac_divergence(state.u).max_abs() << "\n";
            return kExitOk;
        }
        if (report_cmd->parsed()) {
            cfsim::CriteriaSpec spec;
            spec.factor = report_factor;
            std::vector<cfsim::Verdict> all;
            for (const auto& entry : std::filesystem::directory_iterator(report_dir)) {
                if (entry.path().extension() != ".csv") continue;
                if (entry.path().filename() == "verdicts.csv") continue;
                try {
                    std::vector<cfsim::Verdict> verdicts = cfsim::summarize(entry.path().string(), spec);
                    for (cfsim::Verdict& v : verdicts) {
                        v.criterion = entry.path().filename().string() + ":" + v.criterion;
                        all.push_back(v);
                    }
                } catch (const cfsim::Error& e) {
                    if (e.code() != cfsim::ErrorCode::SCHEMA_ERROR) throw;
                    // non-series CSV files in the directory are skipped
                }
            }
            std::cout << cfsim::verdicts_table(all);
            const std::string verdict_path =
                (std::filesystem::path(report_dir) / "verdicts.csv").string();
            std::ofstream out(verdict_path, std::ios::binary);
            cfsim::write_verdicts_csv(all, out);
            std::cout << "verdicts: " << verdict_path << "\n";
            return kExitOk;
        }
    } catch (const cfsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}
