#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cfsim/grid.hpp"
#include "cfsim/stepper.hpp"

namespace cfsim {

enum class InitialPreset { Uniform, GaussianBump, RandomPerturbed, Checker };
enum class PotentialPreset { Constant, LinearGravity, Bump };
enum class ForcingPreset { Zero, Oscillatory };

struct InitialSpec {
    InitialPreset preset = InitialPreset::Uniform;
    double n0 = 1.0;         // uniform level / gaussian+checker ignore
    double c0 = 1.0;         // uniform c everywhere (> 0)
    double amplitude = 1.0;  // gaussian peak
    double width = 0.1;      // gaussian std dev
    double center_x = 0.5;
    double center_y = 0.5;
    double base = 1.0;       // random_perturbed base level
    double noise_amp = 0.1;  // random_perturbed relative noise
    double level_a = 0.5;    // checker low
    double level_b = 2.0;    // checker high
    int blocks = 4;          // checker blocks per side

    bool operator==(const InitialSpec&) const = default;
};

struct PotentialSpec {
    PotentialPreset preset = PotentialPreset::Constant;
    double g = 1.0;          // linear gravity slope
    double amplitude = 1.0;  // bump height
    double width = 0.2;      // bump std dev

    bool operator==(const PotentialSpec&) const = default;
};

struct ForcingSpec {
    ForcingPreset preset = ForcingPreset::Zero;
    double amplitude = 0.1;
    double frequency = 1.0;

    bool operator==(const ForcingSpec&) const = default;
};

struct RunSpec {
    double t_end = 10.0;
    double snapshot_interval = 0.1;
    double checkpoint_interval = 0.0;  // 0 = final checkpoint only
    unsigned seed = 0;
    std::string csv_name = "series.csv";
    std::string checkpoint_name = "final.ckpt";

    bool operator==(const RunSpec&) const = default;
};

struct ScenarioConfig {
    int nx = 64;
    int ny = 64;
    double lx = 1.0;
    double ly = 1.0;
    Params params;
    InitialSpec initial;
    PotentialSpec potential;
    ForcingSpec forcing;
    RunSpec run;
    SolverConfig solver;
    StepConfig step;

    bool operator==(const ScenarioConfig& o) const {
        auto params_eq = [](const Params& a, const Params& b) {
            return a.r == b.r && a.mu == b.mu && a.alpha == b.alpha && a.beta == b.beta &&
                   a.chi == b.chi && a.k == b.k && a.eta == b.eta && a.nu_visc == b.nu_visc &&
                   a.c_floor == b.c_floor;
        };
        auto solver_eq = [](const SolverConfig& a, const SolverConfig& b) {
            return a.tol == b.tol && a.max_iter == b.max_iter;
        };
        auto step_eq = [&](const StepConfig& a, const StepConfig& b) {
            return a.cfl_adv == b.cfl_adv && a.cfl_chem == b.cfl_chem && a.dt_max == b.dt_max &&
                   a.dt_min == b.dt_min && a.proj_tol == b.proj_tol &&
                   a.overflow_guard == b.overflow_guard && solver_eq(a.solver, b.solver);
        };
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly && params_eq(params, o.params) &&
               initial == o.initial && potential == o.potential && forcing == o.forcing &&
               run == o.run && solver_eq(solver, o.solver) && step_eq(step, o.step);
    }

    Grid grid() const { return make_grid(nx, ny, lx, ly); }

    void validate() const {
        (void)grid();
        params.validate();
        step.validate();
        if (!(initial.c0 > 0.0))
            throw Error(ErrorCode::VALIDATION_ERROR, "c0 must be > 0 everywhere");
        if (initial.preset == InitialPreset::Uniform && initial.n0 < 0.0)
            throw Error(ErrorCode::VALIDATION_ERROR, "n0 must be >= 0");
        if (initial.preset == InitialPreset::GaussianBump &&
            (initial.amplitude < 0.0 || !(initial.width > 0.0)))
            throw Error(ErrorCode::VALIDATION_ERROR, "gaussian bump needs amplitude >= 0, width > 0");
        if (initial.preset == InitialPreset::RandomPerturbed &&
            (initial.base < 0.0 || initial.noise_amp < 0.0 || initial.noise_amp > 1.0))
            throw Error(ErrorCode::VALIDATION_ERROR,
                        "random_perturbed needs base >= 0 and noise_amp in [0,1]");
        if (initial.preset == InitialPreset::Checker &&
            (initial.level_a < 0.0 || initial.level_b < 0.0 || initial.blocks < 1))
            throw Error(ErrorCode::VALIDATION_ERROR, "checker needs nonnegative levels, blocks >= 1");
        if (!(run.t_end > 0.0) || !(run.snapshot_interval > 0.0))
            throw Error(ErrorCode::VALIDATION_ERROR, "t_end and snapshot_interval must be > 0");
        if (run.checkpoint_interval < 0.0)
            throw Error(ErrorCode::VALIDATION_ERROR, "checkpoint_interval must be >= 0");
        if (!(solver.tol > 0.0) || solver.max_iter < 0)
            throw Error(ErrorCode::VALIDATION_ERROR, "solver tol must be > 0, max_iter >= 0");
    }
};

// ---------------------------------------------------------------------------
// TOML-subset parsing: [section] headers and scalar key = value lines.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

struct ConfigValue {
    std::string raw;
    int line = 0;
};

using ConfigTable = std::map<std::string, std::map<std::string, ConfigValue>>;

inline ConfigTable parse_toml_subset(std::istream& in) {
    ConfigTable table;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = std::string::npos;
        bool in_quote = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_quote = !in_quote;
            else if (line[i] == '#' && !in_quote) { hash = i; break; }
        }
        std::string stripped = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw Error(ErrorCode::PARSE_ERROR,
                            "line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (section.empty())
                throw Error(ErrorCode::PARSE_ERROR,
                            "line " + std::to_string(lineno) + ": empty section name");
            table[section];
            continue;
        }
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::PARSE_ERROR,
                        "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error(ErrorCode::PARSE_ERROR,
                        "line " + std::to_string(lineno) + ": empty key or value");
        if (section.empty())
            throw Error(ErrorCode::PARSE_ERROR,
                        "line " + std::to_string(lineno) + ": key outside any [section]");
        table[section][key] = ConfigValue{value, lineno};
    }
    return table;
}

inline double parse_number(const ConfigValue& v, const std::string& key) {
    const std::string& s = v.raw;
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorCode::PARSE_ERROR,
                    "line " + std::to_string(v.line) + ": '" + key + "' is not a number: " + s);
    return out;
}

inline int parse_int(const ConfigValue& v, const std::string& key) {
    const double d = parse_number(v, key);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw Error(ErrorCode::PARSE_ERROR,
                    "line " + std::to_string(v.line) + ": '" + key + "' must be an integer");
    return i;
}

inline std::string parse_string(const ConfigValue& v, const std::string& key) {
    const std::string& s = v.raw;
    if (s.size() < 2 || s.front() != '"' || s.back() != '"')
        throw Error(ErrorCode::PARSE_ERROR,
                    "line " + std::to_string(v.line) + ": '" + key + "' must be a quoted string");
    return s.substr(1, s.size() - 2);
}

/// Pops known keys from one section, erroring on leftovers afterwards.
class SectionReader {
public:
    SectionReader(ConfigTable& table, std::string name) : name_(std::move(name)) {
        auto it = table.find(name_);
        if (it != table.end()) entries_ = &it->second;
    }

    bool has(const std::string& key) const { return entries_ && entries_->count(key) > 0; }

    std::optional<double> number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        ConfigValue v = take(key);
        return parse_number(v, key);
    }
    std::optional<int> integer(const std::string& key) {
        if (!has(key)) return std::nullopt;
        ConfigValue v = take(key);
        return parse_int(v, key);
    }
    std::optional<std::string> string(const std::string& key) {
        if (!has(key)) return std::nullopt;
        ConfigValue v = take(key);
        return parse_string(v, key);
    }

    void finish() const {
        if (entries_ && !entries_->empty()) {
            const auto& [key, value] = *entries_->begin();
            throw Error(ErrorCode::VALIDATION_ERROR, "unknown key '" + key + "' in [" + name_ +
                                                         "] (line " + std::to_string(value.line) + ")");
        }
    }

private:
    ConfigValue take(const std::string& key) {
        ConfigValue v = entries_->at(key);
        entries_->erase(key);
        return v;
    }
    std::string name_;
    std::map<std::string, ConfigValue>* entries_ = nullptr;
};

inline std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

}  // namespace detail

inline ScenarioConfig load_config_from(std::istream& in) {
    detail::ConfigTable table = detail::parse_toml_subset(in);
    static const char* known_sections[] = {"grid",    "params", "initial", "potential",
                                           "forcing", "run",    "solver",  "step"};
    for (const auto& [name, entries] : table) {
        bool ok = false;
        for (const char* s : known_sections) ok = ok || name == s;
        if (!ok) throw Error(ErrorCode::VALIDATION_ERROR, "unknown section [" + name + "]");
    }

    ScenarioConfig cfg;
    {
        detail::SectionReader s(table, "grid");
        if (auto v = s.integer("nx")) cfg.nx = *v;
        if (auto v = s.integer("ny")) cfg.ny = *v;
        if (auto v = s.number("lx")) cfg.lx = *v;
        if (auto v = s.number("ly")) cfg.ly = *v;
        s.finish();
    }
    {
        detail::SectionReader s(table, "params");
        if (auto v = s.number("r")) cfg.params.r = *v;
        if (auto v = s.number("mu")) cfg.params.mu = *v;
        if (auto v = s.number("alpha")) cfg.params.alpha = *v;
        if (auto v = s.number("beta")) cfg.params.beta = *v;
        if (auto v = s.number("chi")) cfg.params.chi = *v;
        if (auto v = s.number("k")) cfg.params.k = *v;
        if (auto v = s.number("eta")) cfg.params.eta = *v;
        if (auto v = s.number("nu_visc")) cfg.params.nu_visc = *v;
        if (auto v = s.number("c_floor")) cfg.params.c_floor = *v;
        s.finish();
    }
    {
        detail::SectionReader s(table, "initial");
        if (auto v = s.string("preset")) {
            if (*v == "uniform") cfg.initial.preset = InitialPreset::Uniform;
            else if (*v == "gaussian_bump") cfg.initial.preset = InitialPreset::GaussianBump;
            else if (*v == "random_perturbed") cfg.initial.preset = InitialPreset::RandomPerturbed;
            else if (*v == "checker") cfg.initial.preset = InitialPreset::Checker;
            else throw Error(ErrorCode::VALIDATION_ERROR, "unknown initial preset '" + *v + "'");
        }
        if (auto v = s.number("n0")) cfg.initial.n0 = *v;
        if (auto v = s.number("c0")) cfg.initial.c0 = *v;
        if (auto v = s.number("amplitude")) cfg.initial.amplitude = *v;
        if (auto v = s.number("width")) cfg.initial.width = *v;
        if (auto v = s.number("center_x")) cfg.initial.center_x = *v;
        if (auto v = s.number("center_y")) cfg.initial.center_y = *v;
        if (auto v = s.number("base")) cfg.initial.base = *v;
        if (auto v = s.number("noise_amp")) cfg.initial.noise_amp = *v;
        if (auto v = s.number("level_a")) cfg.initial.level_a = *v;
        if (auto v = s.number("level_b")) cfg.initial.level_b = *v;
        if (auto v = s.integer("blocks")) cfg.initial.blocks = *v;
        s.finish();
    }
    {
        detail::SectionReader s(table, "potential");
        if (auto v = s.string("preset")) {
            if (*v == "constant") cfg.potential.preset = PotentialPreset::Constant;
            else if (*v == "linear_gravity") cfg.potential.preset = PotentialPreset::LinearGravity;
            else if (*v == "bump") cfg.potential.preset = PotentialPreset::Bump;
            else throw Error(ErrorCode::VALIDATION_ERROR, "unknown potential preset '" + *v + "'");
        }
        if (auto v = s.number("g")) cfg.potential.g = *v;
        if (auto v = s.number("amplitude")) cfg.potential.amplitude = *v;
        if (auto v = s.number("width")) cfg.potential.width = *v;
        s.finish();
    }
    {
        detail::SectionReader s(table, "forcing");
        if (auto v = s.string("preset")) {
            if (*v == "zero") cfg.forcing.preset = ForcingPreset::Zero;
            else if (*v == "oscillatory") cfg.forcing.preset = ForcingPreset::Oscillatory;
            else throw Error(ErrorCode::VALIDATION_ERROR, "unknown forcing preset '" + *v + "'");
        }
        if (auto v = s.number("amplitude")) cfg.forcing.amplitude = *v;
        if (auto v = s.number("frequency")) cfg.forcing.frequency = *v;
        s.finish();
    }
    {
        detail::SectionReader s(table, "run");
        if (auto v = s.number("t_end")) cfg.run.t_end = *v;
        if (auto v = s.number("snapshot_interval")) cfg.run.snapshot_interval = *v;
        if (auto v = s.number("checkpoint_interval")) cfg.run.checkpoint_interval = *v;
        if (auto v = s.integer("seed")) cfg.run.seed = static_cast<unsigned>(*v);
        if (auto v = s.string("csv_name")) cfg.run.csv_name = *v;
        if (auto v = s.string("checkpoint_name")) cfg.run.checkpoint_name = *v;
        s.finish();
    }
    {
        detail::SectionReader s(table, "solver");
        if (auto v = s.number("tol")) cfg.solver.tol = *v;
        if (auto v = s.integer("max_iter")) cfg.solver.max_iter = *v;
        s.finish();
    }
    {
        detail::SectionReader s(table, "step");
        if (auto v = s.number("cfl_adv")) cfg.step.cfl_adv = *v;
        if (auto v = s.number("cfl_chem")) cfg.step.cfl_chem = *v;
        if (auto v = s.number("dt_max")) cfg.step.dt_max = *v;
        if (auto v = s.number("dt_min")) cfg.step.dt_min = *v;
        if (auto v = s.number("proj_tol")) cfg.step.proj_tol = *v;
        if (auto v = s.number("overflow_guard")) cfg.step.overflow_guard = *v;
        s.finish();
    }
    cfg.step.solver = cfg.solver;
    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot open config file: " + path);
    return load_config_from(in);
}

inline std::string serialize_config(const ScenarioConfig& cfg) {
    using detail::format_number;
    std::ostringstream out;
    out << "[grid]\n";
    out << "nx = " << cfg.nx << "\n";
    out << "ny = " << cfg.ny << "\n";
    out << "lx = " << format_number(cfg.lx) << "\n";
    out << "ly = " << format_number(cfg.ly) << "\n";
    out << "\n[params]\n";
    out << "r = " << format_number(cfg.params.r) << "\n";
    out << "mu = " << format_number(cfg.params.mu) << "\n";
    out << "alpha = " << format_number(cfg.params.alpha) << "\n";
    out << "beta = " << format_number(cfg.params.beta) << "\n";
    out << "chi = " << format_number(cfg.params.chi) << "\n";
    out << "k = " << format_number(cfg.params.k) << "\n";
    out << "eta = " << format_number(cfg.params.eta) << "\n";
    out << "nu_visc = " << format_number(cfg.params.nu_visc) << "\n";
    out << "c_floor = " << format_number(cfg.params.c_floor) << "\n";
    out << "\n[initial]\n";
    const char* ip = cfg.initial.preset == InitialPreset::Uniform            ? "uniform"
                     : cfg.initial.preset == InitialPreset::GaussianBump    ? "gaussian_bump"
                     : cfg.initial.preset == InitialPreset::RandomPerturbed ? "random_perturbed"
                                                                            : "checker";
    out << "preset = \"" << ip << "\"\n";
    out << "n0 = " << format_number(cfg.initial.n0) << "\n";
    out << "c0 = " << format_number(cfg.initial.c0) << "\n";
    out << "amplitude = " << format_number(cfg.initial.amplitude) << "\n";
    out << "width = " << format_number(cfg.initial.width) << "\n";
    out << "center_x = " << format_number(cfg.initial.center_x) << "\n";
    out << "center_y = " << format_number(cfg.initial.center_y) << "\n";
    out << "base = " << format_number(cfg.initial.base) << "\n";
    out << "noise_amp = " << format_number(cfg.initial.noise_amp) << "\n";
    out << "level_a = " << format_number(cfg.initial.level_a) << "\n";
    out << "level_b = " << format_number(cfg.initial.level_b) << "\n";
    out << "blocks = " << cfg.initial.blocks << "\n";
    out << "\n[potential]\n";
    const char* pp = cfg.potential.preset == PotentialPreset::Constant        ? "constant"
                     : cfg.potential.preset == PotentialPreset::LinearGravity ? "linear_gravity"
                                                                              : "bump";
    out << "preset = \"" << pp << "\"\n";
    out << "g = " << format_number(cfg.potential.g) << "\n";
    out << "amplitude = " << format_number(cfg.potential.amplitude) << "\n";
    out << "width = " << format_number(cfg.potential.width) << "\n";
    out << "\n[forcing]\n";
    out << "preset = \"" << (cfg.forcing.preset == ForcingPreset::Zero ? "zero" : "oscillatory")
        << "\"\n";
    out << "amplitude = " << format_number(cfg.forcing.amplitude) << "\n";
    out << "frequency = " << format_number(cfg.forcing.frequency) << "\n";
    out << "\n[run]\n";
    out << "t_end = " << format_number(cfg.run.t_end) << "\n";
    out << "snapshot_interval = " << format_number(cfg.run.snapshot_interval) << "\n";
    out << "checkpoint_interval = " << format_number(cfg.run.checkpoint_interval) << "\n";
    out << "seed = " << cfg.run.seed << "\n";
    out << "csv_name = \"" << cfg.run.csv_name << "\"\n";
    out << "checkpoint_name = \"" << cfg.run.checkpoint_name << "\"\n";
    out << "\n[solver]\n";
    out << "tol = " << format_number(cfg.solver.tol) << "\n";
    out << "max_iter = " << cfg.solver.max_iter << "\n";
    out << "\n[step]\n";
    out << "cfl_adv = " << format_number(cfg.step.cfl_adv) << "\n";
    out << "cfl_chem = " << format_number(cfg.step.cfl_chem) << "\n";
    out << "dt_max = " << format_number(cfg.step.dt_max) << "\n";
    out << "dt_min = " << format_number(cfg.step.dt_min) << "\n";
    out << "proj_tol = " << format_number(cfg.step.proj_tol) << "\n";
    out << "overflow_guard = " << format_number(cfg.step.overflow_guard) << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Preset realization
// ---------------------------------------------------------------------------

inline SimState build_initial_state(const ScenarioConfig& cfg) {
    const Grid grid = cfg.grid();
    SimState state = SimState::zeros(grid);
    state.c.fill(cfg.initial.c0);
    switch (cfg.initial.preset) {
        case InitialPreset::Uniform:
            state.n.fill(cfg.initial.n0);
            break;
        case InitialPreset::GaussianBump: {
            const double w2 = 2.0 * cfg.initial.width * cfg.initial.width;
            state.n.fill_from([&](double x, double y) {
                const double dx = x - cfg.initial.center_x;
                const double dy = y - cfg.initial.center_y;
                return cfg.initial.amplitude * std::exp(-(dx * dx + dy * dy) / w2);
            });
            break;
        }
        case InitialPreset::RandomPerturbed: {
            std::mt19937 rng(cfg.run.seed);
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            for (int j = 0; j < grid.ny; ++j)
                for (int i = 0; i < grid.nx; ++i)
                    state.n(i, j) =
                        std::max(0.0, cfg.initial.base * (1.0 + cfg.initial.noise_amp * dist(rng)));
            break;
        }
        case InitialPreset::Checker: {
            const int bx = std::max(1, grid.nx / cfg.initial.blocks);
            const int by = std::max(1, grid.ny / cfg.initial.blocks);
            for (int j = 0; j < grid.ny; ++j)
                for (int i = 0; i < grid.nx; ++i)
                    state.n(i, j) =
                        ((i / bx + j / by) % 2 == 0) ? cfg.initial.level_a : cfg.initial.level_b;
            break;
        }
    }
    return state;
}

inline Forcing build_forcing(const ScenarioConfig& cfg) {
    const Grid grid = cfg.grid();
    Forcing forcing = Forcing::zero(grid);
    switch (cfg.potential.preset) {
        case PotentialPreset::Constant:
            break;
        case PotentialPreset::LinearGravity: {
            const double g = cfg.potential.g;
            forcing.phi.fill_from([&](double, double y) { return g * y; });
            break;
        }
        case PotentialPreset::Bump: {
            const double w2 = 2.0 * cfg.potential.width * cfg.potential.width;
            const double cx = 0.5 * cfg.lx, cy = 0.5 * cfg.ly;
            const double a = cfg.potential.amplitude;
            forcing.phi.fill_from([&](double x, double y) {
                const double dx = x - cx, dy = y - cy;
                return a * std::exp(-(dx * dx + dy * dy) / w2);
            });
            break;
        }
    }
    if (cfg.forcing.preset == ForcingPreset::Oscillatory) {
        const double a = cfg.forcing.amplitude;
        const double omega = 2.0 * M_PI * cfg.forcing.frequency;
        const double ly = cfg.ly, lx = cfg.lx;
        forcing.f = [a, omega, lx, ly](double x, double y, double t, double& fx, double& fy) {
            fx = a * std::sin(omega * t) * std::sin(M_PI * y / ly);
            fy = a * std::cos(omega * t) * std::sin(M_PI * x / lx);
        };
    }
    return forcing;
}

}  // namespace cfsim
