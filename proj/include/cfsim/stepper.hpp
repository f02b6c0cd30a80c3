#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "cfsim/grid.hpp"
#include "cfsim/operators.hpp"
#include "cfsim/solvers.hpp"

namespace cfsim {

struct StepConfig {
    double cfl_adv = 0.4;
    double cfl_chem = 0.4;
    double dt_max = 1e-2;
    double dt_min = 1e-9;
    double proj_tol = 1e-9;
    double overflow_guard = 1e12;
    SolverConfig solver;

    void validate() const {
        if (!(cfl_adv > 0.0 && cfl_adv < 1.0) || !(cfl_chem > 0.0 && cfl_chem < 1.0))
            throw Error(ErrorCode::VALIDATION_ERROR, "cfl factors must lie in (0,1)");
        if (!(dt_min < dt_max)) throw Error(ErrorCode::VALIDATION_ERROR, "dt_min must be < dt_max");
        if (!(proj_tol > 0.0)) throw Error(ErrorCode::VALIDATION_ERROR, "proj_tol must be > 0");
    }
};

struct SolverIters {
    int ux = 0;
    int uy = 0;
    int pressure = 0;
    int c = 0;
    int n = 0;
};

struct StepReport {
    double dt_used = 0.0;
    std::int64_t clamp_activations = 0;
    SolverIters solver_iters;
    double min_n = 0.0;
    double min_c = 0.0;
    double max_divergence = 0.0;
};

/// Adaptive dt: advective and chemotactic CFL bounds against dt_max, with
/// DT_UNDERFLOW (the blow-up flag) when the result would drop below dt_min.
inline double compute_dt(const SimState& state, const Params& params, const StepConfig& cfg) {
    constexpr double kEps = 1e-30;
    const Grid& g = state.n.grid();
    const double h = std::min(g.hx, g.hy);
    const double umax = state.u.max_abs();
    const double wmax = chemotaxis_face_velocity(state.c, params).max_abs();
    double dt = cfg.dt_max;
    dt = std::min(dt, cfg.cfl_adv * h / std::max(umax, kEps));
    dt = std::min(dt, cfg.cfl_chem * h / std::max(wmax, kEps));
    if (dt < cfg.dt_min)
        throw Error(ErrorCode::DT_UNDERFLOW,
                    "dt = " + std::to_string(dt) + " below dt_min = " + std::to_string(cfg.dt_min));
    return dt;
}

/// One fluid substep: explicit advection + buoyancy + forcing, implicit
/// viscosity, then pressure projection. The absolute residual cap on the
/// Poisson solve pins max |div u_new| below proj_tol (the projection gradient
/// composed with mac_divergence reproduces the discrete Neumann Laplacian
/// exactly, so the post-step divergence equals dt times the solver residual).
inline VectorField step_fluid(const SimState& state, const Params& params, const Forcing& forcing,
                              const StepConfig& cfg, double dt, StepReport& report) {
    const Grid& g = state.n.grid();
    const VectorField adv = advect_velocity(state.u);
    const VectorField gphi = grad_to_faces(forcing.phi);

    VectorField rhs(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            double fx, fy;
            forcing.eval_f(g.xf(i), g.yc(j), state.t, fx, fy);
            const double n_face = 0.5 * (state.n(i - 1, j) + state.n(i, j));
            rhs.ux(i, j) = state.u.ux(i, j) + dt * (adv.ux(i, j) + n_face * gphi.ux(i, j) + fx);
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double fx, fy;
            forcing.eval_f(g.xc(i), g.yf(j), state.t, fx, fy);
            const double n_face = 0.5 * (state.n(i, j - 1) + state.n(i, j));
            rhs.uy(i, j) = state.u.uy(i, j) + dt * (adv.uy(i, j) + n_face * gphi.uy(i, j) + fy);
        }
    }

    SolveStats sx, sy;
    VectorField u_star = solve_helmholtz_faces(rhs, dt * params.nu_visc, cfg.solver, &sx, &sy);

    ScalarField div_star = mac_divergence(u_star);
    for (double& v : div_star.data()) v /= dt;
    SolveStats sp;
    ScalarField p = solve_pressure_poisson(div_star, cfg.solver, &sp, 0.25 * cfg.proj_tol / dt);

    const VectorField gp = grad_to_faces(p);
    VectorField u_new(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            u_new.ux(i, j) = u_star.ux(i, j) - dt * gp.ux(i, j);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            u_new.uy(i, j) = u_star.uy(i, j) - dt * gp.uy(i, j);

    report.solver_iters.ux += sx.iterations;
    report.solver_iters.uy += sy.iterations;
    report.solver_iters.pressure += sp.iterations;
    report.max_divergence = mac_divergence(u_new).max_abs();
    return u_new;
}

/// c substep: explicit upwind transport and production, implicit diffusion
/// and decay via (I + dt*alpha - dt*Lap). The rescaled Helmholtz solve keeps
/// the M-matrix structure, so min c_new >= min(rhs)/(1 + dt*alpha) and the
/// e^{-alpha t} comparison floor holds without clamping.
inline ScalarField step_c(const SimState& state, const Params& params, const StepConfig& cfg,
                          const VectorField& u_new, double dt, const Forcing& forcing,
                          StepReport& report, StencilWorkspace* ws = nullptr) {
    const Grid& g = state.c.grid();
    const ScalarField adv = advect_scalar(state.c, u_new, cfg.proj_tol, ws);
    const double a = dt * params.alpha;
    ScalarField rhs(g, ScalarBc::NeumannZero, 0.0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double v = state.c(i, j) + dt * (adv(i, j) + params.beta * state.n(i, j));
            if (forcing.source_c) v += dt * forcing.source_c(g.xc(i), g.yc(j), state.t);
            rhs(i, j) = v / (1.0 + a);
        }
    }
    SolveStats st;
    ScalarField c_new = solve_helmholtz(rhs, dt / (1.0 + a), ScalarBc::NeumannZero, cfg.solver, &st);
    report.solver_iters.c += st.iterations;
    if (c_new.min() <= 0.0)
        throw Error(ErrorCode::NEGATIVE_C, "min c = " + std::to_string(c_new.min()));
    return c_new;
}

/// n substep: explicit upwind transport + chemotaxis against the updated c,
/// implicit diffusion, then the Patankar reaction factorization
/// n <- n (1 + dt r) / (1 + dt mu n / log^eta(n+e)), which is positivity
/// preserving and fixes the equilibrium r log^eta(n*+e) = mu n* exactly.
inline ScalarField step_n(const SimState& state, const Params& params, const StepConfig& cfg,
                          const VectorField& u_new, const ScalarField& c_new, double dt,
                          const Forcing& forcing, StepReport& report,
                          StencilWorkspace* ws = nullptr) {
    const Grid& g = state.n.grid();
    const ScalarField adv = advect_scalar(state.n, u_new, cfg.proj_tol, ws);
    const ScalarField chem = chemotaxis_div(state.n, c_new, params, &report.clamp_activations, ws);
    ScalarField rhs(g, ScalarBc::NeumannZero, 0.0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double v = state.n(i, j) + dt * (adv(i, j) + chem(i, j));
            if (forcing.source_n) v += dt * forcing.source_n(g.xc(i), g.yc(j), state.t);
            rhs(i, j) = v;
        }
    }
    SolveStats st;
    ScalarField n_mid = solve_helmholtz(rhs, dt, ScalarBc::NeumannZero, cfg.solver, &st);
    report.solver_iters.n += st.iterations;

    // The exact M-matrix solution is nonnegative for a nonnegative rhs; CG
    // only matches it to its residual, so values negative within the solver
    // error bar are snapped to zero while anything beyond it is a genuine
    // scheme violation.
    const double solver_noise = 10.0 * std::max(st.residual, 1e-14);
    ScalarField n_new(g, ScalarBc::NeumannZero, 0.0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double v = n_mid(i, j);
            if (v < 0.0) {
                if (v < -solver_noise)
                    throw Error(ErrorCode::NEGATIVE_N, "min n = " + std::to_string(v));
                v = 0.0;
            }
            const double denom = 1.0 + dt * params.mu * v / log_eta(v, params.eta);
            n_new(i, j) = v * (1.0 + dt * params.r) / denom;
        }
    }
    return n_new;
}

/// Full splitting step: fluid -> c -> n, advancing t by the adaptive dt.
inline StepReport step(SimState& state, const Params& params, const Forcing& forcing,
                       const StepConfig& cfg, StencilWorkspace* ws = nullptr) {
    StepReport report;
    double dt;
    try {
        dt = compute_dt(state, params, cfg);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DT_UNDERFLOW)
            throw Error(ErrorCode::BLOWUP_SUSPECTED, e.what());
        throw;
    }
    report.dt_used = dt;

    VectorField u_new = step_fluid(state, params, forcing, cfg, dt, report);
    ScalarField c_new = step_c(state, params, cfg, u_new, dt, forcing, report, ws);
    ScalarField n_new = step_n(state, params, cfg, u_new, c_new, dt, forcing, report, ws);

    if (n_new.max_abs() > cfg.overflow_guard || c_new.max_abs() > cfg.overflow_guard ||
        u_new.max_abs() > cfg.overflow_guard)
        throw Error(ErrorCode::BLOWUP_SUSPECTED, "field magnitude exceeded overflow guard");

    state.t += dt;
    state.n = std::move(n_new);
    state.c = std::move(c_new);
    state.u = std::move(u_new);
    report.min_n = state.n.min();
    report.min_c = state.c.min();
    return report;
}

}  // namespace cfsim
