#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cfsim/grid.hpp"
#include "cfsim/operators.hpp"

namespace cfsim {

enum class SolveMethod { ConjugateGradient };

struct SolverConfig {
    double tol = 1e-10;  // relative residual target
    int max_iter = 0;    // 0 = 10*(nx+ny), resolved at solve time
    SolveMethod method = SolveMethod::ConjugateGradient;

    int resolved_max_iter(const Grid& g) const { return max_iter > 0 ? max_iter : 10 * (g.nx + g.ny); }
};

struct SolveStats {
    int iterations = 0;
    double residual = 0.0;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Plain CG on an SPD operator given as apply(in, out). Converges when
/// ||r||_2 <= max(rel_tol*||b||_2 floor at abs_cap): the caller picks the
/// stricter absolute cap when it needs one (projection does).
template <class Apply>
SolveStats conjugate_gradient(const std::vector<double>& b, std::vector<double>& x, Apply&& apply,
                              double rel_tol, double abs_cap, int max_iter, const char* context) {
    const std::size_t m = b.size();
    x.assign(m, 0.0);
    const double bnorm = std::sqrt(dot(b, b));
    const double target = std::min(rel_tol * bnorm, abs_cap);
    SolveStats stats;
    if (bnorm == 0.0) return stats;

    std::vector<double> r = b;
    std::vector<double> p = b;
    std::vector<double> ap(m, 0.0);
    double rr = dot(r, r);
    stats.residual = std::sqrt(rr);
    if (stats.residual <= target) return stats;

    for (int it = 1; it <= max_iter; ++it) {
        apply(p, ap);
        const double pap = dot(p, ap);
        const double a = rr / pap;
        for (std::size_t i = 0; i < m; ++i) x[i] += a * p[i];
        for (std::size_t i = 0; i < m; ++i) r[i] -= a * ap[i];
        const double rr_new = dot(r, r);
        stats.iterations = it;
        stats.residual = std::sqrt(rr_new);
        if (stats.residual <= target) return stats;
        const double beta = rr_new / rr;
        for (std::size_t i = 0; i < m; ++i) p[i] = r[i] + beta * p[i];
        rr = rr_new;
    }
    throw NoConvergenceError(stats.iterations, stats.residual, context);
}

/// (I - gamma*Lap_bc) on a cell-centered vector.
inline void apply_helmholtz_cells(const Grid& g, ScalarBc bc, double gamma,
                                  const std::vector<double>& in, std::vector<double>& out) {
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    const double sign = bc == ScalarBc::NeumannZero ? 1.0 : -1.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * g.nx + i;
            const double c = in[idx];
            const double w = i > 0 ? in[idx - 1] : sign * c;
            const double e = i < g.nx - 1 ? in[idx + 1] : sign * c;
            const double s = j > 0 ? in[idx - g.nx] : sign * c;
            const double n = j < g.ny - 1 ? in[idx + g.nx] : sign * c;
            const double lap = (e - 2.0 * c + w) * ihx2 + (n - 2.0 * c + s) * ihy2;
            out[idx] = c - gamma * lap;
        }
    }
}

}  // namespace detail

/// Solves (I - gamma*Lap_bc) x = rhs; for gamma = 0 this is the identity.
inline ScalarField solve_helmholtz(const ScalarField& rhs, double gamma, ScalarBc bc,
                                   const SolverConfig& cfg, SolveStats* stats = nullptr) {
    const Grid& g = rhs.grid();
    ScalarField out(g, bc, 0.0);
    if (gamma == 0.0) {
        out.data() = rhs.data();
        if (stats) *stats = SolveStats{};
        return out;
    }
    auto apply = [&](const std::vector<double>& in, std::vector<double>& o) {
        detail::apply_helmholtz_cells(g, bc, gamma, in, o);
    };
    SolveStats st = detail::conjugate_gradient(rhs.data(), out.data(), apply, cfg.tol,
                                               std::numeric_limits<double>::infinity(),
                                               cfg.resolved_max_iter(g), "helmholtz solve");
    if (stats) *stats = st;
    return out;
}

/// Zero-mean solution of Lap_N p = rhs. The Neumann null space is handled by
/// subtracting the mean from the rhs up front and from the solution at the
/// end; abs_cap optionally tightens the 2-norm residual beyond the relative
/// target (the projection uses it to pin the post-step divergence).
inline ScalarField solve_pressure_poisson(const ScalarField& div_u_star, const SolverConfig& cfg,
                                          SolveStats* stats = nullptr,
                                          double abs_cap = std::numeric_limits<double>::infinity()) {
    const Grid& g = div_u_star.grid();
    std::vector<double> b = div_u_star.data();
    double mean = 0.0;
    for (double v : b) mean += v;
    mean /= static_cast<double>(b.size());
    for (double& v : b) v -= mean;

    // CG on -Lap_N (positive semidefinite; the mean-zero rhs keeps iterates
    // orthogonal to the constant null vector).
    auto apply = [&](const std::vector<double>& in, std::vector<double>& o) {
        detail::apply_helmholtz_cells(g, ScalarBc::NeumannZero, 1.0, in, o);
        for (std::size_t idx = 0; idx < o.size(); ++idx) o[idx] = o[idx] - in[idx];  // -Lap = (I - Lap) - I
    };
    for (double& v : b) v = -v;

    ScalarField p(g, ScalarBc::NeumannZero, 0.0);
    SolveStats st = detail::conjugate_gradient(b, p.data(), apply, cfg.tol, abs_cap,
                                               cfg.resolved_max_iter(g), "pressure poisson solve");
    double pmean = 0.0;
    for (double v : p.data()) pmean += v;
    pmean /= static_cast<double>(p.data().size());
    for (double& v : p.data()) v -= pmean;
    if (stats) *stats = st;
    return p;
}

namespace detail {

/// (I - gamma*Lap) on x-face values: Dirichlet 0 at the left/right boundary
/// faces (they are excluded unknowns pinned to zero) and no-slip reflection
/// ghosts across the top/bottom walls.
inline void apply_helmholtz_ux(const Grid& g, double gamma, const std::vector<double>& in,
                               std::vector<double>& out) {
    const int sx = g.nx + 1;
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * sx;
        out[row] = in[row];
        out[row + g.nx] = in[row + g.nx];
        for (int i = 1; i < g.nx; ++i) {
            const std::size_t idx = row + i;
            const double c = in[idx];
            const double w = in[idx - 1];
            const double e = in[idx + 1];
            const double s = j > 0 ? in[idx - sx] : -c;
            const double n = j < g.ny - 1 ? in[idx + sx] : -c;
            out[idx] = c - gamma * ((e - 2.0 * c + w) * ihx2 + (n - 2.0 * c + s) * ihy2);
        }
    }
}

inline void apply_helmholtz_uy(const Grid& g, double gamma, const std::vector<double>& in,
                               std::vector<double>& out) {
    const int sx = g.nx;
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    for (int i = 0; i < g.nx; ++i) {
        out[i] = in[i];
        out[static_cast<std::size_t>(g.ny) * sx + i] = in[static_cast<std::size_t>(g.ny) * sx + i];
    }
    for (int j = 1; j < g.ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * sx;
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t idx = row + i;
            const double c = in[idx];
            const double w = i > 0 ? in[idx - 1] : -c;
            const double e = i < g.nx - 1 ? in[idx + 1] : -c;
            const double s = in[idx - sx];
            const double n = in[idx + sx];
            out[idx] = c - gamma * ((e - 2.0 * c + w) * ihx2 + (n - 2.0 * c + s) * ihy2);
        }
    }
}

}  // namespace detail

/// Implicit diffusion solve for both velocity components; boundary faces of
/// the rhs are forced to zero so the no-slip values survive exactly.
inline VectorField solve_helmholtz_faces(const VectorField& rhs, double gamma,
                                         const SolverConfig& cfg, SolveStats* stats_ux = nullptr,
                                         SolveStats* stats_uy = nullptr) {
    const Grid& g = rhs.grid();
    VectorField out(g);
    if (gamma == 0.0) {
        out = rhs;
        out.zero_boundary_faces();
        return out;
    }
    std::vector<double> bx = rhs.ux_data();
    std::vector<double> by = rhs.uy_data();
    for (int j = 0; j < g.ny; ++j) {
        bx[static_cast<std::size_t>(j) * (g.nx + 1)] = 0.0;
        bx[static_cast<std::size_t>(j) * (g.nx + 1) + g.nx] = 0.0;
    }
    for (int i = 0; i < g.nx; ++i) {
        by[i] = 0.0;
        by[static_cast<std::size_t>(g.ny) * g.nx + i] = 0.0;
    }
    auto apply_x = [&](const std::vector<double>& in, std::vector<double>& o) {
        detail::apply_helmholtz_ux(g, gamma, in, o);
    };
    auto apply_y = [&](const std::vector<double>& in, std::vector<double>& o) {
        detail::apply_helmholtz_uy(g, gamma, in, o);
    };
    const double inf = std::numeric_limits<double>::infinity();
    SolveStats sx = detail::conjugate_gradient(bx, out.ux_data(), apply_x, cfg.tol, inf,
                                               cfg.resolved_max_iter(g), "ux diffusion solve");
    SolveStats sy = detail::conjugate_gradient(by, out.uy_data(), apply_y, cfg.tol, inf,
                                               cfg.resolved_max_iter(g), "uy diffusion solve");
    out.zero_boundary_faces();
    if (stats_ux) *stats_ux = sx;
    if (stats_uy) *stats_uy = sy;
    return out;
}

}  // namespace cfsim
