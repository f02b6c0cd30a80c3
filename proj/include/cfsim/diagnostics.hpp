#pragma once

#include <cmath>
#include <deque>

#include "cfsim/grid.hpp"
#include "cfsim/operators.hpp"

namespace cfsim {

/// Every tracked functional evaluated at one time. The *_win entries are the
/// trailing space-time integrals over a window of width tau = 1 (filled by
/// DiagnosticsAccumulator; a bare snapshot leaves them at zero). min_n and
/// linf_u stay in memory only; the CSV schema omits them.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass_n = 0.0;        // int n
    double mass_c = 0.0;        // int c
    double l2_u = 0.0;          // int |u|^2
    double l2_grad_u = 0.0;     // int |grad u|^2 (instantaneous)
    double l2_grad_u_win = 0.0; // int_{t-1}^{t} int |grad u|^2
    double l2_c = 0.0;          // int c^2
    double l2_grad_c = 0.0;     // int |grad c|^2
    double nlogn = 0.0;         // int n log n, 0 log 0 = 0
    double nlogc = 0.0;         // int n log c
    double energy_F = 0.0;      // nlogn - nlogc/3 + l2_grad_c/2
    double dissipation = 0.0;   // int n^2 / log^eta(n+e) (instantaneous)
    double dissipation_win = 0.0;
    double lp_n_2 = 0.0;        // int n^2
    double lp_n_4 = 0.0;        // int n^4
    double np_cq = 0.0;         // int n^p c^-q at (p,q) = (2, 0.5) by default
    double grad_c_4 = 0.0;      // int |grad c|^{2p} at p = 2
    double min_c = 0.0;
    double max_n = 0.0;
    double linf_grad_c = 0.0;   // max over face-gradient magnitudes
    double min_n = 0.0;         // in-memory extra
    double linf_u = 0.0;        // in-memory extra

    bool finite() const {
        for (double v : {mass_n, mass_c, l2_u, l2_grad_u, l2_c, l2_grad_c, nlogn, nlogc, energy_F,
                         dissipation, lp_n_2, lp_n_4, np_cq, grad_c_4, min_c, max_n, linf_grad_c})
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Diagnostic exponents for the L^p functionals; defaults match the record's
/// documented (p, q) choices and are CLI-overridable.
struct DiagnosticsOptions {
    double lp_p = 2.0;
    double npcq_p = 2.0;
    double npcq_q = 0.5;
    double gradc_p = 2.0;
};

inline DiagnosticsRecord snapshot(const SimState& state, const Params& params,
                                  const DiagnosticsOptions& opt = {}) {
    const Grid& g = state.n.grid();
    const double da = g.hx * g.hy;
    DiagnosticsRecord rec;
    rec.t = state.t;

    double mass_n = 0, mass_c = 0, l2_c = 0, nlogn = 0, nlogc = 0, diss = 0;
    double lp2 = 0, lp4 = 0, npcq = 0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double n = state.n(i, j);
            const double c = state.c(i, j);
            mass_n += n;
            mass_c += c;
            l2_c += c * c;
            if (n > 0.0) nlogn += n * std::log(n);
            nlogc += n * std::log(std::max(c, params.c_floor));
            diss += n * n / log_eta(n, params.eta);
            lp2 += n * n;
            lp4 += std::pow(n, 4.0);
            npcq += std::pow(n, opt.npcq_p) * std::pow(std::max(c, params.c_floor), -opt.npcq_q);
        }
    }
    rec.mass_n = mass_n * da;
    rec.mass_c = mass_c * da;
    rec.l2_c = l2_c * da;
    rec.nlogn = nlogn * da;
    rec.nlogc = nlogc * da;
    rec.dissipation = diss * da;
    rec.lp_n_2 = lp2 * da;
    rec.lp_n_4 = lp4 * da;
    rec.np_cq = npcq * da;

    // grad c: centered differences with ghost cells for the integrals,
    // face differences for the sup norm.
    double l2gc = 0, gc2p = 0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double gx = (state.c.ghost(i + 1, j) - state.c.ghost(i - 1, j)) / (2.0 * g.hx);
            const double gy = (state.c.ghost(i, j + 1) - state.c.ghost(i, j - 1)) / (2.0 * g.hy);
            const double g2 = gx * gx + gy * gy;
            l2gc += g2;
            gc2p += std::pow(g2, opt.gradc_p);
        }
    }
    rec.l2_grad_c = l2gc * da;
    rec.grad_c_4 = gc2p * da;

    double linf_gc = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            linf_gc = std::max(linf_gc, std::abs(state.c(i, j) - state.c(i - 1, j)) / g.hx);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            linf_gc = std::max(linf_gc, std::abs(state.c(i, j) - state.c(i, j - 1)) / g.hy);
    rec.linf_grad_c = linf_gc;

    // |u|^2 from face averages at cell centers.
    double l2u = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double uc = 0.5 * (state.u.ux(i, j) + state.u.ux(i + 1, j));
            const double vc = 0.5 * (state.u.uy(i, j) + state.u.uy(i, j + 1));
            l2u += uc * uc + vc * vc;
        }
    }
    rec.l2_u = l2u * da;

    // |grad u|^2: normal derivatives at cell centers, cross derivatives at
    // nodes with no-slip reflection ghosts (wall shear included).
    double l2gu = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double duxdx = (state.u.ux(i + 1, j) - state.u.ux(i, j)) / g.hx;
            const double duydy = (state.u.uy(i, j + 1) - state.u.uy(i, j)) / g.hy;
            l2gu += duxdx * duxdx + duydy * duydy;
        }
    }
    for (int j = 0; j <= g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) {
            const double duxdy = (state.u.ux_ghost(i, j) - state.u.ux_ghost(i, j - 1)) / g.hy;
            const double duydx = (state.u.uy_ghost(i, j) - state.u.uy_ghost(i - 1, j)) / g.hx;
            l2gu += duxdy * duxdy + duydx * duydx;
        }
    }
    rec.l2_grad_u = l2gu * da;

    rec.energy_F = rec.nlogn - rec.nlogc / 3.0 + rec.l2_grad_c / 2.0;
    rec.min_c = state.c.min();
    rec.max_n = state.n.max();
    rec.min_n = state.n.min();
    rec.linf_u = state.u.max_abs();
    return rec;
}

/// Trailing-window time integral with rectangle-rule segments. The oldest
/// segment is counted by its overlap with [t - window, t], so a constant
/// integrand reproduces value*window exactly once the window is full.
class WindowAccumulator {
public:
    explicit WindowAccumulator(double window = 1.0) : window_(window) {}

    void add(double t_end, double dt, double value) {
        segments_.push_back({t_end, dt, value});
        const double cutoff = t_end - window_;
        while (!segments_.empty() && segments_.front().t_end <= cutoff) segments_.pop_front();
    }

    double window_integral(double t_now) const {
        const double lo = t_now - window_;
        double sum = 0.0;
        for (const Segment& s : segments_) {
            const double a = std::max(s.t_end - s.dt, lo);
            const double b = std::min(s.t_end, t_now);
            if (b > a) sum += s.value * (b - a);
        }
        return sum;
    }

    double window() const { return window_; }

private:
    struct Segment {
        double t_end;
        double dt;
        double value;
    };
    double window_;
    std::deque<Segment> segments_;
};

/// Couples snapshots with the two windowed space-time integrals the long-time
/// estimates track: int int n^2/log^eta(n+e) and int int |grad u|^2.
class DiagnosticsAccumulator {
public:
    explicit DiagnosticsAccumulator(double window = 1.0)
        : dissipation_(window), grad_u_(window) {}

    /// Advance the running integrals across one step ending at state.t.
    void accumulate(const SimState& state, const Params& params, double dt) {
        const DiagnosticsRecord rec = snapshot(state, params);
        dissipation_.add(state.t, dt, rec.dissipation);
        grad_u_.add(state.t, dt, rec.l2_grad_u);
    }

    DiagnosticsRecord snapshot_with_windows(const SimState& state, const Params& params,
                                            const DiagnosticsOptions& opt = {}) const {
        DiagnosticsRecord rec = snapshot(state, params, opt);
        rec.dissipation_win = dissipation_.window_integral(state.t);
        rec.l2_grad_u_win = grad_u_.window_integral(state.t);
        return rec;
    }

private:
    WindowAccumulator dissipation_;
    WindowAccumulator grad_u_;
};

}  // namespace cfsim
