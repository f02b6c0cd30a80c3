#pragma once

#include <cmath>

#include "cfsim/config.hpp"
#include "cfsim/grid.hpp"

namespace cfsim {

/// Analytic fields for the full-system manufactured run: a stream-function
/// velocity vanishing on the walls together with Neumann cosine profiles for
/// n and c, plus the closed-form residual sources that make them an exact
/// solution of the coupled system with phi = const and nu = 1.
class ManufacturedSolution {
public:
    ManufacturedSolution(double lx, double ly, const Params& params, double stream_amplitude = 0.3)
        : kx_(M_PI / lx), ky_(M_PI / ly), p_(params), kA_(stream_amplitude) {}

    double n(double x, double y, double t) const { return 1.0 + 0.5 * C(x, y) * En(t); }
    double c(double x, double y, double t) const { return 1.0 + 0.25 * C(x, y) * Ec(t); }
    double ux(double x, double y, double t) const {
        return kA_ * ky_ * sq(std::sin(kx_ * x)) * std::sin(2.0 * ky_ * y) * theta(t);
    }
    double uy(double x, double y, double t) const {
        return -kA_ * kx_ * std::sin(2.0 * kx_ * x) * sq(std::sin(ky_ * y)) * theta(t);
    }

    double source_n(double x, double y, double t) const {
        const double nv = n(x, y, t), cv = c(x, y, t);
        const double nx = dn_dx(x, y, t), ny = dn_dy(x, y, t);
        const double cx = dc_dx(x, y, t), cy = dc_dy(x, y, t);
        const double lap_n = -0.5 * (kx_ * kx_ + ky_ * ky_) * C(x, y) * En(t);
        const double lap_c = -0.25 * (kx_ * kx_ + ky_ * ky_) * C(x, y) * Ec(t);
        const double nt = -0.25 * C(x, y) * En(t);
        // div(n c^-k grad c) expanded by the product rule
        const double chem = std::pow(cv, -p_.k) * (nx * cx + ny * cy) -
                            p_.k * nv * std::pow(cv, -p_.k - 1.0) * (cx * cx + cy * cy) +
                            nv * std::pow(cv, -p_.k) * lap_c;
        const double react = p_.r * nv - p_.mu * nv * nv / log_eta(nv, p_.eta);
        return nt + ux(x, y, t) * nx + uy(x, y, t) * ny - lap_n + p_.chi * chem - react;
    }

    double source_c(double x, double y, double t) const {
        const double ct = -0.0625 * C(x, y) * Ec(t);
        const double cx = dc_dx(x, y, t), cy = dc_dy(x, y, t);
        const double lap_c = -0.25 * (kx_ * kx_ + ky_ * ky_) * C(x, y) * Ec(t);
        return ct + ux(x, y, t) * cx + uy(x, y, t) * cy - lap_c + p_.alpha * c(x, y, t) -
               p_.beta * n(x, y, t);
    }

    void source_u(double x, double y, double t, double& fx, double& fy) const {
        const double sx = std::sin(kx_ * x), cxv = std::cos(kx_ * x);
        const double sy = std::sin(ky_ * y);
        const double s2x = std::sin(2.0 * kx_ * x), c2x = std::cos(2.0 * kx_ * x);
        const double s2y = std::sin(2.0 * ky_ * y), c2y = std::cos(2.0 * ky_ * y);
        (void)cxv;
        const double th = theta(t), thp = dtheta(t);

        const double uxv = kA_ * ky_ * sq(sx) * s2y * th;
        const double uyv = -kA_ * kx_ * s2x * sq(sy) * th;
        const double dux_dx = kA_ * kx_ * ky_ * s2x * s2y * th;
        const double dux_dy = 2.0 * kA_ * ky_ * ky_ * sq(sx) * c2y * th;
        const double duy_dx = -2.0 * kA_ * kx_ * kx_ * c2x * sq(sy) * th;
        const double duy_dy = -kA_ * kx_ * ky_ * s2x * s2y * th;
        const double lap_ux =
            2.0 * kA_ * kx_ * kx_ * ky_ * c2x * s2y * th - 4.0 * kA_ * ky_ * ky_ * ky_ * sq(sx) * s2y * th;
        const double lap_uy =
            4.0 * kA_ * kx_ * kx_ * kx_ * s2x * sq(sy) * th - 2.0 * kA_ * kx_ * ky_ * ky_ * s2x * c2y * th;
        const double dux_dt = kA_ * ky_ * sq(sx) * s2y * thp;
        const double duy_dt = -kA_ * kx_ * s2x * sq(sy) * thp;

        fx = dux_dt + uxv * dux_dx + uyv * dux_dy - p_.nu_visc * lap_ux;
        fy = duy_dt + uxv * duy_dx + uyv * duy_dy - p_.nu_visc * lap_uy;
    }

    /// Sample the analytic fields into a SimState at time t (velocity from
    /// the discrete stream function so the sampled MAC divergence vanishes
    /// exactly).
    SimState sample_state(const Grid& g, double t) const {
        SimState state = SimState::zeros(g);
        state.t = t;
        state.n.fill_from([&](double x, double y) { return n(x, y, t); });
        state.c.fill_from([&](double x, double y) { return c(x, y, t); });
        auto psi = [&](double x, double y) {
            return kA_ * sq(std::sin(kx_ * x)) * sq(std::sin(ky_ * y)) * theta(t);
        };
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i < g.nx; ++i)
                state.u.ux(i, j) = (psi(g.xf(i), g.yf(j + 1)) - psi(g.xf(i), g.yf(j))) / g.hy;
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                state.u.uy(i, j) = -(psi(g.xf(i + 1), g.yf(j)) - psi(g.xf(i), g.yf(j))) / g.hx;
        return state;
    }

    Forcing make_forcing(const Grid& g) const {
        Forcing f = Forcing::zero(g);
        f.f = [this](double x, double y, double t, double& fx, double& fy) {
            source_u(x, y, t, fx, fy);
        };
        f.source_n = [this](double x, double y, double t) { return source_n(x, y, t); };
        f.source_c = [this](double x, double y, double t) { return source_c(x, y, t); };
        return f;
    }

private:
    static double sq(double v) { return v * v; }
    double C(double x, double y) const { return std::cos(kx_ * x) * std::cos(ky_ * y); }
    double En(double t) const { return std::exp(-0.5 * t); }
    double Ec(double t) const { return std::exp(-0.25 * t); }
    static double theta(double t) { return 1.0 + 0.5 * std::sin(t); }
    static double dtheta(double t) { return 0.5 * std::cos(t); }

    double dn_dx(double x, double y, double t) const {
        return -0.5 * kx_ * std::sin(kx_ * x) * std::cos(ky_ * y) * En(t);
    }
    double dn_dy(double x, double y, double t) const {
        return -0.5 * ky_ * std::cos(kx_ * x) * std::sin(ky_ * y) * En(t);
    }
    double dc_dx(double x, double y, double t) const {
        return -0.25 * kx_ * std::sin(kx_ * x) * std::cos(ky_ * y) * Ec(t);
    }
    double dc_dy(double x, double y, double t) const {
        return -0.25 * ky_ * std::cos(kx_ * x) * std::sin(ky_ * y) * Ec(t);
    }

    double kx_;
    double ky_;
    Params p_;
    double kA_;  // stream function amplitude
};

/// Neumann eigenfunction decay for the diffusion-only study: with
/// chi = r = mu = 0, beta = 0 and u = 0 the n equation reduces to n_t = lap n
/// and 2 + cos(pi x/lx) cos(pi y/ly) e^{-lambda t} is exact (the constant
/// offset keeps n positive).
class DiffusionSolution {
public:
    DiffusionSolution(double lx, double ly)
        : kx_(M_PI / lx), ky_(M_PI / ly), lambda_(kx_ * kx_ + ky_ * ky_) {}

    double n(double x, double y, double t) const {
        return 2.0 + std::cos(kx_ * x) * std::cos(ky_ * y) * std::exp(-lambda_ * t);
    }
    double lambda() const { return lambda_; }

    SimState sample_state(const Grid& g, double t) const {
        SimState state = SimState::zeros(g);
        state.t = t;
        state.n.fill_from([&](double x, double y) { return n(x, y, t); });
        state.c.fill(1.0);
        return state;
    }

private:
    double kx_;
    double ky_;
    double lambda_;
};

}  // namespace cfsim
