#pragma once

#include <cmath>
#include <cstdint>

#include "cfsim/grid.hpp"

namespace cfsim {

/// Scratch buffers sized to one grid so the stepper's hot loop can evaluate
/// flux-divergence operators without reallocating. All operators also work
/// without one (they allocate their own temporaries).
struct StencilWorkspace {
    StencilWorkspace() = default;
    explicit StencilWorkspace(const Grid& grid) : flux(grid) {}
    VectorField flux;
};

/// 5-point Laplacian with one ghost layer per field.bc. For NEUMANN_ZERO the
/// boundary-normal difference vanishes, which makes the discrete integral of
/// the output telescope to zero.
inline ScalarField laplacian(const ScalarField& field) {
    const Grid& g = field.grid();
    ScalarField out(g, field.bc(), 0.0);
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double c = field(i, j);
            out(i, j) = (field.ghost(i + 1, j) - 2.0 * c + field.ghost(i - 1, j)) * ihx2 +
                        (field.ghost(i, j + 1) - 2.0 * c + field.ghost(i, j - 1)) * ihy2;
        }
    }
    return out;
}

/// Cell-centered divergence of a MAC velocity field.
inline ScalarField mac_divergence(const VectorField& u) {
    const Grid& g = u.grid();
    ScalarField out(g, ScalarBc::NeumannZero, 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = (u.ux(i + 1, j) - u.ux(i, j)) / g.hx + (u.uy(i, j + 1) - u.uy(i, j)) / g.hy;
    return out;
}

/// Face-centered gradient of a cell-centered scalar; boundary faces are left
/// at zero (no-slip compatible). Discrete adjoint of -mac_divergence for
/// velocities with zero boundary faces.
inline VectorField grad_to_faces(const ScalarField& p) {
    const Grid& g = p.grid();
    VectorField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            out.ux(i, j) = (p(i, j) - p(i - 1, j)) / g.hx;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.uy(i, j) = (p(i, j) - p(i, j - 1)) / g.hy;
    return out;
}

namespace detail {

inline double upwind(double velocity, double left, double right) {
    return velocity > 0.0 ? left : right;
}

}  // namespace detail

/// -div(u * field) with first-order upwind face states in conservative form.
/// Walls carry zero flux, so the discrete integral of the output is zero.
inline ScalarField advect_scalar(const ScalarField& field, const VectorField& u,
                                 double div_tol = 1e-9, StencilWorkspace* ws = nullptr) {
    const Grid& g = field.grid();
    {
        const ScalarField div = mac_divergence(u);
        const double d = div.max_abs();
        if (d > div_tol)
            throw Error(ErrorCode::DIVERGENCE_TOO_LARGE,
                        "max |div u| = " + std::to_string(d) + " exceeds " + std::to_string(div_tol));
    }
    StencilWorkspace local;
    StencilWorkspace& w = ws ? *ws : (local = StencilWorkspace(g), local);
    w.flux.fill(0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            w.flux.ux(i, j) = u.ux(i, j) * detail::upwind(u.ux(i, j), field(i - 1, j), field(i, j));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            w.flux.uy(i, j) = u.uy(i, j) * detail::upwind(u.uy(i, j), field(i, j - 1), field(i, j));
    ScalarField out = mac_divergence(w.flux);
    for (double& v : out.data()) v = -v;
    return out;
}

/// Chemotactic face velocity chi * grad(c)/c_hat^k with the face-averaged c
/// clamped at c_floor. Shared by chemotaxis_div and the stepper's CFL bound.
inline VectorField chemotaxis_face_velocity(const ScalarField& c, const Params& params,
                                            std::int64_t* clamp_activations = nullptr) {
    const Grid& g = c.grid();
    VectorField w(g);
    std::int64_t clamps = 0;
    auto face_factor = [&](double ca, double cb) {
        double chat = 0.5 * (ca + cb);
        if (chat < params.c_floor) {
            chat = params.c_floor;
            ++clamps;
        }
        return std::pow(chat, -params.k);
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            w.ux(i, j) = params.chi * (c(i, j) - c(i - 1, j)) / g.hx * face_factor(c(i - 1, j), c(i, j));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            w.uy(i, j) = params.chi * (c(i, j) - c(i, j - 1)) / g.hy * face_factor(c(i, j - 1), c(i, j));
    if (clamp_activations) *clamp_activations += clamps;
    return w;
}

/// -chi * div(n_upwind * grad(c)/c_hat^k): the weak singular sensitivity flux
/// divergence, with n upwinded along the chemotactic face velocity and zero
/// wall flux.
inline ScalarField chemotaxis_div(const ScalarField& n, const ScalarField& c, const Params& params,
                                  std::int64_t* clamp_activations = nullptr,
                                  StencilWorkspace* ws = nullptr) {
    const Grid& g = n.grid();
    const VectorField w = chemotaxis_face_velocity(c, params, clamp_activations);
    StencilWorkspace local;
    StencilWorkspace& wk = ws ? *ws : (local = StencilWorkspace(g), local);
    wk.flux.fill(0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            wk.flux.ux(i, j) = w.ux(i, j) * detail::upwind(w.ux(i, j), n(i - 1, j), n(i, j));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            wk.flux.uy(i, j) = w.uy(i, j) * detail::upwind(w.uy(i, j), n(i, j - 1), n(i, j));
    ScalarField out = mac_divergence(wk.flux);
    for (double& v : out.data()) v = -v;
    return out;
}

/// -(u . grad)u with component-wise upwinding on the MAC grid. Tangential
/// neighbors across a wall come from the no-slip ghost reflection; boundary
/// faces keep a zero tendency.
inline VectorField advect_velocity(const VectorField& u) {
    const Grid& g = u.grid();
    VectorField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            const double uc = u.ux(i, j);
            const double vbar =
                0.25 * (u.uy(i - 1, j) + u.uy(i, j) + u.uy(i - 1, j + 1) + u.uy(i, j + 1));
            const double dudx = uc > 0.0 ? (u.ux(i, j) - u.ux(i - 1, j)) / g.hx
                                         : (u.ux(i + 1, j) - u.ux(i, j)) / g.hx;
            const double dudy = vbar > 0.0 ? (u.ux(i, j) - u.ux_ghost(i, j - 1)) / g.hy
                                           : (u.ux_ghost(i, j + 1) - u.ux(i, j)) / g.hy;
            out.ux(i, j) = -(uc * dudx + vbar * dudy);
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double vc = u.uy(i, j);
            const double ubar =
                0.25 * (u.ux(i, j - 1) + u.ux(i + 1, j - 1) + u.ux(i, j) + u.ux(i + 1, j));
            const double dvdy = vc > 0.0 ? (u.uy(i, j) - u.uy(i, j - 1)) / g.hy
                                         : (u.uy(i, j + 1) - u.uy(i, j)) / g.hy;
            const double dvdx = ubar > 0.0 ? (u.uy(i, j) - u.uy_ghost(i - 1, j)) / g.hx
                                           : (u.uy_ghost(i + 1, j) - u.uy(i, j)) / g.hx;
            out.uy(i, j) = -(ubar * dvdx + vc * dvdy);
        }
    }
    return out;
}

}  // namespace cfsim
