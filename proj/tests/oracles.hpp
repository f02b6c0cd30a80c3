// Test-side oracles, deliberately independent of the library's numerics:
// compensated re-summation, RK4 integrators, bisection, and a dense direct
// solver that rebuilds operator matrices entry by entry.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "cfsim/grid.hpp"

namespace oracles {

/// Kahan-compensated midpoint-rule integral, summed in reverse index order.
inline double integrate_compensated(const cfsim::ScalarField& f) {
    const std::vector<double>& data = f.data();
    double sum = 0.0, comp = 0.0;
    for (std::size_t idx = data.size(); idx-- > 0;) {
        const double y = data[idx] - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum * f.grid().hx * f.grid().hy;
}

/// RK4 for y' = f(t, y) on scalars.
template <class Rhs>
double rk4_scalar(double y0, double t0, double t1, double dt, Rhs&& rhs) {
    double y = y0, t = t0;
    while (t < t1 - 1e-13) {
        const double h = std::min(dt, t1 - t);
        const double k1 = rhs(t, y);
        const double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
        const double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
        const double k4 = rhs(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
    }
    return y;
}

struct Pair {
    double n, c;
};

/// RK4 for the homogeneous 2-system (n, c).
template <class Rhs>
Pair rk4_pair(Pair y0, double t0, double t1, double dt, Rhs&& rhs) {
    Pair y = y0;
    double t = t0;
    auto axpy = [](Pair a, double s, Pair b) { return Pair{a.n + s * b.n, a.c + s * b.c}; };
    while (t < t1 - 1e-13) {
        const double h = std::min(dt, t1 - t);
        const Pair k1 = rhs(t, y);
        const Pair k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
        const Pair k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
        const Pair k4 = rhs(t + h, axpy(y, h, k3));
        y.n += h / 6.0 * (k1.n + 2 * k2.n + 2 * k3.n + k4.n);
        y.c += h / 6.0 * (k1.c + 2 * k2.c + 2 * k3.c + k4.c);
        t += h;
    }
    return y;
}

/// Bisection root finder for continuous f with a sign change on [lo, hi].
template <class F>
double bisect(F&& f, double lo, double hi, double tol = 1e-14) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Gaussian elimination with partial pivoting on a dense matrix.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t m = b.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < m; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < m; ++row) {
            const double f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < m; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(m, 0.0);
    for (std::size_t row = m; row-- > 0;) {
        double s = b[row];
        for (std::size_t k = row + 1; k < m; ++k) s -= a[row][k] * x[k];
        x[row] = s / a[row][row];
    }
    return x;
}

/// Dense (I - gamma*Lap_bc) matrix built independently from ghost rules.
inline std::vector<std::vector<double>> helmholtz_matrix(const cfsim::Grid& g, cfsim::ScalarBc bc,
                                                         double gamma) {
    const std::size_t m = static_cast<std::size_t>(g.nx) * g.ny;
    std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
    const double sign = bc == cfsim::ScalarBc::NeumannZero ? 1.0 : -1.0;
    const double cx = 1.0 / (g.hx * g.hx), cy = 1.0 / (g.hy * g.hy);
    auto id = [&](int i, int j) { return static_cast<std::size_t>(j) * g.nx + i; };
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t row = id(i, j);
            a[row][row] += 1.0 + 2.0 * gamma * (cx + cy);
            auto neighbor = [&](int ni, int nj, double coeff) {
                if (ni >= 0 && ni < g.nx && nj >= 0 && nj < g.ny) a[row][id(ni, nj)] -= gamma * coeff;
                else a[row][row] -= gamma * coeff * sign;  // ghost folds back
            };
            neighbor(i - 1, j, cx);
            neighbor(i + 1, j, cx);
            neighbor(i, j - 1, cy);
            neighbor(i, j + 1, cy);
        }
    }
    return a;
}

/// Deterministic pseudo-random scalar field.
inline cfsim::ScalarField random_field(const cfsim::Grid& g, cfsim::ScalarBc bc, unsigned seed,
                                       double lo = -1.0, double hi = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    cfsim::ScalarField f(g, bc, 0.0);
    for (double& v : f.data()) v = dist(rng);
    return f;
}

/// Discretely divergence-free velocity from a random stream function on the
/// nodes (constant on the boundary nodes, so boundary faces come out zero).
inline cfsim::VectorField random_solenoidal(const cfsim::Grid& g, unsigned seed, double amp = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-amp, amp);
    std::vector<double> psi(static_cast<std::size_t>(g.nx + 1) * (g.ny + 1), 0.0);
    auto at = [&](int i, int j) -> double& { return psi[static_cast<std::size_t>(j) * (g.nx + 1) + i]; };
    for (int j = 1; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) at(i, j) = dist(rng);
    cfsim::VectorField u(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) u.ux(i, j) = (at(i, j + 1) - at(i, j)) / g.hy;
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) u.uy(i, j) = -(at(i + 1, j) - at(i, j)) / g.hx;
    return u;
}

}  // namespace oracles
