#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "cfsim/errors.hpp"

namespace cfsim {

/// Uniform rectangular mesh on [0,lx] x [0,ly] with an MAC staggered layout:
/// scalars (n, c, P) live at cell centers ((i+1/2)hx, (j+1/2)hy), the x
/// velocity component at x-faces (i*hx, (j+1/2)hy) and the y component at
/// y-faces ((i+1/2)hx, j*hy).
struct Grid {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;
    double hx = 0.0;
    double hy = 0.0;

    int cell_count() const { return nx * ny; }
    double area() const { return lx * ly; }

    double xc(int i) const { return (i + 0.5) * hx; }
    double yc(int j) const { return (j + 0.5) * hy; }
    double xf(int i) const { return i * hx; }
    double yf(int j) const { return j * hy; }

    bool operator==(const Grid& other) const = default;
};

inline Grid make_grid(int nx, int ny, double lx, double ly) {
    if (nx < 4 || ny < 4)
        throw Error(ErrorCode::INVALID_DIMENSIONS,
                    "cell counts must be >= 4, got " + std::to_string(nx) + "x" + std::to_string(ny));
    if (!(lx > 0.0) || !(ly > 0.0))
        throw Error(ErrorCode::INVALID_DIMENSIONS, "domain lengths must be positive");
    Grid g;
    g.nx = nx;
    g.ny = ny;
    g.lx = lx;
    g.ly = ly;
    g.hx = lx / nx;
    g.hy = ly / ny;
    return g;
}

enum class ScalarBc {
    NeumannZero,   // ghost mirrors the adjacent interior cell
    DirichletZero, // ghost reflects it with a sign flip
};

/// Cell-centered scalar stored row-major, index (i,j) -> j*nx + i.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(const Grid& grid, ScalarBc bc, double fill = 0.0)
        : grid_(grid), bc_(bc), data_(static_cast<std::size_t>(grid.cell_count()), fill) {}

    const Grid& grid() const { return grid_; }
    ScalarBc bc() const { return bc_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(j) * grid_.nx + i]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(j) * grid_.nx + i]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    /// Value at (i,j) extended by one ghost layer according to the bc.
    double ghost(int i, int j) const {
        int ci = i, cj = j;
        double sign = 1.0;
        if (i < 0) { ci = 0; sign *= bc_sign(); }
        else if (i >= grid_.nx) { ci = grid_.nx - 1; sign *= bc_sign(); }
        if (j < 0) { cj = 0; sign *= bc_sign(); }
        else if (j >= grid_.ny) { cj = grid_.ny - 1; sign *= bc_sign(); }
        return sign * (*this)(ci, cj);
    }

    void fill(double v) { data_.assign(data_.size(), v); }

    void fill_from(const std::function<double(double, double)>& f) {
        for (int j = 0; j < grid_.ny; ++j)
            for (int i = 0; i < grid_.nx; ++i)
                (*this)(i, j) = f(grid_.xc(i), grid_.yc(j));
    }

    double min() const {
        double m = data_.empty() ? 0.0 : data_[0];
        for (double v : data_) m = std::min(m, v);
        return m;
    }
    double max() const {
        double m = data_.empty() ? 0.0 : data_[0];
        for (double v : data_) m = std::max(m, v);
        return m;
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    double bc_sign() const { return bc_ == ScalarBc::NeumannZero ? 1.0 : -1.0; }

    Grid grid_{};
    ScalarBc bc_ = ScalarBc::NeumannZero;
    std::vector<double> data_;
};

/// Face-centered velocity on the MAC grid. ux is (nx+1) x ny with index
/// (i,j) -> j*(nx+1) + i; uy is nx x (ny+1) with (i,j) -> j*nx + i.
/// Under the no-slip wall condition the boundary faces are identically zero
/// and tangential ghosts reflect with a sign flip so the wall value vanishes.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const Grid& grid)
        : grid_(grid),
          ux_(static_cast<std::size_t>(grid.nx + 1) * grid.ny, 0.0),
          uy_(static_cast<std::size_t>(grid.nx) * (grid.ny + 1), 0.0) {}

    const Grid& grid() const { return grid_; }

    double& ux(int i, int j) { return ux_[static_cast<std::size_t>(j) * (grid_.nx + 1) + i]; }
    double ux(int i, int j) const { return ux_[static_cast<std::size_t>(j) * (grid_.nx + 1) + i]; }
    double& uy(int i, int j) { return uy_[static_cast<std::size_t>(j) * grid_.nx + i]; }
    double uy(int i, int j) const { return uy_[static_cast<std::size_t>(j) * grid_.nx + i]; }

    std::vector<double>& ux_data() { return ux_; }
    const std::vector<double>& ux_data() const { return ux_; }
    std::vector<double>& uy_data() { return uy_; }
    const std::vector<double>& uy_data() const { return uy_; }

    // Tangential ghost rows/columns for no-slip walls.
    double ux_ghost(int i, int j) const {
        if (j < 0) return -ux(i, 0);
        if (j >= grid_.ny) return -ux(i, grid_.ny - 1);
        return ux(i, j);
    }
    double uy_ghost(int i, int j) const {
        if (i < 0) return -uy(0, j);
        if (i >= grid_.nx) return -uy(grid_.nx - 1, j);
        return uy(i, j);
    }

    void zero_boundary_faces() {
        for (int j = 0; j < grid_.ny; ++j) {
            ux(0, j) = 0.0;
            ux(grid_.nx, j) = 0.0;
        }
        for (int i = 0; i < grid_.nx; ++i) {
            uy(i, 0) = 0.0;
            uy(i, grid_.ny) = 0.0;
        }
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : ux_) m = std::max(m, std::abs(v));
        for (double v : uy_) m = std::max(m, std::abs(v));
        return m;
    }

    void fill(double v) {
        ux_.assign(ux_.size(), v);
        uy_.assign(uy_.size(), v);
        zero_boundary_faces();
    }

private:
    Grid grid_{};
    std::vector<double> ux_;
    std::vector<double> uy_;
};

/// PDE constants. Diffusivities and the viscosity are all 1 in the model;
/// nu_visc stays a field so convergence studies can perturb it.
struct Params {
    double r = 1.0;
    double mu = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
    double chi = 1.0;
    double k = 0.5;    // singularity exponent, in (0,1)
    double eta = 0.5;  // log exponent, in (0,1)
    double nu_visc = 1.0;
    double c_floor = 1e-12;

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0)) throw Error(ErrorCode::VALIDATION_ERROR, std::string(name) + " must be > 0");
        };
        positive(r, "r");
        positive(mu, "mu");
        positive(alpha, "alpha");
        positive(beta, "beta");
        positive(chi, "chi");
        positive(c_floor, "c_floor");
        if (!(k > 0.0 && k < 1.0)) throw Error(ErrorCode::VALIDATION_ERROR, "k must lie in (0,1)");
        if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorCode::VALIDATION_ERROR, "eta must lie in (0,1)");
    }
};

/// sub-logistic damping denominator log^eta(s+e)
inline double log_eta(double s, double eta) { return std::pow(std::log(s + M_E), eta); }

/// Gravitational potential (time independent, cell centered) and the bounded
/// external force f(x,y,t), evaluated onto faces each step. Optional extra
/// volume sources feed manufactured-solution runs and default to absent.
struct Forcing {
    ScalarField phi;  // NEUMANN_ZERO ghosts; only its face gradient is used
    std::function<void(double, double, double, double&, double&)> f;  // (x,y,t) -> (fx,fy)
    std::function<double(double, double, double)> source_n;           // optional
    std::function<double(double, double, double)> source_c;           // optional

    static Forcing zero(const Grid& grid) {
        Forcing out;
        out.phi = ScalarField(grid, ScalarBc::NeumannZero, 0.0);
        return out;
    }

    void eval_f(double x, double y, double t, double& fx, double& fy) const {
        if (f) f(x, y, t, fx, fy);
        else { fx = 0.0; fy = 0.0; }
    }
};

/// One simulated snapshot: t plus the three prognostic fields.
struct SimState {
    double t = 0.0;
    ScalarField n;  // NEUMANN_ZERO
    ScalarField c;  // NEUMANN_ZERO
    VectorField u;  // no-slip

    static SimState zeros(const Grid& grid) {
        SimState s;
        s.n = ScalarField(grid, ScalarBc::NeumannZero, 0.0);
        s.c = ScalarField(grid, ScalarBc::NeumannZero, 0.0);
        s.u = VectorField(grid);
        return s;
    }
};

/// Midpoint-rule integral: hx*hy*sum(data).
inline double integrate(const ScalarField& field) {
    double sum = 0.0;
    for (double v : field.data()) sum += v;
    return field.grid().hx * field.grid().hy * sum;
}

}  // namespace cfsim
