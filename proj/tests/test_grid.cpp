#include <catch_amalgamated.hpp>

#include "cfsim/grid.hpp"
#include "oracles.hpp"

using namespace cfsim;

TEST_CASE("make_grid spacing arithmetic") {
    const Grid g = make_grid(4, 4, 1.0, 1.0);
    CHECK(g.hx == 0.25);
    CHECK(g.hy == 0.25);

    const Grid g2 = make_grid(128, 64, 2.0, 1.0);
    CHECK(g2.hx == 0.015625);
    CHECK(g2.hy == 0.015625);
}

TEST_CASE("make_grid rejects bad dimensions") {
    CHECK_THROWS_AS(make_grid(3, 4, 1.0, 1.0), Error);
    CHECK_THROWS_AS(make_grid(4, 3, 1.0, 1.0), Error);
    CHECK_THROWS_AS(make_grid(8, 8, 0.0, 1.0), Error);
    CHECK_THROWS_AS(make_grid(8, 8, 1.0, -2.0), Error);
    try {
        make_grid(3, 4, 1.0, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::INVALID_DIMENSIONS);
    }
}

TEST_CASE("integrate constants") {
    const Grid g = make_grid(8, 8, 1.0, 1.0);
    ScalarField one(g, ScalarBc::NeumannZero, 1.0);
    CHECK(integrate(one) == Catch::Approx(1.0).margin(1e-15));
    ScalarField zero(g, ScalarBc::NeumannZero, 0.0);
    CHECK(integrate(zero) == 0.0);
}

TEST_CASE("integrate matches compensated re-summation on random fields") {
    const Grid g = make_grid(8, 8, 2.0, 0.5);
    const ScalarField f = oracles::random_field(g, ScalarBc::NeumannZero, 42, -3.0, 7.0);
    const double expected = oracles::integrate_compensated(f);
    CHECK(integrate(f) == Catch::Approx(expected).epsilon(1e-14));
}

TEST_CASE("integrate is linear") {
    const Grid g = make_grid(16, 12, 1.5, 1.0);
    const ScalarField f = oracles::random_field(g, ScalarBc::NeumannZero, 1);
    const ScalarField h = oracles::random_field(g, ScalarBc::NeumannZero, 2);
    const double a = 2.75, b = -0.4;
    ScalarField combo(g, ScalarBc::NeumannZero, 0.0);
    for (std::size_t i = 0; i < combo.data().size(); ++i)
        combo.data()[i] = a * f.data()[i] + b * h.data()[i];
    const double lhs = integrate(combo);
    const double rhs = a * integrate(f) + b * integrate(h);
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("Neumann ghosts zero the boundary-normal difference") {
    const Grid g = make_grid(6, 5, 1.0, 1.0);
    const ScalarField f = oracles::random_field(g, ScalarBc::NeumannZero, 7);
    for (int j = 0; j < g.ny; ++j) {
        CHECK(f.ghost(-1, j) - f(0, j) == 0.0);
        CHECK(f.ghost(g.nx, j) - f(g.nx - 1, j) == 0.0);
    }
    for (int i = 0; i < g.nx; ++i) {
        CHECK(f.ghost(i, -1) - f(i, 0) == 0.0);
        CHECK(f.ghost(i, g.ny) - f(i, g.ny - 1) == 0.0);
    }
}

TEST_CASE("Dirichlet ghosts reflect with a sign flip") {
    const Grid g = make_grid(6, 5, 1.0, 1.0);
    const ScalarField f = oracles::random_field(g, ScalarBc::DirichletZero, 8);
    for (int j = 0; j < g.ny; ++j) CHECK(f.ghost(-1, j) == -f(0, j));
    for (int i = 0; i < g.nx; ++i) CHECK(f.ghost(i, g.ny) == -f(i, g.ny - 1));
}

TEST_CASE("no-slip boundary faces stay exactly zero") {
    const Grid g = make_grid(9, 7, 1.0, 2.0);
    VectorField u(g);
    u.fill(3.5);  // fills then re-zeros the boundary
    for (int j = 0; j < g.ny; ++j) {
        CHECK(u.ux(0, j) == 0.0);
        CHECK(u.ux(g.nx, j) == 0.0);
    }
    for (int i = 0; i < g.nx; ++i) {
        CHECK(u.uy(i, 0) == 0.0);
        CHECK(u.uy(i, g.ny) == 0.0);
    }
    const VectorField w = oracles::random_solenoidal(g, 3);
    for (int j = 0; j < g.ny; ++j) {
        CHECK(w.ux(0, j) == 0.0);
        CHECK(w.ux(g.nx, j) == 0.0);
    }
}

TEST_CASE("params validation") {
    Params p;
    CHECK_NOTHROW(p.validate());
    p.k = 1.2;
    CHECK_THROWS_AS(p.validate(), Error);
    p.k = 0.5;
    p.eta = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p.eta = 0.5;
    p.mu = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
}
