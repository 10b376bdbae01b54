#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "susy/catalog.hpp"
#include "susy/core.hpp"
#include "susy/riccati.hpp"

using namespace susy;

TEST_CASE("free particle oscillatory solution: nodes and beta = -cot") {
    const RealFunction V = catalog::zero_potential({-8.0, 8.0});
    const Grid g = Grid::uniform(-8.0, 8.0, 1601);
    const auto sol =
        riccati::solve_schrodinger(V, 0.5, g, std::sin(-8.0), std::cos(-8.0));

    // u = sin x; interior zeros at multiples of pi.
    const double pi = std::acos(-1.0);
    std::vector<double> expected = {-2 * pi, -pi, 0.0, pi, 2 * pi};
    REQUIRE(sol.nodes.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(std::fabs(sol.nodes[i] - expected[i]) < 1e-9);

    const RealFunction beta = riccati::beta_from_u(sol);
    for (double x : {-5.5, -2.0, 0.7, 1.4, 4.9})
        CHECK(beta.eval(x) ==
              doctest::Approx(-std::cos(x) / std::sin(x)).epsilon(1e-7));

    const RealFunction res = riccati::riccati_residual(beta, V, 0.5);
    CHECK(riccati::sup_norm(res, g, 0.05) < 1e-7);
}

TEST_CASE("free particle singular-branch solution: beta = -coth") {
    const RealFunction V = catalog::zero_potential({-8.0, 8.0});
    const Grid g = Grid::uniform(-8.0, 8.0, 1601);
    const auto sol = riccati::solve_schrodinger(V, -0.5, g, std::sinh(-8.0),
                                                std::cosh(-8.0));

    // u = sinh x; a single zero at the origin.
    REQUIRE(sol.nodes.size() == 1);
    CHECK(std::fabs(sol.nodes[0]) < 1e-8);

    const RealFunction beta = riccati::beta_from_u(sol);
    for (double x : {-4.0, -2.0, 1.0, 2.0, 6.0})
        CHECK(beta.eval(x) ==
              doctest::Approx(-std::cosh(x) / std::sinh(x)).epsilon(1e-6));
    CHECK(beta.singularities().size() == 1);

    const RealFunction res = riccati::riccati_residual(beta, V, -0.5);
    CHECK(riccati::sup_norm(res, g, 0.05) < 1e-6);
}

TEST_CASE("oscillator growing mode gives beta = -x") {
    // u = exp(x^2/2) solves u'' = (x^2 + 1) u with u(0) = 1, u'(0) = 0.
    // Integrating in the growing direction keeps the mode well conditioned.
    const RealFunction V = catalog::oscillator_potential({0.0, 8.0});
    const Grid g = Grid::uniform(0.0, 8.0, 801);
    const auto sol = riccati::solve_schrodinger(V, -0.5, g, 1.0, 0.0);

    CHECK(sol.nodes.empty());
    const RealFunction beta = riccati::beta_from_u(sol);
    for (double x : {0.5, 1.0, 3.0, 5.0, 7.5})
        CHECK(beta.eval(x) == doctest::Approx(-x).epsilon(1e-7));
}

TEST_CASE("solve_schrodinger rejects the trivial initial condition") {
    const RealFunction V = catalog::zero_potential({-4.0, 4.0});
    const Grid g = Grid::uniform(-4.0, 4.0, 401);
    CHECK_THROWS_AS(riccati::solve_schrodinger(V, 1.0, g, 0.0, 0.0),
                    TrivialInitialCondition);
}

TEST_CASE("general_solution enlarges the null branch into -lambda/(lambda x + 1)") {
    const RealFunction beta_p =
        catalog::free_particle_beta({Branch::N, 0.0, 0.0}, {-6.0, 6.0});

    const double lambda = 5.0;
    const RealFunction beta = riccati::general_solution(beta_p, 0.0, lambda);
    for (double x : {-1.0, 0.5, 1.0, 2.0, 4.0})
        CHECK(beta.eval(x) ==
              doctest::Approx(-lambda / (lambda * x + 1.0)).epsilon(1e-6));

    // The whole family still solves the same Riccati equation.
    const RealFunction V = catalog::zero_potential({-6.0, 6.0});
    const RealFunction res = riccati::riccati_residual(beta, V, 0.0);
    const Grid g = Grid::uniform(-6.0, 6.0, 601);
    CHECK(riccati::sup_norm(res, g, 0.5) < 1e-6);
}

TEST_CASE("general_solution with infinite parameter returns the input") {
    const RealFunction beta_p =
        catalog::free_particle_beta({Branch::R, -0.5, 0.0}, {-6.0, 6.0});
    const RealFunction beta = riccati::general_solution(
        beta_p, -0.5, std::numeric_limits<double>::infinity());
    for (double x : {-3.0, 0.0, 2.5}) CHECK(beta.eval(x) == beta_p.eval(x));
}

TEST_CASE("riccati_residual flags a non-solution") {
    const RealFunction V = catalog::zero_potential({-6.0, 6.0});
    const Grid g = Grid::uniform(-6.0, 6.0, 601);

    const RealFunction good =
        catalog::free_particle_beta({Branch::R, -0.5, 0.0}, {-6.0, 6.0});
    CHECK(riccati::sup_norm(riccati::riccati_residual(good, V, -0.5), g, 0.05) <
          1e-8);

    auto bad_f = [](double x) { return -2.0 * std::tanh(x); };
    const RealFunction bad = RealFunction::numeric(bad_f, {}, {-6.0, 6.0});
    CHECK(riccati::sup_norm(riccati::riccati_residual(bad, V, -0.5), g, 0.05) >
          0.1);
}
