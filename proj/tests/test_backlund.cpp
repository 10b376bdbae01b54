#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "susy/backlund.hpp"
#include "susy/catalog.hpp"
#include "susy/core.hpp"
#include "susy/riccati.hpp"

using namespace susy;

namespace {

const Window kWin{-8.0, 8.0};

}  // namespace

TEST_CASE("backlund_step matches the finite-difference closed form") {
    // Both inputs solve the free-particle Riccati equation.
    const RealFunction bf =
        catalog::free_particle_beta({Branch::S, -0.5, 0.0}, kWin);
    const RealFunction bv =
        catalog::free_particle_beta({Branch::R, -2.0, 0.0}, kWin);
    const RealFunction b2 = backlund::backlund_step(bf, bv, -0.5, -2.0);

    auto expect = [](double x) {
        const double f = -1.0 / std::tanh(x);
        const double v = -2.0 * std::tanh(2.0 * x);
        return -f - 2.0 * (-0.5 + 2.0) / (f - v);
    };
    for (double x : {-3.0, -1.5, 0.2, 1.1, 4.0})
        CHECK(b2.eval(x) == doctest::Approx(expect(x)).epsilon(1e-10));

    // The step output solves the Riccati equation of the partner
    // potential V1 = beta1' = 1/sinh^2 x at the new energy.
    auto v1f = [](double x) {
        const double s = std::sinh(x);
        return 1.0 / (s * s);
    };
    const RealFunction v1 = RealFunction::numeric(v1f, {0.0}, kWin);
    const RealFunction res = riccati::riccati_residual(b2, v1, -2.0);
    const Grid g = Grid::uniform(kWin, 1601);
    CHECK(riccati::sup_norm(res, g, 0.3) < 1e-6);
}

TEST_CASE("omega_step equals the sum of consecutive betas") {
    const RealFunction bf =
        catalog::free_particle_beta({Branch::S, -0.5, 0.0}, kWin);
    const RealFunction bv =
        catalog::free_particle_beta({Branch::R, -2.0, 0.0}, kWin);
    const RealFunction b2 = backlund::backlund_step(bf, bv, -0.5, -2.0);
    const RealFunction om2 = backlund::omega_step(bf, bv, -0.5, -2.0);
    for (double x : {-2.5, -0.8, 0.4, 1.7, 3.3})
        CHECK(om2.eval(x) ==
              doctest::Approx(b2.eval(x) + bf.eval(x)).epsilon(1e-10));
}

TEST_CASE("step constructors reject degenerate input") {
    const RealFunction bf =
        catalog::free_particle_beta({Branch::S, -0.5, 0.0}, kWin);
    const RealFunction bv =
        catalog::free_particle_beta({Branch::R, -2.0, 0.0}, kWin);
    CHECK_THROWS_AS(backlund::backlund_step(bf, bv, -0.5, -0.5),
                    EqualEnergies);
    CHECK_THROWS_AS(backlund::backlund_step(bf, bf, -0.5, -2.0),
                    SamePrevSolution);
    CHECK_THROWS_AS(backlund::omega_step(bf, bf, -0.5, -2.0),
                    SamePrevSolution);

    // beta = -x solves the oscillator Riccati equation, not the
    // free-particle one; the closure probe must notice.
    const RealFunction wrong = catalog::oscillator_particular_beta(kWin);
    CHECK_THROWS_AS(backlund::backlund_step(bf, wrong, -0.5, -2.0),
                    std::invalid_argument);
}

TEST_CASE("zero_mode reproduces cosh and sinh modes") {
    const RealFunction br =
        catalog::free_particle_beta({Branch::R, -0.5, 0.0}, kWin);
    const RealFunction u_r = backlund::zero_mode(br);
    CHECK(u_r.eval(0.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(u_r.eval(1.0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-9));
    CHECK(u_r.eval(-2.5) == doctest::Approx(std::cosh(2.5)).epsilon(1e-9));
    CHECK(u_r.deriv(1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-9));
    CHECK(u_r.deriv2(1.0) == doctest::Approx(std::cosh(1.0)).epsilon(1e-9));

    // The pole of -coth at the origin is absorbed into a monomial factor,
    // so the mode passes smoothly through its zero.
    const RealFunction bs =
        catalog::free_particle_beta({Branch::S, -0.5, 0.0}, kWin);
    const RealFunction u_s = backlund::zero_mode(bs);
    CHECK(u_s.eval(2.0) / u_s.eval(1.0) ==
          doctest::Approx(std::sinh(2.0) / std::sinh(1.0)).epsilon(1e-9));
    CHECK(std::fabs(u_s.eval(0.0)) < 1e-12);
    CHECK(u_s.singularities().empty());
}

TEST_CASE("zero_mode rejects non-integer residues") {
    auto f = [](double x) { return -0.5 / x; };
    auto d1 = [](double x) { return 0.5 / (x * x); };
    auto d2 = [](double x) { return -1.0 / (x * x * x); };
    const RealFunction beta = RealFunction::analytic(f, d1, d2, {0.0}, kWin);
    CHECK_THROWS_AS(backlund::zero_mode(beta), NonintegrableSingularity);
}

TEST_CASE("two-step chain reproduces the transparent double well") {
    const double k1 = std::sqrt(8.0), k2 = std::sqrt(2.0);
    const double e1 = -0.5 * k1 * k1, e2 = -0.5 * k2 * k2;
    const RealFunction v0 = catalog::zero_potential();

    auto family = [&](double eps) {
        if (eps == e1)
            return catalog::free_particle_beta({Branch::S, eps, 0.0});
        return catalog::free_particle_beta({Branch::R, eps, 0.0});
    };

    const std::vector<ChainStep> steps = {ChainStep::simple(e1),
                                          ChainStep::simple(e2)};
    const backlund::SusyChain chain =
        backlund::build_chain(v0, steps, family);

    REQUIRE(chain.steps.size() == 2);
    CHECK(chain.build_checks.all_passed());

    const RealFunction ref = catalog::bargmann_double_well(k1, k2, 0.0, 0.0);
    const RealFunction& v2 = chain.current_potential();
    for (double x : {-4.0, -1.0, 0.3, 0.5, 1.0, 2.0, 6.0})
        CHECK(v2.eval(x) == doctest::Approx(ref.eval(x)).epsilon(1e-8));
    CHECK(v2.singularities().empty());

    // assemble_potential cross-checks the telescoped assembly internally.
    const Grid g = Grid::uniform(-12.0, 12.0, 1201);
    const RealFunction va = backlund::assemble_potential(v0, chain, g);
    for (double x : {-3.0, 0.7, 2.4})
        CHECK(va.eval(x) == doctest::Approx(v2.eval(x)).epsilon(1e-12));
}

TEST_CASE("build_chain validates its configuration") {
    const RealFunction v0 = catalog::zero_potential();
    auto family = [](double eps) {
        return catalog::free_particle_beta({Branch::R, eps, 0.0});
    };
    CHECK_THROWS_AS(backlund::build_chain(v0, {}, family), ChainEmpty);
    CHECK_THROWS_AS(
        backlund::build_chain(
            v0, {ChainStep::simple(-0.5), ChainStep::simple(-0.5)}, family),
        EqualEnergies);
    CHECK_THROWS_AS(
        backlund::build_chain(
            v0, {ChainStep::simple(-0.5), ChainStep::confluent(-2.0, 0.3)},
            family),
        ConfigError);
}

TEST_CASE("assemble_potential detects a corrupted parity route") {
    const RealFunction v0 = catalog::zero_potential();
    auto family = [](double eps) {
        if (eps == -4.0)
            return catalog::free_particle_beta({Branch::S, eps, 0.0});
        return catalog::free_particle_beta({Branch::R, eps, 0.0});
    };
    backlund::SusyChain chain = backlund::build_chain(
        v0, {ChainStep::simple(-4.0), ChainStep::simple(-1.0)}, family);
    chain.steps.back().potential = catalog::zero_potential();

    const Grid g = Grid::uniform(-12.0, 12.0, 1201);
    CHECK_THROWS_AS(backlund::assemble_potential(v0, chain, g),
                    ParityMismatch);

    backlund::SusyChain empty;
    empty.v0 = v0;
    CHECK_THROWS_AS(backlund::assemble_potential(v0, empty, g), ChainEmpty);
}
