#include <doctest.h>

#include <cmath>
#include <limits>

#include "susy/numerics.hpp"

using namespace susy::num;

TEST_CASE("fd8 stencils reach near machine accuracy on smooth functions") {
    auto f = [](double x) { return std::exp(std::sin(x)); };
    auto d1 = [](double x) { return std::cos(x) * std::exp(std::sin(x)); };
    auto d2 = [](double x) {
        return (std::cos(x) * std::cos(x) - std::sin(x)) *
               std::exp(std::sin(x));
    };
    for (double x : {-2.3, 0.0, 0.9, 4.1}) {
        CHECK(fd8_deriv(f, x) == doctest::Approx(d1(x)).epsilon(1e-11));
        CHECK(fd8_deriv2(f, x) == doctest::Approx(d2(x)).epsilon(1e-8));
    }
}

TEST_CASE("bisect refines a bracketed root") {
    auto f = [](double x) { return std::cos(x); };
    double r = bisect(f, 1.0, 2.0);
    CHECK(r == doctest::Approx(std::acos(0.0)).epsilon(1e-11));
}

TEST_CASE("sign_change_roots finds all zeros and skips non-finite samples") {
    std::vector<double> xs;
    for (int i = 0; i <= 200; ++i) xs.push_back(-10.0 + 0.1 * i);
    auto f = [](double x) {
        if (std::fabs(x - 3.05) < 1e-12)
            return std::numeric_limits<double>::quiet_NaN();
        return std::sin(x);
    };
    auto roots = sign_change_roots(f, xs);
    REQUIRE(roots.size() == 7);  // -3pi..3pi and 0
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double expect = (double(i) - 3.0) * 3.14159265358979323846;
        CHECK(roots[i] == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("growth_exponent and bounded_near classify local behavior") {
    auto pole1 = [](double x) { return 1.0 / (x - 2.0); };
    auto pole2 = [](double x) { return 1.0 / ((x - 2.0) * (x - 2.0)); };
    auto smooth = [](double x) { return std::cos(3.0 * x); };
    CHECK(growth_exponent(pole1, 2.0) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(growth_exponent(pole2, 2.0) == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(!bounded_near(pole1, 2.0));
    CHECK(!bounded_near(pole2, 2.0));
    CHECK(bounded_near(smooth, 2.0));
    // Removable 0/0 point: bounded.
    auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; };
    CHECK(bounded_near(sinc, 0.0));
}

TEST_CASE("residue_order recovers the zero-mode exponent") {
    // beta = -m/(x-s)  <=>  u = exp(-int beta) ~ (x-s)^m
    for (double m : {1.0, 2.0, -1.0, 3.0}) {
        auto beta = [m](double x) { return -m / (x - 0.5); };
        CHECK(residue_order(beta, 0.5) == doctest::Approx(m).epsilon(1e-6));
    }
}

TEST_CASE("Antiderivative matches closed forms on and off panel nodes") {
    Antiderivative F([](double x) { return std::cos(x); }, -10.0, 10.0, 0.0,
                     2048);
    for (double x : {-9.7, -4.0, -0.31, 0.0, 1.0, 3.14159, 9.99}) {
        CHECK(F(x) == doctest::Approx(std::sin(x)).epsilon(1e-12));
    }
    // Nonzero reference point.
    Antiderivative G([](double x) { return 2.0 * x; }, -5.0, 5.0, 1.0, 512);
    CHECK(G(3.0) == doctest::Approx(9.0 - 1.0).epsilon(1e-12));
    CHECK(G(-2.0) == doctest::Approx(4.0 - 1.0).epsilon(1e-12));
}

TEST_CASE("gauss15 integrates high-degree polynomials exactly") {
    // Exact for degree <= 29.
    auto f = [](double x) { return std::pow(x, 20); };
    const double got = gauss15(f, 0.0, 1.0);
    CHECK(got == doctest::Approx(1.0 / 21.0).epsilon(1e-14));
    CHECK(gauss15([](double x) { return std::exp(x); }, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("nan_rescue patches isolated non-finite values only") {
    // Removable singularity: exact hit of 0/0.
    auto raw = [](double x) { return std::sin(x) / x; };
    auto fixed = nan_rescue(raw);
    CHECK(std::isnan(raw(0.0)));
    CHECK(fixed(0.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fixed(0.5) == doctest::Approx(raw(0.5)));
    // A genuine pole stays non-finite in the neighborhood.
    auto pole = nan_rescue([](double x) { return 1.0 / x; }, 1e-6);
    CHECK(std::fabs(pole(1e-9)) > 1e6);
}
