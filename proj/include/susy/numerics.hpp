#ifndef SUSY_NUMERICS_HPP
#define SUSY_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace susy::num {

using Fn = std::function<double(double)>;

// ---------------------------------------------------------------------------
// Finite differences (8th-order central stencils)

double fd8_deriv(const Fn& f, double x, double h = 5e-3);
double fd8_deriv2(const Fn& f, double x, double h = 5e-3);

// ---------------------------------------------------------------------------
// Root bracketing / refinement

double bisect(const Fn& f, double lo, double hi, double xtol = 1e-12);

// Sign changes of f between consecutive abscissas, refined by bisection.
// Non-finite samples are skipped.
std::vector<double> sign_change_roots(const Fn& f,
                                      const std::vector<double>& xs,
                                      double xtol = 1e-12);

// ---------------------------------------------------------------------------
// Local behavior probes near a candidate singularity s.
// Samples |g| at offsets {d, 2d, 4d, 8d} on both sides and estimates the
// growth exponent p in |g| ~ |x-s|^[-p].

double growth_exponent(const Fn& g, double s, double d = 1e-4);
bool bounded_near(const Fn& g, double s, double d = 1e-4);

// Pole order of beta in the sense beta ~ m/(s-x) (zero mode u ~ (x-s)^m);
// returns the real-valued estimate of m = lim (x-s) * (-beta(x)).
double residue_order(const Fn& beta, double s, double d = 1e-5);

// ---------------------------------------------------------------------------
// Cumulative quadrature.  Antiderivative F(x) = int_{x_ref}^x f, built once
// on a uniform panel decomposition (15-point Gauss-Legendre per panel) and
// evaluated with a partial panel for off-node x.  f must be smooth on [lo,hi].

class Antiderivative {
public:
    Antiderivative() = default;
    Antiderivative(Fn f, double lo, double hi, double x_ref,
                   std::size_t panels = 4096);

    double operator()(double x) const;
    double integrand(double x) const { return f_(x); }

private:
    Fn f_;
    double lo_ = 0.0, hi_ = 0.0, h_ = 0.0, x_ref_ = 0.0, f_ref_ = 0.0;
    std::vector<double> node_values_;  // F0 at panel boundaries, F(x_ref)=0
};

double gauss15(const Fn& f, double a, double b);

// Wraps f so isolated non-finite evaluations (exact hits of removable
// 0/0 points) are replaced by a quadratic extrapolation from clean
// neighbors.  Genuine poles still come out non-finite.
Fn nan_rescue(Fn f, double h = 1e-6);

}  // namespace susy::num

#endif
