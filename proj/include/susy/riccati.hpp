#ifndef SUSY_RICCATI_HPP
#define SUSY_RICCATI_HPP

#include <vector>

#include "susy/core.hpp"

namespace susy::riccati {

// Solution u of u'' = 2(V - eps) u on the grid, with logarithmic
// renormalization so exponentially growing modes stay in range.
struct SchrodingerSolution {
    RealFunction u;
    double epsilon = 0.0;
    std::vector<double> nodes;  // zeros of u, refined to 1e-12
};

// Integrates the Schrodinger ODE from grid.lo() with initial data
// (u0, u0').  beta = -u'/u is invariant under the internal rescaling.
SchrodingerSolution solve_schrodinger(const RealFunction& V, double eps,
                                      const Grid& grid, double u0, double up0);

// beta = -u'/u; singularity list = nodes of u.
RealFunction beta_from_u(const SchrodingerSolution& sol);

// One-parameter enlargement of a particular Riccati solution:
//   beta = beta_p - d/dx ln[ lambda - int_0^x exp{2 int_0^y beta_p} dy ].
// lambda = +inf returns beta_p unchanged.
RealFunction general_solution(const RealFunction& beta_p, double eps,
                              double lambda);

// x -> -beta'(x) + beta(x)^2 - 2(V(x) - eps)
RealFunction riccati_residual(const RealFunction& beta, const RealFunction& V,
                              double eps);

// Sup of |f| over grid points outside the exclusion windows of f.
double sup_norm(const RealFunction& f, const Grid& grid, double delta);

}  // namespace susy::riccati

#endif
