#ifndef SUSY_CATALOG_HPP
#define SUSY_CATALOG_HPP

#include <vector>

#include "susy/core.hpp"

namespace susy::catalog {

// The four real free-particle superpotential branches.
//   S (singular):  -kappa coth[kappa(x-a)],  eps < 0
//   R (regular):   -kappa tanh[kappa(x+b)],  eps < 0
//   P (periodic):  -k cot[k(x-a)],           eps > 0
//   N (null):      -1/(x-a),                 eps = 0
struct BranchSpec {
    Branch branch;
    double epsilon;
    double shift;  // a or b
};

void validate(const BranchSpec& spec);  // throws BranchEnergyMismatch

RealFunction free_particle_beta(const BranchSpec& spec, Window w = {});

// Zero mode u = exp(-int beta) of the branch (sinh, cosh, sin, x-a).
RealFunction free_particle_mode(const BranchSpec& spec, Window w = {});

// Reference potentials.
RealFunction zero_potential(Window w = {});
RealFunction oscillator_potential(Window w = {});  // x^2/2

// Particular Riccati solution beta = -x for V0 = x^2/2 at eps = -1/2.
RealFunction oscillator_particular_beta(Window w = {});

// Transparent double well, 2-susy partner of V0 = 0 (S then R step).
RealFunction bargmann_double_well(double kappa1, double kappa2, double a,
                                  double b, Window w = {});

// Second order Abraham-Moses family: two confluent steps at eps = -1/2
// on the oscillator.  Bracket derivatives are analytic; only the bracket
// itself is obtained by quadrature.
RealFunction abraham_moses2(double gamma1, double gamma2, Window w = {});

// Confluent partners of the periodic branch: order 1 is k^2/sin^2[k(x-a)],
// order 2 the single-singularity closed form.
RealFunction periodic_confluent(int order, double eps, double a,
                                Window w = {});

// Integration constant for which the confluent step on the P branch
// (quadrature from x_ref = 0) reproduces the order-2 closed form.
double p_branch_gamma2(double eps, double a);

// Derivative-route confluent tower on the P branch: beta_1 .. beta_n built
// by iterating beta_k = -beta_{k-1} - 2 (d beta_{k-1} / d eps)^{-1}.
// Every level's eps-derivative is closed-form; the derivative at level k
// is taken within the fixed-potential solution family at that level.
std::vector<RealFunction> p_branch_confluent_betas(double eps, double a,
                                                   int n, Window w = {});

// Potential V_n^conf assembled from the tower (parity form).
RealFunction p_branch_confluent_potential(double eps, double a, int n,
                                          Window w = {});

}  // namespace susy::catalog

#endif
