#ifndef SUSY_CONFLUENT_HPP
#define SUSY_CONFLUENT_HPP

#include "susy/core.hpp"

namespace susy::confluent {

struct KeyFunction {
    RealFunction B;
    int level = 1;
    double constant = 1.0;  // recorded, inessential for beta
};

// Integral form of the eps-degenerate step:
//   beta_k = -beta_prev - d/dx ln[ gamma - int_0^x exp(-2 int_0^y beta_prev) ]
// gamma = +inf returns the particular solution -beta_prev.
RealFunction confluent_step_integral(const RealFunction& beta_prev,
                                     double gamma);

// Derivative form: beta = -beta_at_eps - 2 (d beta / d eps)^{-1}.
RealFunction confluent_step_derivative(const RealFunction& beta_at_eps,
                                       const RealFunction& dbeta_deps);

// Key-function recurrence d/dx(B_n B_{n-1}) = -B_{n-1}^2, with the new
// constant fixed so B_n(0) = 1 on the reference smooth interval.
KeyFunction key_function_recurrence(const KeyFunction& B_prev);

// Nonsingularity domain of the 2nd-order Abraham-Moses family:
// (Gamma1 = sqrt(pi)/2 and Gamma2 >= (sqrt(pi)/4) ln 2) or the mirrored
// branch.  Gamma1 equality tested to 1e-12.
bool nonsingularity_domain_am2(double gamma1, double gamma2);

}  // namespace susy::confluent

#endif
