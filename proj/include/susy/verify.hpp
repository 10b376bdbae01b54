#ifndef SUSY_VERIFY_HPP
#define SUSY_VERIFY_HPP

#include <vector>

#include "susy/core.hpp"

namespace susy::verify {

// Smooth rapidly decaying test function with analytic derivatives to
// third order: exp(-(x-c)^2 / (2 w^2)).
struct Gaussian {
    double c = 0.0;
    double w = 1.0;
    double f(double x) const;
    double f1(double x) const;
    double f2(double x) const;
    double f3(double x) const;
};

// Dense-domain surrogate.
struct TestFunctionSet {
    std::vector<Gaussian> members;
    static TestFunctionSet standard();  // 5 Gaussians
};

struct Intertwiner {
    RealFunction beta;
    int level = 1;
    double epsilon = 0.0;
};

// sup over grid of |(H_k A_k - A_k H_{k-1}) f| / (1 + |f|_inf), excluding
// singularity windows of both potentials.
double intertwining_residual(const RealFunction& Vk, const RealFunction& Vk_1,
                             const RealFunction& beta_k, double eps_k,
                             const Gaussian& f, const Grid& grid,
                             double delta);

// sup |(H_k - 1/2 A_k A_k^dag - eps_k) f|.
double factorization_residual(const RealFunction& Vk,
                              const RealFunction& beta_k, double eps_k,
                              const Gaussian& f, const Grid& grid,
                              double delta);

// Companion half: sup |(H_{k-1} - 1/2 A_k^dag A_k - eps_k) f|.
double factorization_residual_companion(const RealFunction& Vk_1,
                                        const RealFunction& beta_k,
                                        double eps_k, const Gaussian& f,
                                        const Grid& grid, double delta);

// psi_k = psi' + beta_k psi.  Raises AnnihilatedInput when the image
// vanishes identically within tolerance.
RealFunction map_eigenfunction(const RealFunction& beta_k,
                               const RealFunction& psi_prev, const Grid& grid,
                               double delta);

// Wronskian-determinant referee.  Seeds solve H0 u_j = eps_j u_j; their
// higher derivatives come from differentiating the ODE, never from
// numerical differentiation beyond what v0 itself provides.
struct Seed {
    RealFunction u;
    double epsilon = 0.0;
};

RealFunction crum_oracle(const RealFunction& v0, const std::vector<Seed>& seeds,
                         const Grid& grid);

}  // namespace susy::verify

#endif
