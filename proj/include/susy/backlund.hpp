#ifndef SUSY_BACKLUND_HPP
#define SUSY_BACKLUND_HPP

#include <functional>
#include <vector>

#include "susy/core.hpp"

namespace susy::backlund {

// Finite difference step:
//   beta_k = -beta_{k-1}(eps_prev) - 2(eps_prev - eps) /
//            [beta_{k-1}(eps_prev) - beta_{k-1}(eps)]
// Both inputs must solve the Riccati equation of the same previous
// potential (asserted by a closure probe).  Denominator zeros are
// discovered and recorded as candidate singularities.
RealFunction backlund_step(const RealFunction& beta_prev_fixed,
                           const RealFunction& beta_prev_var, double eps_prev,
                           double eps);

// Omega recursion: Omega_k = -2(eps_prev - eps) / (Omega_{k-1}(eps_prev) -
// Omega_{k-1}(eps)); Omega_1 = beta_1.
RealFunction omega_step(const RealFunction& omega_prev_fixed,
                        const RealFunction& omega_prev_var, double eps_prev,
                        double eps);

// Zero mode u = exp(-int_{x_ref}^x beta).  Simple integer-residue poles of
// beta are absorbed into explicit monomial factors so u extends smoothly
// across them; anything worse raises NonintegrableSingularity.
RealFunction zero_mode(const RealFunction& beta, double x_ref = 0.0);

struct BuiltStep {
    RealFunction beta;
    RealFunction omega;
    RealFunction potential;  // V_k
    ChainStep spec;
};

struct SusyChain {
    RealFunction v0;
    std::vector<BuiltStep> steps;
    VerificationReport build_checks;

    const RealFunction& current_potential() const {
        return steps.back().potential;
    }
};

struct BuildOptions {
    Grid grid = Grid::uniform(-15.0, 15.0, 3001);
    double tol_riccati = 1e-6;
    bool verify = true;  // residual-check every step at build time
};

// Particular first-step Riccati solutions, indexed by factorization energy.
using Beta1Family = std::function<RealFunction(double eps)>;

SusyChain build_chain(const RealFunction& v0,
                      const std::vector<ChainStep>& steps,
                      const Beta1Family& family,
                      const BuildOptions& opts = {});

// Assembles V_n along both routes -- telescoped sum of beta_k' and the
// parity-filtered sum of Omega_k' -- asserts their agreement, and returns
// the parity-form potential.
RealFunction assemble_potential(const RealFunction& v0, const SusyChain& chain,
                                const Grid& grid, double tol = 1e-8);

}  // namespace susy::backlund

#endif
