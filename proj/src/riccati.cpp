#include "susy/riccati.hpp"

#include <array>
#include <cmath>
#include <memory>

#include <boost/numeric/odeint.hpp>

#include "susy/confluent.hpp"
#include "susy/numerics.hpp"

namespace susy::riccati {

namespace {

using State = std::array<double, 2>;

// Grid samples of (u, u') with per-node log rescaling, plus quintic
// Hermite dense output (u'' at the nodes is taken from the ODE).
struct SampledSolution {
    std::vector<double> x, u, up, upp, ls;

    std::size_t cell(double xx) const {
        if (xx <= x.front()) return 0;
        if (xx >= x.back()) return x.size() - 2;
        auto it = std::upper_bound(x.begin(), x.end(), xx);
        return std::size_t(it - x.begin()) - 1;
    }

    // value and derivative relative to the scale of the left node of the
    // cell, shifted to the global reference scale ls_ref.
    void eval(double xx, double ls_ref, double& v, double& dv) const {
        const std::size_t i = cell(xx);
        const double h = x[i + 1] - x[i];
        const double rs = std::exp(ls[i + 1] - ls[i]);
        const double ua = u[i], upa = up[i] * h, uppa = upp[i] * h * h;
        const double ub = u[i + 1] * rs, upb = up[i + 1] * rs * h,
                     uppb = upp[i + 1] * rs * h * h;
        const double a0 = ua, a1 = upa, a2 = 0.5 * uppa;
        const double A = ub - a0 - a1 - a2;
        const double B = upb - a1 - 2.0 * a2;
        const double C = uppb - 2.0 * a2;
        const double a3 = 10.0 * A - 4.0 * B + 0.5 * C;
        const double a4 = -15.0 * A + 7.0 * B - C;
        const double a5 = 6.0 * A - 3.0 * B + 0.5 * C;
        const double s = (xx - x[i]) / h;
        const double p =
            a0 + s * (a1 + s * (a2 + s * (a3 + s * (a4 + s * a5))));
        const double dp =
            a1 + s * (2 * a2 + s * (3 * a3 + s * (4 * a4 + s * 5 * a5)));
        const double scale = std::exp(ls[i] - ls_ref);
        v = p * scale;
        dv = dp / h * scale;
    }
};

}  // namespace

SchrodingerSolution solve_schrodinger(const RealFunction& V, double eps,
                                      const Grid& grid, double u0,
                                      double up0) {
    if (u0 == 0.0 && up0 == 0.0)
        throw TrivialInitialCondition("(u0, u0') = (0, 0)");

    namespace ode = boost::numeric::odeint;
    auto rhs = [&V, eps](const State& s, State& ds, double x) {
        ds[0] = s[1];
        ds[1] = 2.0 * (V.eval(x) - eps) * s[0];
    };
    auto stepper = ode::make_controlled(1e-14, 1e-12,
                                        ode::runge_kutta_fehlberg78<State>());

    auto sampled = std::make_shared<SampledSolution>();
    State s{u0, up0};
    double logscale = 0.0;
    const auto& xs = grid.points;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) {
            const double h0 = (xs[i] - xs[i - 1]) / 16.0;
            try {
                ode::integrate_adaptive(stepper, rhs, s, xs[i - 1], xs[i], h0);
            } catch (const std::exception& e) {
                throw IntegrationDivergence(e.what());
            }
        }
        if (!std::isfinite(s[0]) || !std::isfinite(s[1]))
            throw IntegrationDivergence("non-finite state at x = " +
                                        std::to_string(xs[i]));
        const double nrm = std::max(std::fabs(s[0]), std::fabs(s[1]));
        if (nrm > 0.0) {
            s[0] /= nrm;
            s[1] /= nrm;
            logscale += std::log(nrm);
        }
        sampled->x.push_back(xs[i]);
        sampled->u.push_back(s[0]);
        sampled->up.push_back(s[1]);
        sampled->upp.push_back(2.0 * (V.eval(xs[i]) - eps) * s[0]);
        sampled->ls.push_back(logscale);
    }
    const double ls_ref =
        *std::max_element(sampled->ls.begin(), sampled->ls.end());

    RealFunction Vc = V;
    auto f = [sampled, ls_ref](double x) {
        double v, dv;
        sampled->eval(x, ls_ref, v, dv);
        return v;
    };
    auto d1 = [sampled, ls_ref](double x) {
        double v, dv;
        sampled->eval(x, ls_ref, v, dv);
        return dv;
    };
    auto d2 = [sampled, ls_ref, Vc, eps](double x) {
        double v, dv;
        sampled->eval(x, ls_ref, v, dv);
        return 2.0 * (Vc.eval(x) - eps) * v;
    };

    SchrodingerSolution sol;
    sol.epsilon = eps;
    sol.u = RealFunction::analytic(f, d1, d2, {},
                                   Window{grid.lo(), grid.hi()});
    sol.nodes = num::sign_change_roots(f, grid.points);
    return sol;
}

RealFunction beta_from_u(const SchrodingerSolution& sol) {
    RealFunction u = sol.u;
    auto f = [u](double x) { return -u.deriv(x) / u.eval(x); };
    auto d1 = [u](double x) {
        const double uv = u.eval(x), up = u.deriv(x);
        return -(u.deriv2(x) * uv - up * up) / (uv * uv);
    };
    return RealFunction::semi_analytic(f, d1, sol.nodes, u.window());
}

RealFunction general_solution(const RealFunction& beta_p, double /*eps*/,
                              double lambda) {
    if (std::isinf(lambda)) return beta_p;
    // (fd16) is the confluent integral step applied to -beta_p:
    //   beta = beta_p - d/dx ln[lambda - int exp{+2 int beta_p}].
    RealFunction neg = RealFunction::analytic(
        [beta_p](double x) { return -beta_p.eval(x); },
        [beta_p](double x) { return -beta_p.deriv(x); },
        [beta_p](double x) { return -beta_p.deriv2(x); },
        beta_p.singularities(), beta_p.window());
    return confluent::confluent_step_integral(neg, lambda);
}

RealFunction riccati_residual(const RealFunction& beta, const RealFunction& V,
                              double eps) {
    RealFunction b = beta, Vc = V;
    auto f = [b, Vc, eps](double x) {
        const double bv = b.eval(x);
        return -b.deriv(x) + bv * bv - 2.0 * (Vc.eval(x) - eps);
    };
    return RealFunction::numeric(
        f, merge_singularities(beta.singularities(), V.singularities()),
        beta.window());
}

double sup_norm(const RealFunction& f, const Grid& grid, double delta) {
    const auto windows = exclusion_windows(f, delta);
    double sup = 0.0;
    for (double x : grid.points) {
        if (point_excluded(windows, x)) continue;
        sup = std::max(sup, std::fabs(f.eval(x)));
    }
    return sup;
}

}  // namespace susy::riccati
