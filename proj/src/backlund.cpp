#include "susy/backlund.hpp"

#include <cmath>
#include <map>
#include <memory>

#include "susy/confluent.hpp"
#include "susy/numerics.hpp"
#include "susy/riccati.hpp"

namespace susy::backlund {

namespace {

// Sample abscissas across the window, skipping exclusion zones.
std::vector<double> probe_points(Window w,
                                 const std::vector<double>& sing,
                                 std::size_t n = 33) {
    const auto windows = exclusion_windows(sing, default_delta(w) * 4.0);
    std::vector<double> pts;
    const double h = w.width() / double(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = w.lo + double(i) * h;
        if (!point_excluded(windows, x)) pts.push_back(x);
    }
    return pts;
}

std::vector<double> scan_points(Window w, std::size_t n = 6001) {
    return Grid::uniform(w, n).points;
}

// Denominator roots away from already known singular points.
std::vector<double> denominator_roots(const RealFunction::Fn& den, Window w,
                                      const std::vector<double>& known) {
    auto roots = num::sign_change_roots(den, scan_points(w));
    std::vector<double> fresh;
    for (double r : roots) {
        bool dup = false;
        for (double s : known)
            if (std::fabs(r - s) < 1e-7) dup = true;
        if (!dup) fresh.push_back(r);
    }
    return fresh;
}

// Where poles of the two previous-level solutions cancel inside the finite
// difference quotient, the result is analytic but direct evaluation loses all
// precision within ~1e-3 of the point.  Re-evaluate there by interpolating
// from symmetric nodes that sit safely outside the cancellation zone.
constexpr double kDegeneratePatchRadius = 2.5e-3;
constexpr double kDegenerateNodeStep = 7.5e-3;

double interp_across(const RealFunction::Fn& g, double s, double x) {
    static constexpr int nodes[6] = {-3, -2, -1, 1, 2, 3};
    const double t = (x - s) / kDegenerateNodeStep;
    double acc = 0.0;
    for (int i = 0; i < 6; ++i) {
        double li = 1.0;
        for (int j = 0; j < 6; ++j) {
            if (j == i) continue;
            li *= (t - nodes[j]) / double(nodes[i] - nodes[j]);
        }
        acc += li * g(s + nodes[i] * kDegenerateNodeStep);
    }
    return acc;
}

RealFunction::Fn patch_degenerate(RealFunction::Fn g,
                                  std::shared_ptr<std::vector<double>> pts) {
    if (!pts || pts->empty()) return g;
    return [g = std::move(g), pts](double x) {
        for (double s : *pts)
            if (std::fabs(x - s) < kDegeneratePatchRadius)
                return interp_across(g, s, x);
        return g(x);
    };
}

// Candidate singular points that turned out bounded: pole cancellations.
// Skip any that sit too close to a genuine pole for the interpolation
// stencil to be trustworthy.
std::shared_ptr<std::vector<double>> degenerate_points(
    const std::vector<double>& cands, const std::vector<double>& poles) {
    auto out = std::make_shared<std::vector<double>>();
    const double clearance = 4.0 * 3.0 * kDegenerateNodeStep;
    for (double s : cands) {
        bool near_pole = false;
        for (double p : poles)
            if (std::fabs(s - p) < clearance) near_pole = true;
        if (!near_pole) out->push_back(s);
    }
    return out;
}

}  // namespace

RealFunction backlund_step(const RealFunction& beta_prev_fixed,
                           const RealFunction& beta_prev_var, double eps_prev,
                           double eps) {
    if (eps == eps_prev)
        throw EqualEnergies("simple step requires eps != eps_prev");
    const RealFunction bf = beta_prev_fixed, bv = beta_prev_var;
    const Window w = bf.window();
    const double delta = 2.0 * (eps_prev - eps);

    auto all_sing =
        merge_singularities(bf.singularities(), bv.singularities());
    const auto pts = probe_points(w, all_sing);

    // Same-solution and same-previous-potential probes.
    bool all_equal = true;
    std::size_t ok = 0, tested = 0;
    for (double x : pts) {
        const double D = bf.eval(x) - bv.eval(x);
        if (std::fabs(D) > 1e-10) all_equal = false;
        const double rf = -bf.deriv(x) + bf.eval(x) * bf.eval(x);
        const double rv = -bv.deriv(x) + bv.eval(x) * bv.eval(x);
        if (!std::isfinite(rf) || !std::isfinite(rv)) continue;
        ++tested;
        if (std::fabs((rf - rv) - 2.0 * (eps - eps_prev)) <
            1e-4 * (1.0 + std::fabs(rf) + std::fabs(rv)))
            ++ok;
    }
    if (all_equal)
        throw SamePrevSolution("denominator of the finite difference step "
                               "vanishes identically");
    if (tested > 0 && ok * 2 < tested)
        throw std::invalid_argument(
            "backlund_step: inputs do not solve the same Riccati equation");

    auto raw = [bf, bv, delta](double x) {
        return -bf.eval(x) - delta / (bf.eval(x) - bv.eval(x));
    };
    auto raw_d1 = [bf, bv, delta](double x) {
        const double D = bf.eval(x) - bv.eval(x);
        const double D1 = bf.deriv(x) - bv.deriv(x);
        return -bf.deriv(x) + delta * D1 / (D * D);
    };
    auto raw_d2 = [bf, bv, delta](double x) {
        const double D = bf.eval(x) - bv.eval(x);
        const double D1 = bf.deriv(x) - bv.deriv(x);
        const double D2 = bf.deriv2(x) - bv.deriv2(x);
        return -bf.deriv2(x) + delta * (D2 * D - 2.0 * D1 * D1) / (D * D * D);
    };

    auto den = [bf, bv](double x) { return bf.eval(x) - bv.eval(x); };
    std::vector<double> cands = merge_singularities(
        all_sing, denominator_roots(den, w, all_sing));
    auto eval = num::nan_rescue(raw);
    std::vector<double> poles;
    for (double s : cands)
        if (!num::bounded_near(eval, s)) poles.push_back(s);

    auto degen = degenerate_points(cands, poles);
    return RealFunction::analytic(
        num::nan_rescue(patch_degenerate(raw, degen)),
        num::nan_rescue(patch_degenerate(raw_d1, degen)),
        num::nan_rescue(patch_degenerate(raw_d2, degen)), poles, w);
}

RealFunction omega_step(const RealFunction& omega_prev_fixed,
                        const RealFunction& omega_prev_var, double eps_prev,
                        double eps) {
    if (eps == eps_prev)
        throw EqualEnergies("omega step requires eps != eps_prev");
    const RealFunction of = omega_prev_fixed, ov = omega_prev_var;
    const Window w = of.window();
    const double delta = 2.0 * (eps_prev - eps);

    auto all_sing =
        merge_singularities(of.singularities(), ov.singularities());
    bool all_equal = true;
    for (double x : probe_points(w, all_sing))
        if (std::fabs(of.eval(x) - ov.eval(x)) > 1e-10) all_equal = false;
    if (all_equal) throw SamePrevSolution("omega denominator vanishes");

    auto raw = [of, ov, delta](double x) {
        return -delta / (of.eval(x) - ov.eval(x));
    };
    auto raw_d1 = [of, ov, delta](double x) {
        const double D = of.eval(x) - ov.eval(x);
        const double D1 = of.deriv(x) - ov.deriv(x);
        return delta * D1 / (D * D);
    };
    auto raw_d2 = [of, ov, delta](double x) {
        const double D = of.eval(x) - ov.eval(x);
        const double D1 = of.deriv(x) - ov.deriv(x);
        const double D2 = of.deriv2(x) - ov.deriv2(x);
        return delta * (D2 * D - 2.0 * D1 * D1) / (D * D * D);
    };
    auto den = [of, ov](double x) { return of.eval(x) - ov.eval(x); };
    std::vector<double> cands = merge_singularities(
        all_sing, denominator_roots(den, w, all_sing));
    auto eval = num::nan_rescue(raw);
    std::vector<double> poles;
    for (double s : cands)
        if (!num::bounded_near(eval, s)) poles.push_back(s);
    auto degen = degenerate_points(cands, poles);
    return RealFunction::analytic(
        num::nan_rescue(patch_degenerate(raw, degen)),
        num::nan_rescue(patch_degenerate(raw_d1, degen)),
        num::nan_rescue(patch_degenerate(raw_d2, degen)), poles, w);
}

// ---------------------------------------------------------------------------
// zero_mode: u = exp(-int beta) with simple poles of beta absorbed into
// monomial factors (x - s)^m, m = integer residue order.

namespace {

struct PoleFactor {
    double s;
    int m;
};

void pow_accumulate(double t, int m, double& p, double& p1, double& p2) {
    // multiply the running (p, p', p'') by the factor t^m
    double f, f1, f2;
    if (m >= 0) {
        f = std::pow(t, m);
        f1 = m >= 1 ? m * std::pow(t, m - 1) : 0.0;
        f2 = m >= 2 ? double(m) * (m - 1) * std::pow(t, m - 2) : 0.0;
    } else {
        f = std::pow(t, m);
        f1 = m * std::pow(t, m - 1);
        f2 = double(m) * (m - 1) * std::pow(t, m - 2);
    }
    const double np = p * f;
    const double np1 = p1 * f + p * f1;
    const double np2 = p2 * f + 2.0 * p1 * f1 + p * f2;
    p = np;
    p1 = np1;
    p2 = np2;
}

}  // namespace

RealFunction zero_mode(const RealFunction& beta, double x_ref) {
    const Window w = beta.window();
    RealFunction b = beta;

    auto factors = std::make_shared<std::vector<PoleFactor>>();
    for (double s : beta.singularities()) {
        if (s <= w.lo || s >= w.hi) continue;
        const double m1 = num::residue_order(b, s, 1e-5);
        const double m2 = num::residue_order(b, s, 1e-6);
        const double m = std::round(m2);
        if (std::fabs(m1 - m2) > 0.02 || std::fabs(m2 - m) > 0.02)
            throw NonintegrableSingularity(
                "beta has a non-simple or non-integer-residue pole at x = " +
                std::to_string(s));
        if (m != 0.0) factors->push_back({s, int(m)});
    }

    auto reg = [b, factors](double x) {
        double v = b.eval(x);
        for (const auto& pf : *factors) v += double(pf.m) / (x - pf.s);
        return v;
    };
    auto reg1 = [b, factors](double x) {
        double v = b.deriv(x);
        for (const auto& pf : *factors) {
            const double t = x - pf.s;
            v -= double(pf.m) / (t * t);
        }
        return v;
    };
    auto R = std::make_shared<num::Antiderivative>(reg, w.lo, w.hi, x_ref,
                                                   8192);

    auto P = [factors](double x, double& p, double& p1, double& p2) {
        p = 1.0;
        p1 = 0.0;
        p2 = 0.0;
        for (const auto& pf : *factors)
            pow_accumulate(x - pf.s, pf.m, p, p1, p2);
    };
    // Normalize u(x_ref) = 1 using only the factors that are regular and
    // nonvanishing at x_ref; a factor centered there would force K to 0
    // or infinity.
    double p0 = 1.0;
    for (const auto& pf : *factors) {
        if (std::fabs(x_ref - pf.s) < 1e-9) continue;
        p0 *= std::pow(x_ref - pf.s, pf.m);
    }
    const double K =
        (std::isfinite(p0) && std::fabs(p0) > 1e-100) ? 1.0 / p0 : 1.0;

    auto f = [P, R, K](double x) {
        double p, p1, p2;
        P(x, p, p1, p2);
        return K * p * std::exp(-(*R)(x));
    };
    auto d1 = [P, R, K, reg](double x) {
        double p, p1, p2;
        P(x, p, p1, p2);
        const double E = std::exp(-(*R)(x));
        const double term = (p == 0.0) ? 0.0 : p * reg(x);
        return K * (p1 - term) * E;
    };
    auto d2 = [P, R, K, reg, reg1](double x) {
        double p, p1, p2;
        P(x, p, p1, p2);
        const double E = std::exp(-(*R)(x));
        const double r = (p == 0.0 && p1 == 0.0) ? 0.0 : reg(x);
        const double t1 = (p1 == 0.0) ? 0.0 : 2.0 * p1 * r;
        const double t2 = (p == 0.0) ? 0.0 : p * (r * r - reg1(x));
        return K * (p2 - t1 + t2) * E;
    };

    std::vector<double> upoles;
    for (const auto& pf : *factors)
        if (pf.m < 0) upoles.push_back(pf.s);
    return RealFunction::analytic(f, d1, d2, upoles, w);
}

// ---------------------------------------------------------------------------
// Chain construction

namespace {

RealFunction sum_pair(const RealFunction& a, const RealFunction& b) {
    RealFunction ac = a, bc = b;
    return RealFunction::analytic(
        num::nan_rescue(
            [ac, bc](double x) { return ac.eval(x) + bc.eval(x); }),
        num::nan_rescue(
            [ac, bc](double x) { return ac.deriv(x) + bc.deriv(x); }),
        num::nan_rescue(
            [ac, bc](double x) { return ac.deriv2(x) + bc.deriv2(x); }),
        merge_singularities(a.singularities(), b.singularities()),
        a.window());
}

// Parity-form potential V_k = v0 + sum over j = k, k-2, ... of Omega_j'.
RealFunction make_potential(const RealFunction& v0,
                            const std::vector<RealFunction>& omegas,
                            std::size_t k) {
    RealFunction v0c = v0;
    auto om = std::make_shared<std::vector<RealFunction>>(omegas.begin(),
                                                          omegas.begin() + k);
    auto raw = [v0c, om, k](double x) {
        double v = v0c.eval(x);
        for (std::size_t j = k; j >= 1; j -= 2) {
            v += (*om)[j - 1].deriv(x);
            if (j < 2) break;
        }
        return v;
    };
    auto raw_d1 = [v0c, om, k](double x) {
        double v = v0c.deriv(x);
        for (std::size_t j = k; j >= 1; j -= 2) {
            v += (*om)[j - 1].deriv2(x);
            if (j < 2) break;
        }
        return v;
    };
    auto eval = num::nan_rescue(raw, 1e-3);
    auto d1 = num::nan_rescue(raw_d1, 1e-3);

    std::vector<double> cands = v0.singularities();
    for (std::size_t j = 0; j < k; ++j)
        cands = merge_singularities(cands, (*om)[j].singularities());
    std::vector<double> poles = v0.singularities();
    for (double s : cands)
        if (!num::bounded_near(eval, s))
            poles = merge_singularities(poles, {s});
    return RealFunction::semi_analytic(eval, d1, poles, v0.window());
}

}  // namespace

SusyChain build_chain(const RealFunction& v0,
                      const std::vector<ChainStep>& steps,
                      const Beta1Family& family, const BuildOptions& opts) {
    if (steps.empty()) throw ChainEmpty("chain needs at least one step");

    // Validate the energy pattern.
    for (std::size_t k = 1; k < steps.size(); ++k) {
        if (steps[k].kind == StepKind::Simple &&
            steps[k].epsilon == steps[k - 1].epsilon)
            throw EqualEnergies("simple step repeats the previous epsilon");
        if (steps[k].kind == StepKind::Confluent &&
            steps[k].epsilon != steps[k - 1].epsilon)
            throw ConfigError(
                "confluent step must repeat the previous epsilon");
    }

    // Level-1 integration parameters, keyed by factorization energy.
    std::map<double, std::pair<double, bool>> lambda1;
    lambda1[steps[0].epsilon] = {steps[0].param, steps[0].param_infinite};
    for (std::size_t k = 1; k < steps.size(); ++k)
        if (steps[k].kind == StepKind::Simple)
            lambda1.emplace(steps[k].epsilon,
                            std::make_pair(steps[k].param,
                                           steps[k].param_infinite));

    std::vector<std::map<double, RealFunction>> cache(steps.size());
    std::function<RealFunction(std::size_t, double)> beta_level =
        [&](std::size_t level, double eps) -> RealFunction {
        auto& memo = cache[level - 1];
        if (auto it = memo.find(eps); it != memo.end()) return it->second;
        RealFunction result;
        if (level == 1) {
            result = family(eps);
            auto it = lambda1.find(eps);
            if (it != lambda1.end() && !it->second.second)
                result = riccati::general_solution(result, eps,
                                                   it->second.first);
        } else {
            const double eps_prev = steps[level - 2].epsilon;
            if (eps == eps_prev) {
                // eps-degenerate request: the confluent step at this level.
                result = confluent::confluent_step_integral(
                    beta_level(level - 1, eps_prev), steps[level - 1].param);
            } else {
                result = backlund_step(beta_level(level - 1, eps_prev),
                                       beta_level(level - 1, eps), eps_prev,
                                       eps);
            }
        }
        memo.emplace(eps, result);
        return result;
    };

    SusyChain chain;
    chain.v0 = v0;
    std::vector<RealFunction> betas, omegas;
    const double delta = 2.0 * default_delta(v0.window());
    RealFunction v_prev = v0;
    for (std::size_t k = 1; k <= steps.size(); ++k) {
        RealFunction beta = beta_level(k, steps[k - 1].epsilon);
        RealFunction omega =
            (k == 1) ? beta : sum_pair(beta, betas[k - 2]);
        betas.push_back(beta);
        omegas.push_back(omega);
        RealFunction vk = make_potential(v0, omegas, k);
        if (opts.verify) {
            RealFunction res =
                riccati::riccati_residual(beta, v_prev, steps[k - 1].epsilon);
            const double sup = riccati::sup_norm(res, opts.grid, delta);
            chain.build_checks.add("riccati_step_" + std::to_string(k), sup,
                                   opts.tol_riccati);
        }
        chain.steps.push_back({beta, omega, vk, steps[k - 1]});
        v_prev = vk;
    }
    return chain;
}

RealFunction assemble_potential(const RealFunction& v0, const SusyChain& chain,
                                const Grid& grid, double tol) {
    if (chain.steps.empty()) throw ChainEmpty("empty chain");
    const std::size_t n = chain.steps.size();

    // Route (i): telescoped sum of beta_k'.
    auto betas = std::make_shared<std::vector<RealFunction>>();
    std::vector<double> sing = v0.singularities();
    for (const auto& st : chain.steps) {
        betas->push_back(st.beta);
        sing = merge_singularities(sing, st.beta.singularities());
    }
    RealFunction v0c = v0;
    auto telescoped = num::nan_rescue(
        [v0c, betas](double x) {
            double v = v0c.eval(x);
            for (const auto& b : *betas) v += b.deriv(x);
            return v;
        },
        1e-3);

    // Route (ii): the parity form, as stored on the chain.
    const RealFunction& parity = chain.steps[n - 1].potential;

    const double delta = 2.0 * default_delta(v0.window());
    const auto windows = exclusion_windows(sing, delta);
    double sup = 0.0;
    for (double x : grid.points) {
        if (point_excluded(windows, x)) continue;
        const double d = std::fabs(telescoped(x) - parity.eval(x));
        if (std::isfinite(d)) sup = std::max(sup, d);
        else sup = std::numeric_limits<double>::infinity();
    }
    if (!(sup <= tol))
        throw ParityMismatch("telescoped and parity assemblies differ by " +
                             std::to_string(sup));
    return parity;
}

}  // namespace susy::backlund
