#include "susy/catalog.hpp"

#include <cmath>
#include <memory>

#include "susy/numerics.hpp"

namespace susy::catalog {

namespace {

constexpr double kPi = 3.14159265358979323846;

// z*coth(z) and z^2*csch^2(z), finite at z = 0.
double xcothx(double z) {
    if (std::fabs(z) < 1e-4) {
        const double z2 = z * z;
        return 1.0 + z2 / 3.0 - z2 * z2 / 45.0;
    }
    return z / std::tanh(z);
}
double x2csch2(double z) {
    if (std::fabs(z) < 1e-4) {
        const double z2 = z * z;
        return 1.0 - z2 / 3.0 + z2 * z2 / 15.0;
    }
    const double s = std::sinh(z);
    return z * z / (s * s);
}

std::vector<double> p_branch_poles(double k, double a, Window w) {
    std::vector<double> poles;
    const long n_lo = (long)std::ceil((w.lo - a) * k / kPi);
    const long n_hi = (long)std::floor((w.hi - a) * k / kPi);
    for (long n = n_lo; n <= n_hi; ++n) poles.push_back(a + double(n) * kPi / k);
    return poles;
}

// Cancellation-safe Gamma1 - (sqrt(pi)/2) erf(y).
double am_g(double gamma1, double y) {
    const double sp2 = 0.5 * std::sqrt(kPi);
    if (y >= 0.0) return (gamma1 - sp2) + sp2 * std::erfc(y);
    return (gamma1 + sp2) - sp2 * std::erfc(-y);
}

}  // namespace

void validate(const BranchSpec& spec) {
    switch (spec.branch) {
        case Branch::S:
        case Branch::R:
            if (!(spec.epsilon < 0.0))
                throw BranchEnergyMismatch("S/R branches require eps < 0");
            break;
        case Branch::P:
            if (!(spec.epsilon > 0.0))
                throw BranchEnergyMismatch("P branch requires eps > 0");
            break;
        case Branch::N:
            if (spec.epsilon != 0.0)
                throw BranchEnergyMismatch("N branch requires eps = 0");
            break;
    }
}

RealFunction free_particle_beta(const BranchSpec& spec, Window w) {
    validate(spec);
    const double sh = spec.shift;
    switch (spec.branch) {
        case Branch::S: {
            const double kp = std::sqrt(-2.0 * spec.epsilon);
            return RealFunction::analytic(
                [kp, sh](double x) { return -kp / std::tanh(kp * (x - sh)); },
                [kp, sh](double x) {
                    const double s = std::sinh(kp * (x - sh));
                    return kp * kp / (s * s);
                },
                [kp, sh](double x) {
                    const double s = std::sinh(kp * (x - sh));
                    return -2.0 * kp * kp * kp * std::cosh(kp * (x - sh)) /
                           (s * s * s);
                },
                {sh}, w);
        }
        case Branch::R: {
            const double kp = std::sqrt(-2.0 * spec.epsilon);
            return RealFunction::analytic(
                [kp, sh](double x) { return -kp * std::tanh(kp * (x + sh)); },
                [kp, sh](double x) {
                    const double c = std::cosh(kp * (x + sh));
                    return -kp * kp / (c * c);
                },
                [kp, sh](double x) {
                    const double c = std::cosh(kp * (x + sh));
                    return 2.0 * kp * kp * kp * std::tanh(kp * (x + sh)) /
                           (c * c);
                },
                {}, w);
        }
        case Branch::P: {
            const double k = std::sqrt(2.0 * spec.epsilon);
            return RealFunction::analytic(
                [k, sh](double x) { return -k / std::tan(k * (x - sh)); },
                [k, sh](double x) {
                    const double s = std::sin(k * (x - sh));
                    return k * k / (s * s);
                },
                [k, sh](double x) {
                    const double s = std::sin(k * (x - sh));
                    return -2.0 * k * k * k * std::cos(k * (x - sh)) /
                           (s * s * s);
                },
                p_branch_poles(k, sh, w), w);
        }
        case Branch::N:
            return RealFunction::analytic(
                [sh](double x) { return -1.0 / (x - sh); },
                [sh](double x) {
                    const double d = x - sh;
                    return 1.0 / (d * d);
                },
                [sh](double x) {
                    const double d = x - sh;
                    return -2.0 / (d * d * d);
                },
                {sh}, w);
    }
    throw std::logic_error("unreachable");
}

RealFunction free_particle_mode(const BranchSpec& spec, Window w) {
    validate(spec);
    const double sh = spec.shift;
    switch (spec.branch) {
        case Branch::S: {
            const double kp = std::sqrt(-2.0 * spec.epsilon);
            return RealFunction::analytic(
                [kp, sh](double x) { return std::sinh(kp * (x - sh)); },
                [kp, sh](double x) { return kp * std::cosh(kp * (x - sh)); },
                [kp, sh](double x) {
                    return kp * kp * std::sinh(kp * (x - sh));
                },
                {}, w);
        }
        case Branch::R: {
            const double kp = std::sqrt(-2.0 * spec.epsilon);
            return RealFunction::analytic(
                [kp, sh](double x) { return std::cosh(kp * (x + sh)); },
                [kp, sh](double x) { return kp * std::sinh(kp * (x + sh)); },
                [kp, sh](double x) {
                    return kp * kp * std::cosh(kp * (x + sh));
                },
                {}, w);
        }
        case Branch::P: {
            const double k = std::sqrt(2.0 * spec.epsilon);
            return RealFunction::analytic(
                [k, sh](double x) { return std::sin(k * (x - sh)); },
                [k, sh](double x) { return k * std::cos(k * (x - sh)); },
                [k, sh](double x) { return -k * k * std::sin(k * (x - sh)); },
                {}, w);
        }
        case Branch::N:
            return RealFunction::analytic(
                [sh](double x) { return x - sh; }, [](double) { return 1.0; },
                [](double) { return 0.0; }, {}, w);
    }
    throw std::logic_error("unreachable");
}

RealFunction zero_potential(Window w) {
    return RealFunction::analytic([](double) { return 0.0; },
                                  [](double) { return 0.0; },
                                  [](double) { return 0.0; }, {}, w);
}

RealFunction oscillator_potential(Window w) {
    return RealFunction::analytic([](double x) { return 0.5 * x * x; },
                                  [](double x) { return x; },
                                  [](double) { return 1.0; }, {}, w);
}

RealFunction oscillator_particular_beta(Window w) {
    return RealFunction::analytic([](double x) { return -x; },
                                  [](double) { return -1.0; },
                                  [](double) { return 0.0; }, {}, w);
}

RealFunction bargmann_double_well(double kappa1, double kappa2, double a,
                                  double b, Window w) {
    const double k1 = kappa1, k2 = kappa2;
    // Numerator and denominator multiplied by t^2, t = x + b, so the
    // x = -b point of the kappa1 > kappa2 configuration evaluates cleanly.
    auto eval = [k1, k2, a, b](double x) {
        const double t = x + b;
        const double th = std::tanh(k2 * (x - a));
        const double num = x2csch2(k1 * t) + t * t * k2 * k2 *
                                                 (1.0 - th * th);
        const double den = -xcothx(k1 * t) + t * k2 * th;
        return -(k1 * k1 - k2 * k2) * num / (den * den);
    };
    RealFunction V = RealFunction::numeric(eval, {}, w);
    // Denominator roots that survive a boundedness probe are real poles.
    Grid scan = Grid::uniform(w, 6001);
    auto den = [k1, k2, a, b](double x) {
        return -k1 / std::tanh(k1 * (x + b)) + k2 * std::tanh(k2 * (x - a));
    };
    std::vector<double> cands = num::sign_change_roots(den, scan.points);
    std::vector<double> poles;
    for (double s : cands)
        if (!num::bounded_near(eval, s)) poles.push_back(s);
    if (!num::bounded_near(eval, -b)) poles.push_back(-b);
    return RealFunction::numeric(eval, poles, w);
}

RealFunction abraham_moses2(double gamma1, double gamma2, Window w) {
    const double g1 = gamma1;
    auto integrand = [g1](double y) {
        const double g = am_g(g1, y);
        return std::exp(y * y) * g * g;
    };
    auto accum = std::make_shared<num::Antiderivative>(integrand, w.lo, w.hi,
                                                       0.0, 8192);
    auto bracket = [accum, gamma2](double x) { return gamma2 - (*accum)(x); };
    auto b1 = [g1](double x) {
        const double g = am_g(g1, x);
        return -std::exp(x * x) * g * g;
    };
    auto b2 = [g1](double x) {
        const double g = am_g(g1, x);
        return -2.0 * x * std::exp(x * x) * g * g + 2.0 * g;
    };
    auto b3 = [g1](double x) {
        const double g = am_g(g1, x);
        return -(2.0 + 4.0 * x * x) * std::exp(x * x) * g * g + 4.0 * x * g -
               2.0 * std::exp(-x * x);
    };
    auto eval = [bracket, b1, b2](double x) {
        const double B = bracket(x), B1 = b1(x), B2 = b2(x);
        return 0.5 * x * x - (B2 * B - B1 * B1) / (B * B);
    };
    auto d1 = [bracket, b1, b2, b3](double x) {
        const double B = bracket(x), B1 = b1(x), B2 = b2(x), B3 = b3(x);
        const double r = (B3 * B - B2 * B1) / (B * B) -
                         2.0 * B1 * (B2 * B - B1 * B1) / (B * B * B);
        return x - r;
    };
    Grid scan = Grid::uniform(w, 6001);
    std::vector<double> poles = num::sign_change_roots(bracket, scan.points);
    return RealFunction::semi_analytic(eval, d1, poles, w);
}

RealFunction periodic_confluent(int order, double eps, double a, Window w) {
    if (!(eps > 0.0)) throw BranchEnergyMismatch("P branch requires eps > 0");
    const double k = std::sqrt(2.0 * eps);
    if (order == 1) {
        return RealFunction::analytic(
            [k, a](double x) {
                const double s = std::sin(k * (x - a));
                return k * k / (s * s);
            },
            [k, a](double x) {
                const double s = std::sin(k * (x - a));
                return -2.0 * k * k * k * std::cos(k * (x - a)) / (s * s * s);
            },
            [k, a](double x) {
                const double s = std::sin(k * (x - a));
                const double c = std::cos(k * (x - a));
                const double k4 = k * k * k * k;
                return 2.0 * k4 * (s * s + 3.0 * c * c) / (s * s * s * s);
            },
            p_branch_poles(k, a, w), w);
    }
    if (order != 2)
        throw std::invalid_argument("periodic_confluent: order must be 1 or 2");
    auto eval = [k, a](double x) {
        const double u = 2.0 * k * (x - a);
        const double num = 1.0 - std::cos(u) - 0.5 * u * std::sin(u);
        const double den = std::sin(u) - u;
        return 8.0 * k * k * num / (den * den);
    };
    auto d1 = [k, a](double x) {
        const double u = 2.0 * k * (x - a);
        const double N = 1.0 - std::cos(u) - 0.5 * u * std::sin(u);
        const double D = std::sin(u) - u;
        const double Nu = 0.5 * (std::sin(u) - u * std::cos(u));
        const double Du = std::cos(u) - 1.0;
        return 16.0 * k * k * k * (Nu * D - 2.0 * N * Du) / (D * D * D);
    };
    return RealFunction::semi_analytic(eval, d1, {a}, w);
}

double p_branch_gamma2(double eps, double a) {
    // int_0^a sin^2[k(y-a)] dy
    const double k = std::sqrt(2.0 * eps);
    return 0.5 * a - std::sin(2.0 * k * a) / (4.0 * k);
}

// ---------------------------------------------------------------------------
// Derivative-route confluent tower on the P branch.

namespace {

// Value with first two x-derivatives.
struct D2 {
    double v, d, dd;
    D2 operator-() const { return {-v, -d, -dd}; }
    D2 operator+(const D2& o) const { return {v + o.v, d + o.d, dd + o.dd}; }
    D2 operator-(const D2& o) const { return {v - o.v, d - o.d, dd - o.dd}; }
    D2 operator*(double c) const { return {c * v, c * d, c * dd}; }
};
D2 operator*(const D2& a, const D2& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d,
            a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}
D2 reciprocal(const D2& a) {
    const double iv = 1.0 / a.v;
    return {iv, -a.d * iv * iv,
            (2.0 * a.d * a.d / a.v - a.dd) * iv * iv};
}

// Extended-precision twin of D2.  The trig forms of the eps-derivatives
// below cancel several leading digits just outside their Taylor handover;
// evaluating them in long double keeps the rounding error of the final
// double result near machine precision.
struct LD2 {
    long double v, d, dd;
    LD2 operator-() const { return {-v, -d, -dd}; }
    LD2 operator+(const LD2& o) const { return {v + o.v, d + o.d, dd + o.dd}; }
    LD2 operator*(long double c) const { return {c * v, c * d, c * dd}; }
};
LD2 operator*(const LD2& a, const LD2& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d,
            a.dd * b.v + 2.0L * a.d * b.d + a.v * b.dd};
}

// Tower of eps-degenerate steps beta_n = -beta_{n-1} - 2 (d beta_{n-1} /
// d eps)^{-1} seeded by beta_1 = -k cot[k(x-a)], k = sqrt(2 eps).  Every
// eps-derivative is closed-form: with c = cot[k(x-a)], X = x-a,
//   G1 = d beta1/d eps = -c/k + X(1+c^2)
//   G2 = d2 beta1/d eps2 = c/k^3 + X(1+c^2)/k^2 - 2 X^2 c (1+c^2)/k
//   G3 = d3 beta1/d eps3 = -3c/k^5 - 3X(1+c^2)/k^4
//                          + 2 X^3 (1+c^2)(1+3c^2)/k^2
// The derivative entering each step is taken within the fixed-potential
// family at that level (the previous-level solution frozen at the chain
// energy), obtained by Taylor-expanding the finite-difference step:
//   F2(de) = -beta1 - 2 / (G1 + G2 de/2 + G3 de^2/6)
//   F3(de) = -beta2 - (G1 + G2 de/2 + G3 de^2/6) G1 / (G2/2 + G3 de/6)
// which gives
//   H1 = G1
//   H2 = dF2 = G2 / G1^2
//   H3 = dF3 = -G1 + (2/3) G1^2 G3 / G2^2.
struct PTower {
    double k, a;

    struct Frame {
        D2 beta1, G1, G2, G3;
    };

    // Odd polynomial sum_m c[m] X^(2m+1) with first two x-derivatives.
    static D2 odd_poly(double X, const double* c, int n) {
        D2 r{0.0, 0.0, 0.0};
        for (int m = n - 1; m >= 0; --m) {
            const int p = 2 * m + 1;
            const double xp = std::pow(X, p - 2);
            r.v += c[m] * xp * X * X;
            r.d += c[m] * double(p) * xp * X;
            r.dd += c[m] * double(p * (p - 1)) * xp;
        }
        return r;
    }

    Frame frame(double x, double eps) const {
        const double kk = std::sqrt(2.0 * eps);
        const double Xv = x - a;
        if (std::fabs(kk * Xv) < 0.1) {
            // The trig forms of G2, G3 cancel catastrophically near the
            // branch node; switch to their Taylor series (odd powers,
            // truncation below 1e-13 relative for |kX| < 0.1).
            const double k2 = kk * kk, k4 = k2 * k2, k6 = k4 * k2,
                         k8 = k4 * k4, k10 = k8 * k2, k12 = k8 * k4;
            const double c1[7] = {2.0 / 3.0, 4.0 * k2 / 45.0,
                                  4.0 * k4 / 315.0, 8.0 * k6 / 4725.0,
                                  4.0 * k8 / 18711.0,
                                  5528.0 * k10 / 212837625.0,
                                  8.0 * k12 / 2606175.0};
            const double c2[7] = {0.0, 8.0 / 45.0, 16.0 * k2 / 315.0,
                                  16.0 * k4 / 1575.0, 32.0 * k6 / 18711.0,
                                  11056.0 * k8 / 42567525.0,
                                  32.0 * k10 / 868725.0};
            const double c3[7] = {0.0, 0.0, 32.0 / 315.0, 64.0 * k2 / 1575.0,
                                  64.0 * k4 / 6237.0,
                                  88448.0 * k6 / 42567525.0,
                                  64.0 * k8 / 173745.0};
            Frame f;
            const double cv = std::cos(kk * Xv) / std::sin(kk * Xv);
            f.beta1 = D2{cv, -kk * (1.0 + cv * cv),
                         2.0 * kk * kk * cv * (1.0 + cv * cv)} *
                      (-kk);
            f.G1 = odd_poly(Xv, c1, 7);
            f.G2 = odd_poly(Xv, c2, 7);
            f.G3 = odd_poly(Xv, c3, 7);
            return f;
        }
        const long double kl = std::sqrt(2.0L * (long double)eps);
        const long double Xl = (long double)x - (long double)a;
        const long double cv = std::cos(kl * Xl) / std::sin(kl * Xl);
        // d/dx: c' = -k (1+c^2),  c'' = 2 k^2 c (1+c^2)
        const LD2 c{cv, -kl * (1.0L + cv * cv),
                    2.0L * kl * kl * cv * (1.0L + cv * cv)};
        const LD2 X{Xl, 1.0L, 0.0L};
        const LD2 one{1.0L, 0.0L, 0.0L};
        const LD2 S = c * c + one;  // csc^2
        const LD2 g1 = c * (-1.0L / kl) + X * S;
        const LD2 g2 = c * (1.0L / (kl * kl * kl)) + X * S * (1.0L / (kl * kl)) +
                       -(X * X * c * S) * (2.0L / kl);
        const LD2 g3 = c * (-3.0L / (kl * kl * kl * kl * kl)) +
                       X * S * (-3.0L / (kl * kl * kl * kl)) +
                       X * X * X * S * (c * c * 3.0L + one) * (2.0L / (kl * kl));
        const LD2 b1 = c * (-kl);
        auto down = [](const LD2& a) {
            return D2{double(a.v), double(a.d), double(a.dd)};
        };
        Frame f;
        f.beta1 = down(b1);
        f.G1 = down(g1);
        f.G2 = down(g2);
        f.G3 = down(g3);
        return f;
    }

    // Fixed-potential eps-derivative at each level, level = 1..3
    D2 H(int level, const Frame& f) const {
        if (level == 1) return f.G1;
        if (level == 2) {
            const D2 iG1 = reciprocal(f.G1);
            return f.G2 * iG1 * iG1;
        }
        const D2 iG2 = reciprocal(f.G2);
        return -f.G1 + f.G1 * f.G1 * f.G3 * iG2 * iG2 * (2.0 / 3.0);
    }

    D2 beta(int level, double x, double eps) const {
        const Frame f = frame(x, eps);
        D2 b = f.beta1;
        for (int l = 2; l <= level; ++l)
            b = -b - reciprocal(H(l - 1, f)) * 2.0;
        return b;
    }

    // Omega_n = beta_n + beta_{n-1} = -2 / (d beta_{n-1} / d eps)
    D2 omega(int level, double x, double eps) const {
        return -reciprocal(H(level - 1, frame(x, eps))) * 2.0;
    }
};

}  // namespace

std::vector<RealFunction> p_branch_confluent_betas(double eps, double a,
                                                   int n, Window w) {
    if (!(eps > 0.0)) throw BranchEnergyMismatch("P branch requires eps > 0");
    if (n < 1 || n > 4)
        throw std::invalid_argument("tower supports orders 1..4");
    const double k = std::sqrt(2.0 * eps);
    auto tower = std::make_shared<PTower>(PTower{k, a});
    std::vector<RealFunction> betas;
    Grid scan = Grid::uniform(w, 12001);
    std::vector<double> prev_poles = p_branch_poles(k, a, w);
    for (int level = 1; level <= n; ++level) {
        auto f = [tower, level, eps](double x) {
            return tower->beta(level, x, eps).v;
        };
        auto d1 = [tower, level, eps](double x) {
            return tower->beta(level, x, eps).d;
        };
        auto d2 = [tower, level, eps](double x) {
            return tower->beta(level, x, eps).dd;
        };
        std::vector<double> poles = prev_poles;
        if (level >= 2) {
            // New poles where the eps-derivative of the previous level
            // vanishes.
            auto g = [tower, level, eps](double x) {
                return tower->H(level - 1, tower->frame(x, eps)).v;
            };
            poles = merge_singularities(poles,
                                        num::sign_change_roots(g, scan.points));
        }
        std::vector<double> kept;
        for (double s : poles)
            if (!num::bounded_near(f, s)) kept.push_back(s);
        betas.push_back(RealFunction::analytic(f, d1, d2, kept, w));
        prev_poles = kept;
    }
    return betas;
}

RealFunction p_branch_confluent_potential(double eps, double a, int n,
                                          Window w) {
    if (n < 2 || n > 4 || (n % 2) != 0)
        throw std::invalid_argument("confluent potential: n must be 2 or 4");
    const double k = std::sqrt(2.0 * eps);
    auto tower = std::make_shared<PTower>(PTower{k, a});
    // Parity form: V_n = V0 + sum over even k of Omega_k', where
    // Omega_k = beta_k + beta_{k-1} = -2 / (d beta_{k-1} / d eps).
    auto eval = [tower, eps, n](double x) {
        const auto f = tower->frame(x, eps);
        double v = 0.0;
        for (int kk = 2; kk <= n; kk += 2) {
            D2 g = tower->H(kk - 1, f);
            // Omega' = 2 g' / g^2
            v += 2.0 * g.d / (g.v * g.v);
        }
        return v;
    };
    auto d1 = [tower, eps, n](double x) {
        const auto f = tower->frame(x, eps);
        double v = 0.0;
        for (int kk = 2; kk <= n; kk += 2) {
            D2 g = tower->H(kk - 1, f);
            v += 2.0 * (g.dd * g.v - 2.0 * g.d * g.d) / (g.v * g.v * g.v);
        }
        return v;
    };
    RealFunction raw = RealFunction::semi_analytic(eval, d1, {}, w);
    // Pole candidates: branch poles and zeros of the eps-derivatives.
    Grid scan = Grid::uniform(w, 12001);
    std::vector<double> cands = p_branch_poles(k, a, w);
    for (int kk = 2; kk <= n; kk += 2) {
        auto g = [tower, eps, kk](double x) {
            return tower->H(kk - 1, tower->frame(x, eps)).v;
        };
        cands = merge_singularities(cands,
                                    num::sign_change_roots(g, scan.points));
    }
    std::vector<double> poles;
    for (double s : cands)
        if (!num::bounded_near(eval, s)) poles.push_back(s);
    return RealFunction::semi_analytic(eval, d1, poles, w);
}

}  // namespace susy::catalog
