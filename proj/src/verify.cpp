#include "susy/verify.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <memory>

#include "susy/numerics.hpp"

namespace susy::verify {

double Gaussian::f(double x) const {
    const double t = (x - c) / w;
    return std::exp(-0.5 * t * t);
}
double Gaussian::f1(double x) const {
    const double t = (x - c) / w;
    return -t / w * f(x);
}
double Gaussian::f2(double x) const {
    const double t = (x - c) / w;
    return (t * t - 1.0) / (w * w) * f(x);
}
double Gaussian::f3(double x) const {
    const double t = (x - c) / w;
    return t * (3.0 - t * t) / (w * w * w) * f(x);
}

TestFunctionSet TestFunctionSet::standard() {
    TestFunctionSet s;
    s.members = {{-6.0, 1.5}, {-2.5, 0.8}, {0.0, 2.0}, {2.5, 0.8}, {6.0, 1.5}};
    return s;
}

namespace {

std::vector<std::pair<double, double>>
joint_windows(const std::vector<const RealFunction*>& fs, double delta) {
    std::vector<double> sing;
    for (const auto* f : fs)
        sing = merge_singularities(sing, f->singularities());
    return exclusion_windows(sing, delta);
}

}  // namespace

double intertwining_residual(const RealFunction& Vk, const RealFunction& Vk_1,
                             const RealFunction& beta_k, double eps_k,
                             const Gaussian& f, const Grid& grid,
                             double delta) {
    (void)eps_k;
    const auto windows = joint_windows({&Vk, &Vk_1, &beta_k}, delta);
    double sup = 0.0;
    for (double x : grid.points) {
        if (point_excluded(windows, x)) continue;
        const double dv = Vk.eval(x) - Vk_1.eval(x);
        // (H_k A - A H_{k-1}) f =
        //   f' (V_k - V_{k-1} - beta') + f (-beta''/2 + beta (V_k - V_{k-1})
        //                                   - V_{k-1}')
        const double r = f.f1(x) * (dv - beta_k.deriv(x)) +
                         f.f(x) * (-0.5 * beta_k.deriv2(x) +
                                   beta_k.eval(x) * dv - Vk_1.deriv(x));
        if (std::isfinite(r)) sup = std::max(sup, std::fabs(r));
        else return std::numeric_limits<double>::infinity();
    }
    return sup;
}

double factorization_residual(const RealFunction& Vk,
                              const RealFunction& beta_k, double eps_k,
                              const Gaussian& f, const Grid& grid,
                              double delta) {
    const auto windows = joint_windows({&Vk, &beta_k}, delta);
    double sup = 0.0;
    for (double x : grid.points) {
        if (point_excluded(windows, x)) continue;
        // (H_k - eps) f = -f''/2 + (V_k - eps) f
        // (1/2) A A^dag f = (1/2)(d/dx + beta)(-d/dx + beta) f
        //                = -f''/2 + (beta' + beta^2) f / 2 ... expanded:
        const double b = beta_k.eval(x), b1 = beta_k.deriv(x);
        const double lhs = -0.5 * f.f2(x) + (Vk.eval(x) - eps_k) * f.f(x);
        const double rhs = -0.5 * f.f2(x) + 0.5 * (b1 + b * b) * f.f(x);
        const double r = lhs - rhs;
        if (std::isfinite(r)) sup = std::max(sup, std::fabs(r));
        else return std::numeric_limits<double>::infinity();
    }
    return sup;
}

double factorization_residual_companion(const RealFunction& Vk_1,
                                        const RealFunction& beta_k,
                                        double eps_k, const Gaussian& f,
                                        const Grid& grid, double delta) {
    const auto windows = joint_windows({&Vk_1, &beta_k}, delta);
    double sup = 0.0;
    for (double x : grid.points) {
        if (point_excluded(windows, x)) continue;
        // (1/2) A^dag A f = -f''/2 + (-beta' + beta^2) f / 2
        const double b = beta_k.eval(x), b1 = beta_k.deriv(x);
        const double lhs = -0.5 * f.f2(x) + (Vk_1.eval(x) - eps_k) * f.f(x);
        const double rhs = -0.5 * f.f2(x) + 0.5 * (-b1 + b * b) * f.f(x);
        const double r = lhs - rhs;
        if (std::isfinite(r)) sup = std::max(sup, std::fabs(r));
        else return std::numeric_limits<double>::infinity();
    }
    return sup;
}

RealFunction map_eigenfunction(const RealFunction& beta_k,
                               const RealFunction& psi_prev, const Grid& grid,
                               double delta) {
    RealFunction b = beta_k, p = psi_prev;
    auto raw = [b, p](double x) {
        return p.deriv(x) + b.eval(x) * p.eval(x);
    };
    auto raw_d1 = [b, p](double x) {
        return p.deriv2(x) + b.deriv(x) * p.eval(x) + b.eval(x) * p.deriv(x);
    };
    const auto windows = joint_windows({&beta_k, &psi_prev}, delta);
    double amax = 0.0, ref = 0.0;
    for (double x : grid.points) {
        if (point_excluded(windows, x)) continue;
        const double v = raw(x);
        if (std::isfinite(v)) amax = std::max(amax, std::fabs(v));
        ref = std::max(ref, std::fabs(p.eval(x)));
    }
    if (amax < 1e-10 * (1.0 + ref))
        throw AnnihilatedInput("the intertwiner annihilates this state");
    auto eval = num::nan_rescue(raw);
    return RealFunction::semi_analytic(
        eval, num::nan_rescue(raw_d1),
        merge_singularities(beta_k.singularities(),
                            psi_prev.singularities()),
        beta_k.window());
}

// ---------------------------------------------------------------------------
// Wronskian referee

namespace {

constexpr int kMaxSeeds = 4;

// Derivatives u^(0..n+1) of each seed at x, from differentiating the ODE
// u'' = 2 (v0 - eps) u:
//   u^(m+2) = 2 sum_i binom(m, i) (v0^(i) - eps delta_{i0}) u^(m-i)
// which, with v0 derivatives available to 2nd order, covers m <= 2 exactly
// and m = 3 via v0''' by finite difference of v0''.
struct SeedDerivs {
    std::array<double, kMaxSeeds + 2> d{};  // u, u', ..., u^(n+1)
};

SeedDerivs seed_derivs(const RealFunction& v0, const Seed& s, double x,
                       int n) {
    SeedDerivs out;
    out.d[0] = s.u.eval(x);
    out.d[1] = s.u.deriv(x);
    const double v = v0.eval(x), v1 = v0.deriv(x), v2 = v0.deriv2(x);
    const double v3 =
        num::fd8_deriv([&v0](double y) { return v0.deriv2(y); }, x);
    const double g = 2.0 * (v - s.epsilon);
    for (int m = 0; m + 2 <= n + 1; ++m) {
        double acc = g * out.d[m];
        if (m >= 1) acc += 2.0 * m * v1 * out.d[m - 1];
        if (m >= 2) acc += m * (m - 1) * v2 * out.d[m - 2];
        if (m >= 3) acc += double(m) * (m - 1) * (m - 2) / 3.0 * v3 *
                           out.d[m - 3];
        out.d[m + 2] = acc;
    }
    return out;
}

double det_n(const std::vector<std::array<double, kMaxSeeds>>& rows, int n) {
    // full-pivot Gaussian elimination, n <= 4
    double a[kMaxSeeds][kMaxSeeds];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = rows[i][j];
    double det = 1.0;
    for (int k = 0; k < n; ++k) {
        int pi = k, pj = k;
        double best = std::fabs(a[k][k]);
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j)
                if (std::fabs(a[i][j]) > best) {
                    best = std::fabs(a[i][j]);
                    pi = i;
                    pj = j;
                }
        if (best == 0.0) return 0.0;
        if (pi != k) {
            for (int j = 0; j < n; ++j) std::swap(a[k][j], a[pi][j]);
            det = -det;
        }
        if (pj != k) {
            for (int i = 0; i < n; ++i) std::swap(a[i][k], a[i][pj]);
            det = -det;
        }
        det *= a[k][k];
        for (int i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

}  // namespace

RealFunction crum_oracle(const RealFunction& v0, const std::vector<Seed>& seeds,
                         const Grid& grid) {
    const int n = int(seeds.size());
    if (n < 1 || n > kMaxSeeds)
        throw ConfigError("Wronskian referee supports 1 to 4 seeds");
    const Window win = v0.window();
    RealFunction v0c = v0;
    auto seedsc = std::make_shared<std::vector<Seed>>(seeds);

    // W, W', W'' at x via determinants with derivative-substituted rows.
    auto wtriple = [v0c, seedsc, n](double x, double& W, double& W1,
                                    double& W2) {
        std::vector<SeedDerivs> d;
        d.reserve(n);
        for (const auto& s : *seedsc) d.push_back(seed_derivs(v0c, s, x, n));
        auto mat = [&](const std::vector<int>& orders) {
            std::vector<std::array<double, kMaxSeeds>> rows(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) rows[i][j] = d[j].d[orders[i]];
            return det_n(rows, n);
        };
        std::vector<int> base(n);
        for (int i = 0; i < n; ++i) base[i] = i;
        W = mat(base);
        // W' = det with the last row bumped one derivative order.
        std::vector<int> o1 = base;
        o1[n - 1] = n;
        W1 = mat(o1);
        // W'' = det(last row bumped twice) + det(last two rows bumped once).
        std::vector<int> o2a = base;
        o2a[n - 1] = n + 1;
        W2 = mat(o2a);
        if (n >= 2) {
            std::vector<int> o2b = base;
            o2b[n - 2] = n - 1;
            o2b[n - 1] = n;
            W2 += mat(o2b);
        }
    };

    // V_n = v0 - (ln W)'' = v0 - (W'' W - W'^2)/W^2
    auto raw = [v0c, wtriple](double x) {
        double W, W1, W2;
        wtriple(x, W, W1, W2);
        return v0c.eval(x) - (W2 * W - W1 * W1) / (W * W);
    };

    // Singularities: zeros of W, plus whatever v0 already carries.
    auto wonly = [wtriple](double x) {
        double W, W1, W2;
        wtriple(x, W, W1, W2);
        return W;
    };
    std::vector<double> sing = v0.singularities();
    {
        Grid scan = Grid::uniform(win, 6001);
        sing = merge_singularities(sing,
                                   num::sign_change_roots(wonly, scan.points));
    }
    (void)grid;
    auto eval = num::nan_rescue(raw, 1e-3);
    std::vector<double> poles;
    for (double s : sing)
        if (!num::bounded_near(eval, s)) poles.push_back(s);
    return RealFunction::numeric(eval, poles, win);
}

}  // namespace susy::verify
