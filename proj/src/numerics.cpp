#include "susy/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace susy::num {

namespace {

// 15-point Gauss-Legendre on [-1,1].
constexpr double kGlx[15] = {
    -0.98799251802048542849, -0.93727339240070590431,
    -0.84820658341042721620, -0.72441773136017004742,
    -0.57097217260853884754, -0.39415134707756336990,
    -0.20119409399743452230, 0.0,
    0.20119409399743452230,  0.39415134707756336990,
    0.57097217260853884754,  0.72441773136017004742,
    0.84820658341042721620,  0.93727339240070590431,
    0.98799251802048542849};
constexpr double kGlw[15] = {
    0.03075324199611726835, 0.07036604748810812471,
    0.10715922046717193501, 0.13957067792615431445,
    0.16626920581699393355, 0.18616100001556221103,
    0.19843148532711157646, 0.20257824192556127288,
    0.19843148532711157646, 0.18616100001556221103,
    0.16626920581699393355, 0.13957067792615431445,
    0.10715922046717193501, 0.07036604748810812471,
    0.03075324199611726835};

}  // namespace

double gauss15(const Fn& f, double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 15; ++i) s += kGlw[i] * f(c + r * kGlx[i]);
    return r * s;
}

double fd8_deriv(const Fn& f, double x, double h) {
    // 8th-order central first derivative.
    const double f1 = f(x + h) - f(x - h);
    const double f2 = f(x + 2 * h) - f(x - 2 * h);
    const double f3 = f(x + 3 * h) - f(x - 3 * h);
    const double f4 = f(x + 4 * h) - f(x - 4 * h);
    return (672.0 * f1 - 168.0 * f2 + 32.0 * f3 - 3.0 * f4) / (840.0 * h);
}

double fd8_deriv2(const Fn& f, double x, double h) {
    const double f0 = f(x);
    const double f1 = f(x + h) + f(x - h);
    const double f2 = f(x + 2 * h) + f(x - 2 * h);
    const double f3 = f(x + 3 * h) + f(x - 3 * h);
    const double f4 = f(x + 4 * h) + f(x - 4 * h);
    return (-14350.0 * f0 + 8064.0 * f1 - 1008.0 * f2 + 128.0 * f3 -
            9.0 * f4) /
           (5040.0 * h * h);
}

double bisect(const Fn& f, double lo, double hi, double xtol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw std::invalid_argument("bisect: endpoints do not bracket a root");
    while (hi - lo > xtol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> sign_change_roots(const Fn& f,
                                      const std::vector<double>& xs,
                                      double xtol) {
    std::vector<double> roots;
    double xprev = 0.0, fprev = 0.0;
    bool have_prev = false;
    for (double x : xs) {
        const double fx = f(x);
        if (!std::isfinite(fx)) {
            have_prev = false;
            continue;
        }
        if (have_prev && std::signbit(fx) != std::signbit(fprev))
            roots.push_back(bisect(f, xprev, x, xtol));
        xprev = x;
        fprev = fx;
        have_prev = true;
    }
    return roots;
}

double growth_exponent(const Fn& g, double s, double d) {
    // Compare |g| at the closest and farthest probe offsets.
    double near = 0.0, far = 0.0;
    for (int side = -1; side <= 1; side += 2) {
        near = std::max(near, std::fabs(g(s + side * d)));
        far = std::max(far, std::fabs(g(s + side * 8 * d)));
    }
    if (!(near > 0.0) || !(far > 0.0)) return 0.0;
    return std::log(near / far) / std::log(8.0);
}

bool bounded_near(const Fn& g, double s, double d) {
    for (int side = -1; side <= 1; side += 2)
        if (!std::isfinite(g(s + side * d))) return false;
    return growth_exponent(g, s, d) < 0.5;
}

double residue_order(const Fn& beta, double s, double d) {
    auto avg = [&](double dd) {
        const double tp = (dd) * (-beta(s + dd));
        const double tm = (-dd) * (-beta(s - dd));
        return 0.5 * (tp + tm);
    };
    const double a1 = avg(d), a2 = avg(2 * d);
    return (4.0 * a1 - a2) / 3.0;  // d^2 Richardson
}

Antiderivative::Antiderivative(Fn f, double lo, double hi, double x_ref,
                               std::size_t panels)
    : f_(std::move(f)), lo_(lo), hi_(hi), x_ref_(x_ref) {
    if (!(lo < hi)) throw std::invalid_argument("Antiderivative: lo >= hi");
    h_ = (hi - lo) / double(panels);
    node_values_.resize(panels + 1);
    // Accumulate outward from the node nearest x_ref so that values near
    // the reference point keep full relative accuracy even when a distant
    // tail of the integrand is astronomically larger (Kahan both ways).
    std::size_t n0 = 0;
    if (x_ref > lo) {
        n0 = std::min<std::size_t>(
            panels, std::size_t((x_ref - lo) / h_ + 0.5));
    }
    node_values_[n0] = 0.0;
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = n0; i < panels; ++i) {
        const double a = lo + double(i) * h_, b = a + h_;
        const double y = gauss15(f_, a, b) - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        node_values_[i + 1] = acc;
    }
    acc = 0.0;
    comp = 0.0;
    for (std::size_t i = n0; i-- > 0;) {
        const double a = lo + double(i) * h_, b = a + h_;
        const double y = -gauss15(f_, a, b) - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        node_values_[i] = acc;
    }
    f_ref_ = 0.0;
    f_ref_ = (*this)(x_ref);
}

Fn nan_rescue(Fn f, double h) {
    return [f = std::move(f), h](double x) {
        const double v = f(x);
        if (std::isfinite(v)) return v;
        const double a = f(x + h) + f(x - h);
        const double b = f(x + 2 * h) + f(x - 2 * h);
        const double w = (4.0 * a - b) / 6.0;
        return w;
    };
}

double Antiderivative::operator()(double x) const {
    double xx = x;
    if (xx < lo_) xx = lo_;
    if (xx > hi_) xx = hi_;
    auto idx = std::min<std::size_t>(
        node_values_.size() - 2,
        std::size_t(std::max(0.0, (xx - lo_) / h_)));
    const double xa = lo_ + double(idx) * h_;
    double v = node_values_[idx];
    if (xx != xa) v += gauss15(f_, xa, xx);
    return v - f_ref_;
}

}  // namespace susy::num
