#include "susy/core.hpp"

#include <cmath>
#include <sstream>

#include "susy/numerics.hpp"

namespace susy {

RealFunction RealFunction::analytic(Fn f, Fn d1, Fn d2,
                                    std::vector<double> sing, Window w) {
    RealFunction r;
    r.f_ = std::move(f);
    r.d1_ = std::move(d1);
    r.d2_ = std::move(d2);
    r.sing_ = std::move(sing);
    std::sort(r.sing_.begin(), r.sing_.end());
    r.win_ = w;
    return r;
}

RealFunction RealFunction::semi_analytic(Fn f, Fn d1,
                                         std::vector<double> sing, Window w) {
    Fn d1c = d1;
    Fn d2 = [d1c](double x) { return num::fd8_deriv(d1c, x); };
    return analytic(std::move(f), std::move(d1), std::move(d2),
                    std::move(sing), w);
}

RealFunction RealFunction::numeric(Fn f, std::vector<double> sing, Window w) {
    Fn fc = f;
    Fn d1 = [fc](double x) { return num::fd8_deriv(fc, x); };
    Fn d2 = [fc](double x) { return num::fd8_deriv2(fc, x); };
    return analytic(std::move(f), std::move(d1), std::move(d2),
                    std::move(sing), w);
}

void RealFunction::add_singularity(double s) {
    sing_ = merge_singularities(std::move(sing_), {s});
}

void RealFunction::add_singularities(const std::vector<double>& s) {
    sing_ = merge_singularities(std::move(sing_), s);
}

Grid Grid::uniform(double lo, double hi, std::size_t n) {
    if (n < 9) throw std::invalid_argument("Grid needs at least 9 points");
    if (!(lo < hi)) throw std::invalid_argument("Grid needs lo < hi");
    Grid g;
    g.points.resize(n);
    const double h = (hi - lo) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i) g.points[i] = lo + double(i) * h;
    g.points.back() = hi;
    return g;
}

void VerificationReport::add(const std::string& name, double residual,
                             double tol,
                             std::vector<std::pair<double, double>> excluded) {
    CheckResult c;
    c.name = name;
    c.residual = residual;
    c.tolerance = tol;
    c.passed = std::isfinite(residual) && residual <= tol;
    c.excluded = std::move(excluded);
    checks.push_back(std::move(c));
}

void VerificationReport::skip(const std::string& name) {
    CheckResult c;
    c.name = name;
    c.skipped = true;
    c.passed = true;
    checks.push_back(std::move(c));
}

bool VerificationReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::string VerificationReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        if (c.skipped) {
            os << c.name << " SKIPPED\n";
            continue;
        }
        os.setf(std::ios::scientific);
        os.precision(3);
        os << c.name << " residual=" << c.residual << " tol=" << c.tolerance
           << (c.passed ? " PASS" : " FAIL") << "\n";
    }
    return os.str();
}

std::vector<std::pair<double, double>>
exclusion_windows(const std::vector<double>& singularities, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
    std::vector<double> s = singularities;
    std::sort(s.begin(), s.end());
    std::vector<std::pair<double, double>> out;
    for (double p : s) {
        const double lo = p - delta, hi = p + delta;
        if (!out.empty() && lo <= out.back().second)
            out.back().second = std::max(out.back().second, hi);
        else
            out.emplace_back(lo, hi);
    }
    return out;
}

std::vector<std::pair<double, double>>
exclusion_windows(const RealFunction& f, double delta) {
    return exclusion_windows(f.singularities(), delta);
}

bool point_excluded(const std::vector<std::pair<double, double>>& windows,
                    double x) {
    for (const auto& [lo, hi] : windows)
        if (x >= lo && x <= hi) return true;
    return false;
}

std::vector<double> merge_singularities(std::vector<double> a,
                                        const std::vector<double>& b,
                                        double tol) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    std::vector<double> out;
    for (double s : a) {
        if (out.empty() || s - out.back() > tol) out.push_back(s);
    }
    return out;
}

}  // namespace susy
