#ifndef SUSY_CORE_HPP
#define SUSY_CORE_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace susy {

// ---------------------------------------------------------------------------
// Errors

struct SusyError : std::runtime_error {
    SusyError(std::string name_, const std::string& what_)
        : std::runtime_error(name_ + ": " + what_), name(std::move(name_)) {}
    std::string name;
};

#define SUSY_ERROR(Name)                                        \
    struct Name : SusyError {                                   \
        explicit Name(const std::string& what_ = "")            \
            : SusyError(#Name, what_) {}                        \
    }

SUSY_ERROR(EqualEnergies);
SUSY_ERROR(SamePrevSolution);
SUSY_ERROR(TrivialInitialCondition);
SUSY_ERROR(IntegrationDivergence);
SUSY_ERROR(NonintegrableSingularity);
SUSY_ERROR(QuadratureOverflow);
SUSY_ERROR(DerivativeVanishes);
SUSY_ERROR(BracketVanishesEverywhere);
SUSY_ERROR(ParityMismatch);
SUSY_ERROR(ChainEmpty);
SUSY_ERROR(AnnihilatedInput);
SUSY_ERROR(WronskianVanishes);
SUSY_ERROR(BranchEnergyMismatch);
SUSY_ERROR(ConfigError);

#undef SUSY_ERROR

// ---------------------------------------------------------------------------
// Working window

struct Window {
    double lo = -15.0;
    double hi = 15.0;
    double width() const { return hi - lo; }
};

// ---------------------------------------------------------------------------
// RealFunction: evaluable function of x with derivative access and
// singularity bookkeeping.  Closed-form constructions carry analytic
// derivatives; numeric ones fall back to 8th-order central differences.

class RealFunction {
public:
    using Fn = std::function<double(double)>;

    RealFunction() = default;

    static RealFunction analytic(Fn f, Fn d1, Fn d2,
                                 std::vector<double> sing = {},
                                 Window w = {});
    // d2 filled in by differencing d1.
    static RealFunction semi_analytic(Fn f, Fn d1,
                                      std::vector<double> sing = {},
                                      Window w = {});
    // All derivatives by finite differences of f.
    static RealFunction numeric(Fn f, std::vector<double> sing = {},
                                Window w = {});

    double eval(double x) const { return f_(x); }
    double deriv(double x) const { return d1_(x); }
    double deriv2(double x) const { return d2_(x); }
    double operator()(double x) const { return f_(x); }

    const std::vector<double>& singularities() const { return sing_; }
    Window window() const { return win_; }

    void add_singularity(double s);
    void add_singularities(const std::vector<double>& s);
    void set_window(Window w) { win_ = w; }

    bool has_eval() const { return static_cast<bool>(f_); }

private:
    Fn f_, d1_, d2_;
    std::vector<double> sing_;   // sorted
    Window win_;
};

// ---------------------------------------------------------------------------
// Grid

struct Grid {
    std::vector<double> points;  // strictly increasing, >= 9 points

    static Grid uniform(double lo, double hi, std::size_t n);
    static Grid uniform(Window w, std::size_t n) {
        return uniform(w.lo, w.hi, n);
    }

    double lo() const { return points.front(); }
    double hi() const { return points.back(); }
    std::size_t size() const { return points.size(); }
    double spacing(std::size_t i) const { return points[i + 1] - points[i]; }
};

// ---------------------------------------------------------------------------
// Chain step descriptors

enum class StepKind { Simple, Confluent };
enum class Branch { S, R, P, N };

struct BranchSeed {
    Branch branch;
    double shift = 0.0;  // a or b
};

struct FactorizationEnergy {
    double epsilon = 0.0;
};

struct ChainStep {
    StepKind kind = StepKind::Simple;
    double epsilon = 0.0;
    double param = 0.0;          // lambda (Simple) or Gamma (Confluent)
    bool param_infinite = true;  // lambda = infinity keeps the particular solution
    std::optional<BranchSeed> seed;

    static ChainStep simple(double eps, std::optional<BranchSeed> seed = {}) {
        return {StepKind::Simple, eps, 0.0, true, seed};
    }
    static ChainStep simple_lambda(double eps, double lambda,
                                   std::optional<BranchSeed> seed = {}) {
        return {StepKind::Simple, eps, lambda, false, seed};
    }
    static ChainStep confluent(double eps, double gamma) {
        return {StepKind::Confluent, eps, gamma, false, {}};
    }
};

// ---------------------------------------------------------------------------
// Verification report

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    bool skipped = false;
    std::vector<std::pair<double, double>> excluded;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    void add(const std::string& name, double residual, double tol,
             std::vector<std::pair<double, double>> excluded = {});
    void skip(const std::string& name);
    bool all_passed() const;
    std::string to_text() const;
};

// ---------------------------------------------------------------------------
// Exclusion windows: [s - delta, s + delta] around each singularity,
// merged when overlapping.

std::vector<std::pair<double, double>>
exclusion_windows(const std::vector<double>& singularities, double delta);

std::vector<std::pair<double, double>>
exclusion_windows(const RealFunction& f, double delta);

bool point_excluded(const std::vector<std::pair<double, double>>& windows,
                    double x);

// Default exclusion radius: 1e-3 * window width.
inline double default_delta(Window w) { return 1e-3 * w.width(); }

// Merge two sorted singularity lists, dropping near-duplicates.
std::vector<double> merge_singularities(std::vector<double> a,
                                        const std::vector<double>& b,
                                        double tol = 1e-9);

}  // namespace susy

#endif
