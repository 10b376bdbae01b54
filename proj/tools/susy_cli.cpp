// susy: build SUSY partner potentials from a chain config, reproduce the
// reference figures, and run the verification suite.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "susy/backlund.hpp"
#include "susy/catalog.hpp"
#include "susy/confluent.hpp"
#include "susy/core.hpp"
#include "susy/numerics.hpp"
#include "susy/riccati.hpp"
#include "susy/verify.hpp"

namespace fs = std::filesystem;
using namespace susy;

namespace {

// ---------------------------------------------------------------------------
// Config

struct RunConfig {
    std::string v0 = "zero";          // zero | oscillator | file:<path>
    Window window;
    std::size_t n_points = 3001;
    std::vector<ChainStep> steps;
    std::string potential_csv, beta_csv, report_path;
    std::map<std::string, double> tols;  // riccati, intertwine, factorize,
                                         // parity, crum, zero_mode
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) {
        if (tok[0] == '#') break;
        out.push_back(tok);
    }
    return out;
}

double parse_num(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ParseError("trailing junk in number " + s);
        return v;
    } catch (const std::invalid_argument&) {
        throw ParseError("not a number: " + s);
    }
}

Branch parse_branch(const std::string& s) {
    if (s == "S") return Branch::S;
    if (s == "R") return Branch::R;
    if (s == "P") return Branch::P;
    if (s == "N") return Branch::N;
    throw ParseError("unknown branch " + s + " (expected S, R, P or N)");
}

ChainStep parse_step(const std::vector<std::string>& toks) {
    if (toks.size() < 3) throw ParseError("step needs a kind and an energy");
    const std::string& kind = toks[1];
    const double eps = parse_num(toks[2]);
    if (kind == "confluent") {
        if (toks.size() != 4)
            throw ParseError("step confluent <eps> <gamma>");
        return ChainStep::confluent(eps, parse_num(toks[3]));
    }
    if (kind != "simple") throw ParseError("unknown step kind " + kind);
    ChainStep st = ChainStep::simple(eps);
    std::optional<Branch> branch;
    double shift = 0.0;
    for (std::size_t i = 3; i < toks.size(); ++i) {
        const auto eq = toks[i].find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value, got " + toks[i]);
        const std::string key = toks[i].substr(0, eq);
        const std::string val = toks[i].substr(eq + 1);
        if (key == "lambda") {
            st.param = parse_num(val);
            st.param_infinite = false;
        } else if (key == "seed") {
            branch = parse_branch(val);
        } else if (key == "shift") {
            shift = parse_num(val);
        } else {
            throw ParseError("unknown step option " + key);
        }
    }
    if (branch) st.seed = BranchSeed{*branch, shift};
    return st;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path);
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        try {
            const std::string& key = toks[0];
            if (key == "v0") {
                if (toks.size() != 2) throw ParseError("v0 <name>");
                cfg.v0 = toks[1];
            } else if (key == "window") {
                if (toks.size() != 4)
                    throw ParseError("window <xmin> <xmax> <npoints>");
                cfg.window = {parse_num(toks[1]), parse_num(toks[2])};
                cfg.n_points = std::size_t(parse_num(toks[3]));
                if (cfg.window.lo >= cfg.window.hi || cfg.n_points < 9)
                    throw ParseError("degenerate window");
            } else if (key == "step") {
                cfg.steps.push_back(parse_step(toks));
            } else if (key == "potential_csv" || key == "beta_csv" ||
                       key == "report") {
                if (toks.size() != 2) throw ParseError(key + " <path>");
                (key == "potential_csv"
                     ? cfg.potential_csv
                     : key == "beta_csv" ? cfg.beta_csv : cfg.report_path) =
                    toks[1];
            } else if (key == "tol") {
                if (toks.size() != 3) throw ParseError("tol <name> <value>");
                cfg.tols[toks[1]] = parse_num(toks[2]);
            } else {
                throw ParseError("unknown key " + key);
            }
        } catch (ParseError& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " +
                             e.what());
        }
    }
    if (cfg.steps.empty()) throw ParseError(path + ": no steps configured");
    return cfg;
}

double tol_or(const RunConfig& cfg, const std::string& name, double dflt) {
    auto it = cfg.tols.find(name);
    return it == cfg.tols.end() ? dflt : it->second;
}

// ---------------------------------------------------------------------------
// Base potential and first-level Riccati family

RealFunction load_sampled_potential(const std::string& path, Window w) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open potential file " + path);
    auto xs = std::make_shared<std::vector<double>>();
    auto vs = std::make_shared<std::vector<double>>();
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-' ||
                              line[0] == '+'))
            continue;
        double x, v;
        if (std::sscanf(line.c_str(), "%lf,%lf", &x, &v) == 2) {
            xs->push_back(x);
            vs->push_back(v);
        }
    }
    if (xs->size() < 9) throw ParseError("potential file too short: " + path);
    // 6-point Lagrange interpolation on the loaded abscissas.
    auto f = [xs, vs](double x) {
        auto it = std::lower_bound(xs->begin(), xs->end(), x);
        std::ptrdiff_t i = it - xs->begin();
        std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(
            i - 3, 0, std::ptrdiff_t(xs->size()) - 6);
        double acc = 0.0;
        for (std::ptrdiff_t j = lo; j < lo + 6; ++j) {
            double term = (*vs)[j];
            for (std::ptrdiff_t m = lo; m < lo + 6; ++m)
                if (m != j)
                    term *= (x - (*xs)[m]) / ((*xs)[j] - (*xs)[m]);
            acc += term;
        }
        return acc;
    };
    return RealFunction::numeric(f, {}, w);
}

RealFunction base_potential(const RunConfig& cfg) {
    if (cfg.v0 == "zero") return catalog::zero_potential(cfg.window);
    if (cfg.v0 == "oscillator")
        return catalog::oscillator_potential(cfg.window);
    if (cfg.v0.rfind("file:", 0) == 0)
        return load_sampled_potential(cfg.v0.substr(5), cfg.window);
    throw ParseError("unknown v0 " + cfg.v0);
}

Branch default_branch(double eps) {
    if (eps < 0.0) return Branch::S;
    if (eps > 0.0) return Branch::P;
    return Branch::N;
}

std::map<double, catalog::BranchSpec> seed_table(const RunConfig& cfg) {
    std::map<double, catalog::BranchSpec> table;
    for (const auto& st : cfg.steps) {
        catalog::BranchSpec spec{default_branch(st.epsilon), st.epsilon, 0.0};
        if (st.seed) spec = {st.seed->branch, st.epsilon, st.seed->shift};
        table.emplace(st.epsilon, spec);
    }
    return table;
}

backlund::Beta1Family make_family(const RunConfig& cfg,
                                  const RealFunction& v0, const Grid& grid) {
    if (cfg.v0 == "zero") {
        auto table = std::make_shared<std::map<double, catalog::BranchSpec>>(
            seed_table(cfg));
        Window w = cfg.window;
        return [table, w](double eps) {
            auto it = table->find(eps);
            catalog::BranchSpec spec =
                it != table->end()
                    ? it->second
                    : catalog::BranchSpec{default_branch(eps), eps, 0.0};
            return catalog::free_particle_beta(spec, w);
        };
    }
    // Closed form for the oscillator ground factorization; numeric shooting
    // otherwise.
    RealFunction v = v0;
    Window w = cfg.window;
    Grid g = grid;
    bool oscillator = (cfg.v0 == "oscillator");
    return [v, w, g, oscillator](double eps) {
        if (oscillator && std::fabs(eps + 0.5) < 1e-12)
            return catalog::oscillator_particular_beta(w);
        return riccati::beta_from_u(
            riccati::solve_schrodinger(v, eps, g, 1.0, 0.0));
    };
}

// ---------------------------------------------------------------------------
// CSV output

void atomic_write(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << content;
        if (!out) throw std::runtime_error("cannot write " + tmp);
    }
    fs::rename(tmp, path);
}

std::string csv_of(const RealFunction& f, const Grid& grid,
                   const std::string& value_header) {
    const double delta = default_delta(f.window());
    const auto windows = exclusion_windows(f, delta);
    std::ostringstream out;
    out << "x," << value_header << "\n";
    char buf[64];
    for (double x : grid.points) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out << buf << ",";
        if (point_excluded(windows, x)) {
            out << "nan\n";
            continue;
        }
        const double v = f.eval(x);
        if (std::isfinite(v)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << "\n";
        } else {
            out << "nan\n";
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Verification suite

void run_verification(const RunConfig& cfg, const RealFunction& v0,
                      const backlund::SusyChain& chain, const Grid& grid,
                      VerificationReport& report) {
    const double delta = 2.0 * default_delta(cfg.window);
    const double tol_int = tol_or(cfg, "intertwine", 1e-6);
    const double tol_fac = tol_or(cfg, "factorize", 1e-6);
    const double tol_zm = tol_or(cfg, "zero_mode", 1e-6);
    const double tol_parity = tol_or(cfg, "parity", 1e-8);
    const double tol_crum = tol_or(cfg, "crum", 1e-6);
    const auto tests = verify::TestFunctionSet::standard();

    const RealFunction* v_prev = &v0;
    for (std::size_t k = 0; k < chain.steps.size(); ++k) {
        const auto& st = chain.steps[k];
        const std::string tag = std::to_string(k + 1);
        double worst_int = 0.0, worst_fac = 0.0;
        for (const auto& f : tests.members) {
            worst_int = std::max(
                worst_int,
                verify::intertwining_residual(st.potential, *v_prev, st.beta,
                                              st.spec.epsilon, f, grid,
                                              delta));
            worst_fac = std::max(
                worst_fac,
                verify::factorization_residual(st.potential, st.beta,
                                               st.spec.epsilon, f, grid,
                                               delta));
            worst_fac = std::max(
                worst_fac, verify::factorization_residual_companion(
                               *v_prev, st.beta, st.spec.epsilon, f, grid,
                               delta));
        }
        report.add("intertwining_step_" + tag, worst_int, tol_int);
        report.add("factorization_step_" + tag, worst_fac, tol_fac);

        // Zero mode of beta_k solves the previous Schrodinger equation.
        {
            RealFunction u = backlund::zero_mode(st.beta);
            const auto windows = exclusion_windows(
                merge_singularities(u.singularities(),
                                    v_prev->singularities()),
                delta);
            double worst = 0.0;
            for (double x : grid.points) {
                if (point_excluded(windows, x)) continue;
                const double uu = u.eval(x), u2 = u.deriv2(x);
                const double r =
                    u2 - 2.0 * (v_prev->eval(x) - st.spec.epsilon) * uu;
                const double scale = 1.0 + std::fabs(uu) + std::fabs(u2);
                if (std::isfinite(r))
                    worst = std::max(worst, std::fabs(r) / scale);
            }
            report.add("zero_mode_step_" + tag, worst, tol_zm);
        }
        v_prev = &st.potential;
    }

    // Parity assembly: telescoped beta' sum against the parity form.
    {
        std::vector<double> sing = v0.singularities();
        for (const auto& st : chain.steps)
            sing = merge_singularities(sing, st.beta.singularities());
        const auto windows = exclusion_windows(sing, delta);
        const auto& parity = chain.current_potential();
        double worst = 0.0;
        for (double x : grid.points) {
            if (point_excluded(windows, x)) continue;
            double tele = v0.eval(x);
            for (const auto& st : chain.steps) tele += st.beta.deriv(x);
            const double d = std::fabs(tele - parity.eval(x));
            if (std::isfinite(d)) worst = std::max(worst, d);
        }
        report.add("parity_assembly", worst, tol_parity);
    }

    // Wronskian referee: only for all-simple chains with distinct energies,
    // particular (lambda = infinity) first-level solutions, and a free base.
    bool crum_ok = (cfg.v0 == "zero");
    std::vector<double> eps_seen;
    for (const auto& st : cfg.steps) {
        if (st.kind != StepKind::Simple || !st.param_infinite)
            crum_ok = false;
        for (double e : eps_seen)
            if (e == st.epsilon) crum_ok = false;
        eps_seen.push_back(st.epsilon);
    }
    if (!crum_ok) {
        report.skip("wronskian_oracle");
        return;
    }
    auto table = seed_table(cfg);
    std::vector<verify::Seed> seeds;
    for (const auto& st : cfg.steps)
        seeds.push_back({catalog::free_particle_mode(table.at(st.epsilon),
                                                     cfg.window),
                         st.epsilon});
    RealFunction oracle = verify::crum_oracle(v0, seeds, grid);
    const auto& vn = chain.current_potential();
    std::vector<double> sing =
        merge_singularities(oracle.singularities(), vn.singularities());
    for (const auto& st : chain.steps)
        sing = merge_singularities(sing, st.beta.singularities());
    const auto windows = exclusion_windows(sing, delta);
    double worst = 0.0;
    for (double x : grid.points) {
        if (point_excluded(windows, x)) continue;
        const double d = std::fabs(oracle.eval(x) - vn.eval(x));
        if (std::isfinite(d)) worst = std::max(worst, d);
    }
    report.add("wronskian_oracle", worst, tol_crum);
}

// ---------------------------------------------------------------------------
// Commands

int run_chain_like(const RunConfig& cfg, bool full_verify) {
    const RealFunction v0 = base_potential(cfg);
    const Grid grid = Grid::uniform(cfg.window, cfg.n_points);
    backlund::BuildOptions opts;
    opts.grid = grid;
    opts.tol_riccati = tol_or(cfg, "riccati", 1e-6);

    backlund::SusyChain chain;
    try {
        chain = backlund::build_chain(v0, cfg.steps, make_family(cfg, v0, grid),
                                      opts);
    } catch (const SusyError& e) {
        std::cerr << e.name << ": " << e.what() << "\n";
        return 3;
    }

    VerificationReport report = chain.build_checks;
    try {
        if (full_verify) run_verification(cfg, v0, chain, grid, report);
    } catch (const SusyError& e) {
        std::cerr << e.name << ": " << e.what() << "\n";
        return 3;
    }

    if (!cfg.potential_csv.empty())
        atomic_write(cfg.potential_csv,
                     csv_of(chain.current_potential(), grid, "V"));
    if (!cfg.beta_csv.empty())
        atomic_write(cfg.beta_csv,
                     csv_of(chain.steps.back().beta, grid, "beta"));
    const std::string text = report.to_text();
    if (!cfg.report_path.empty()) atomic_write(cfg.report_path, text);
    std::cout << text;
    return report.all_passed() ? 0 : 1;
}

int cmd_figure(int n, const std::string& outdir, Window w,
               std::size_t n_points) {
    const Grid grid = Grid::uniform(w, n_points);
    auto emit = [&](const std::string& name, const RealFunction& f) {
        atomic_write((fs::path(outdir) / name).string(), csv_of(f, grid, "V"));
    };
    const double k1 = std::sqrt(8.0), k2 = std::sqrt(2.0);
    switch (n) {
        case 1:
            emit("fig1_a.csv", catalog::bargmann_double_well(k1, k2, 0, 0, w));
            emit("fig1_b.csv",
                 catalog::bargmann_double_well(k1, k2, 0.254, -1.018, w));
            emit("fig1_c.csv",
                 catalog::bargmann_double_well(k1, k2, 0.565, -2.262, w));
            break;
        case 2:
            emit("fig2_am2.csv",
                 catalog::abraham_moses2(std::sqrt(M_PI) / 2.0, 0.308, w));
            emit("fig2_oscillator.csv", catalog::oscillator_potential(w));
            break;
        case 3:
            emit("fig3_v2conf.csv",
                 catalog::p_branch_confluent_potential(0.25, 7.0, 2, w));
            emit("fig3_v4conf.csv",
                 catalog::p_branch_confluent_potential(0.25, -7.0, 4, w));
            break;
        default:
            std::cerr << "figure number must be 1, 2 or 3\n";
            return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SUSY partner potential construction and verification"};
    app.require_subcommand(1);

    std::vector<double> window_args;
    app.add_option("--window", window_args,
                   "override working window: x_min x_max n_points")
        ->expected(3);
    std::vector<std::string> tol_args;
    app.add_option("--tol", tol_args, "tolerance override name=value");

    std::string chain_config, verify_config;
    auto* chain_cmd = app.add_subcommand("chain", "build a chain from config");
    chain_cmd->add_option("--config", chain_config, "config file")->required();
    auto* verify_cmd =
        app.add_subcommand("verify", "build + full verification suite");
    verify_cmd->add_option("--config", verify_config, "config file")
        ->required();
    int fig_n = 0;
    std::string fig_out = ".";
    auto* figure_cmd =
        app.add_subcommand("figure", "emit reference curve CSVs");
    figure_cmd->add_option("n", fig_n, "figure number (1, 2 or 3)")
        ->required();
    figure_cmd->add_option("--out", fig_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        Window w;
        std::size_t n_points = 3001;
        const bool window_override = !window_args.empty();
        if (window_override) {
            w = {window_args[0], window_args[1]};
            n_points = std::size_t(window_args[2]);
            if (w.lo >= w.hi || n_points < 9)
                throw ParseError("degenerate --window");
        }

        if (figure_cmd->parsed()) return cmd_figure(fig_n, fig_out, w, n_points);

        const std::string& cfg_path =
            chain_cmd->parsed() ? chain_config : verify_config;
        RunConfig cfg = parse_config(cfg_path);
        if (window_override) {
            cfg.window = w;
            cfg.n_points = n_points;
        }
        for (const auto& t : tol_args) {
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ParseError("--tol expects name=value");
            cfg.tols[t.substr(0, eq)] = parse_num(t.substr(eq + 1));
        }
        return run_chain_like(cfg, verify_cmd->parsed());
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SusyError& e) {
        std::cerr << e.name << ": " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
