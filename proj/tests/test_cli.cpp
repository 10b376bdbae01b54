#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("susy_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    const fs::path out = scratch_dir() / "stdout.txt";
    const fs::path err = scratch_dir() / "stderr.txt";
    const std::string cmd = std::string(SUSY_CLI_PATH) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int rc = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::trunc);
    out << content;
}

// Value column for the row with abscissa closest to x; "nan" rows come
// back as quiet NaN.
double csv_value_at(const fs::path& p, double x) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);  // header
    double best = 1e300, value = std::nan("");
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        const double xi = std::stod(line.substr(0, comma));
        const std::string vs = line.substr(comma + 1);
        if (std::fabs(xi - x) < best) {
            best = std::fabs(xi - x);
            value = (vs == "nan") ? std::nan("") : std::stod(vs);
        }
    }
    return value;
}

}  // namespace

TEST_CASE("figure command emits the reference curves") {
    const fs::path dir = scratch_dir() / "fig1";
    const CliResult r = run_cli("figure 1 --out " + dir.string());
    CHECK(r.code == 0);
    for (const char* name : {"fig1_a.csv", "fig1_b.csv", "fig1_c.csv"})
        CHECK(fs::exists(dir / name));

    std::ifstream in(dir / "fig1_a.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,V");
    CHECK(csv_value_at(dir / "fig1_a.csv", 0.5) ==
          doctest::Approx(-3.775741641809122).epsilon(1e-9));

    CHECK(run_cli("figure 7 --out " + dir.string()).code == 2);
}

TEST_CASE("chain command builds and writes CSV output") {
    const fs::path dir = scratch_dir() / "chain";
    fs::create_directories(dir);
    const fs::path cfg = dir / "chain.cfg";
    write_file(cfg,
               "v0 zero\n"
               "window -12 12 2401\n"
               "step simple -4 seed=S\n"
               "step simple -1 seed=R\n"
               "potential_csv " + (dir / "pot.csv").string() + "\n"
               "beta_csv " + (dir / "beta.csv").string() + "\n"
               "report " + (dir / "report.txt").string() + "\n");

    const CliResult r = run_cli("chain --config " + cfg.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("riccati_step_1") != std::string::npos);
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK(fs::exists(dir / "report.txt"));
    CHECK(fs::exists(dir / "beta.csv"));

    // The built double well matches its closed form.
    CHECK(csv_value_at(dir / "pot.csv", 0.5) ==
          doctest::Approx(-3.775741641809122).epsilon(1e-7));
    CHECK(csv_value_at(dir / "pot.csv", 1.0) ==
          doctest::Approx(-1.2646265637967832).epsilon(1e-7));
}

TEST_CASE("verify command reports the full suite") {
    const fs::path dir = scratch_dir() / "verify";
    fs::create_directories(dir);
    const fs::path cfg = dir / "verify.cfg";
    write_file(cfg,
               "v0 zero\n"
               "window -12 12 2401\n"
               "step simple -4 seed=S\n"
               "step simple -1 seed=R\n");
    const CliResult r = run_cli("verify --config " + cfg.string());
    CHECK(r.code == 0);
    for (const char* name :
         {"riccati_step_1", "intertwining_step_1", "factorization_step_2",
          "zero_mode_step_1", "parity_assembly", "wronskian_oracle"})
        CHECK(r.out.find(name) != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("verify skips the Wronskian referee for confluent chains") {
    const fs::path dir = scratch_dir() / "verify_confluent";
    fs::create_directories(dir);
    const fs::path cfg = dir / "confluent.cfg";
    write_file(cfg,
               "v0 zero\n"
               "window -12 12 2401\n"
               "step simple -0.5 seed=R\n"
               "step confluent -0.5 100\n"
               "potential_csv " + (dir / "pot.csv").string() + "\n");
    const CliResult r = run_cli("verify --config " + cfg.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("wronskian_oracle SKIPPED") != std::string::npos);

    // The bracket zero puts a pole in the window; its exclusion rows are
    // written as literal nan.
    CHECK(fs::exists(dir / "pot.csv"));
    CHECK(slurp(dir / "pot.csv").find(",nan") != std::string::npos);
}

TEST_CASE("config parse errors exit with code 2") {
    const fs::path dir = scratch_dir() / "bad";
    fs::create_directories(dir);
    const fs::path cfg = dir / "bad.cfg";
    write_file(cfg, "v0 zero\nstep simple notanumber\n");
    const CliResult r = run_cli("chain --config " + cfg.string());
    CHECK(r.code == 2);
    CHECK(r.err.find("config error") != std::string::npos);

    CHECK(run_cli("chain --config " + (dir / "missing.cfg").string()).code ==
          2);
}

TEST_CASE("construction errors exit with code 3 and name the error") {
    const fs::path dir = scratch_dir() / "construct";
    fs::create_directories(dir);
    const fs::path cfg = dir / "equal.cfg";
    write_file(cfg,
               "v0 zero\n"
               "window -12 12 2401\n"
               "step simple -0.5 seed=R\n"
               "step simple -0.5 seed=S\n");
    const CliResult r = run_cli("chain --config " + cfg.string());
    CHECK(r.code == 3);
    CHECK(r.err.find("EqualEnergies") != std::string::npos);
}
