#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "optirec/applications.hpp"
#include "optirec/noise_sim.hpp"
#include "optirec/report_io.hpp"
#include "optirec/spectral.hpp"

using namespace optirec;
using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(OPTIREC_CLI_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("cutoff reports both solver paths consistently with the library") {
    const CliResult r = run_cli(
        "cutoff --problem derivative --r 1 --k 0 --delta 1 --both");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    const DerivativeProblem p{1, 0, 1.0};
    const double closed_c = derivative_cutoff(p);
    CHECK(j["closed_form"]["t_delta"].get<double>()
          == doctest::Approx(closed_c).epsilon(1e-12));
    CHECK(j["closed_form"]["E"].get<double>()
          == doctest::Approx(derivative_error(p)).epsilon(1e-12));
    CHECK(j["closed_form"]["alpha_support"][0].get<double>()
          == doctest::Approx(-closed_c).epsilon(1e-12));
    const OptimalFilter f = solve_cutoff(recovery_problem(p));
    CHECK(j["generic"]["t_delta"].get<double>()
          == doctest::Approx(f.cutoff).epsilon(1e-7));
    CHECK(j["generic"]["E"].get<double>() == doctest::Approx(f.error).epsilon(1e-7));
    CHECK(j["problem"]["kind"] == "derivative");
}

TEST_CASE("missing required noise level exits with the usage code") {
    CHECK(run_cli("cutoff --problem derivative --r 1 --k 0").code == 2);
}

TEST_CASE("unknown options exit with the usage code") {
    CHECK(run_cli("cutoff --delta 1 --bogus 7").code == 2);
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("simulate --help").code == 0);
}

TEST_CASE("simulation output is byte-identical across reruns and policies") {
    const std::string args =
        "simulate --problem derivative --r 1 --k 0 --delta 1 "
        "--grid-n 256 --freq-max 6 --trials 120 --seed 5";
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    const CliResult c = run_cli(args + " --serial");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    const json j = json::parse(a.out);
    CHECK(j["trials"] == 120);
    CHECK(j["seed"] == 5);
    CHECK(j["theoretical_error"].get<double>()
          == doctest::Approx(1.2009369551760027).epsilon(1e-9));
}

TEST_CASE("too few trials exits with the statistics code") {
    CHECK(run_cli("simulate --problem derivative --r 1 --k 0 --delta 1 "
                  "--grid-n 256 --trials 50").code == 4);
}

TEST_CASE("a grid narrower than the filter support exits with the numeric code") {
    CHECK(run_cli("simulate --problem derivative --r 1 --k 0 --delta 1 "
                  "--grid-n 256 --freq-max 0.5 --trials 120").code == 3);
}

TEST_CASE("recover matches the library path end to end") {
    SignalSamples x;
    x.n = 256;
    x.t_max = 10.0;
    x.values.resize(x.n);
    for (int m = 0; m < x.n; ++m) {
        const double t = x.time(m);
        x.values[m] = std::exp(-0.5 * t * t);
    }
    const Spectrum s = forward_transform(x);
    const std::string in = "/tmp/optirec_cli_in.csv";
    const std::string out = "/tmp/optirec_cli_out.csv";
    write_spectrum_csv(s, in);

    const CliResult r = run_cli("recover --problem derivative --r 1 --k 0 --delta 1 "
                                "--input " + in + " --output " + out);
    REQUIRE(r.code == 0);
    const SignalSamples got = read_signal_csv(out);
    const SignalSamples expect = apply_recovery(s, DerivativeProblem{1, 0, 1.0});
    REQUIRE(got.n == expect.n);
    for (int m = 0; m < got.n; ++m)
        CHECK(std::fabs(got.values[m] - expect.values[m])
              <= 1e-15 * std::max(1.0, std::fabs(expect.values[m])));
}

TEST_CASE("recover on a missing input exits with the usage code") {
    CHECK(run_cli("recover --problem derivative --r 1 --k 0 --delta 1 "
                  "--input /tmp/optirec_does_not_exist.csv --output /tmp/o.csv")
              .code == 2);
}

TEST_CASE("profile reports the closed-form noise scaling exponent") {
    const std::string alpha_path = "/tmp/optirec_cli_alpha.csv";
    const std::string err_path = "/tmp/optirec_cli_err.csv";
    const CliResult r = run_cli("profile --problem derivative --r 2 --k 1 "
                                "--delta 0.5 --alpha-out " + alpha_path +
                                " --error-out " + err_path);
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    // E scales as delta^(2(r-k)/(2r+1)) = delta^0.4
    CHECK(j["log_log_slope"].get<double>() == doctest::Approx(0.4).epsilon(1e-6));

    const auto lines = read_lines(alpha_path);
    REQUIRE(lines.size() == 1026);  // header + 1025 samples
    CHECK(lines[0] == "t,alpha");
    // middle sample sits exactly at t = 0 where the filter weight is 1
    const std::string& mid = lines[513];
    const auto comma = mid.find(',');
    CHECK(std::fabs(std::stod(mid.substr(0, comma))) <= 1e-12);
    CHECK(std::stod(mid.substr(comma + 1)) == 1.0);

    const auto err_lines = read_lines(err_path);
    CHECK(err_lines[0] == "delta,E");
    CHECK(err_lines.size() == 26);
}

TEST_CASE("config file fills options and explicit flags win") {
    const std::string cfg_path = "/tmp/optirec_cli_cfg.json";
    {
        std::ofstream f(cfg_path);
        f << "{\"problem\": \"derivative\", \"r\": 1, \"k\": 0, \"delta\": 1.0}\n";
    }
    const CliResult base = run_cli("cutoff --config " + cfg_path + " --closed-form");
    REQUIRE(base.code == 0);
    CHECK(json::parse(base.out)["closed_form"]["t_delta"].get<double>()
          == doctest::Approx(derivative_cutoff(DerivativeProblem{1, 0, 1.0}))
                 .epsilon(1e-12));

    const CliResult override_delta =
        run_cli("cutoff --config " + cfg_path + " --delta 0.1 --closed-form");
    REQUIRE(override_delta.code == 0);
    CHECK(json::parse(override_delta.out)["closed_form"]["t_delta"].get<double>()
          == doctest::Approx(derivative_cutoff(DerivativeProblem{1, 0, 0.1}))
                 .epsilon(1e-12));

    CHECK(run_cli("cutoff --config /tmp/optirec_missing_cfg.json --delta 1").code
          == 2);
}

TEST_CASE("lower bound subcommand emits a climbing ladder") {
    const CliResult r = run_cli(
        "lower-bound --problem derivative --r 1 --k 0 --delta 1 --N 64,128");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["rows"].size() == 2);
    const double r0 = j["rows"][0]["ratio"].get<double>();
    const double r1 = j["rows"][1]["ratio"].get<double>();
    CHECK(r0 > 0.99);
    CHECK(r1 > r0);
    CHECK(r1 < 1.0);
    CHECK(j["A"].get<double>()
          == doctest::Approx(2.0 * derivative_cutoff(DerivativeProblem{1, 0, 1.0}))
                 .epsilon(1e-12));
}

}  // TEST_SUITE
