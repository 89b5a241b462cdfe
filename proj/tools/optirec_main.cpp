#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "optirec/applications.hpp"
#include "optirec/lowerbound.hpp"
#include "optirec/noise_sim.hpp"
#include "optirec/optimal_core.hpp"
#include "optirec/report_io.hpp"
#include "optirec/spectral.hpp"

namespace {

using optirec::AnyProblem;
using optirec::DerivativeProblem;
using optirec::HeatProblem;
using optirec::SolverConfig;

struct ProblemOpts {
    std::string kind = "derivative";
    int r = 1;
    int k = 0;
    double T = 1.0;
    double delta = 0.0;
};

void add_problem_options(CLI::App* cmd, ProblemOpts& o) {
    cmd->add_option("--problem", o.kind, "problem family")
        ->check(CLI::IsMember({"derivative", "heat"}))
        ->capture_default_str();
    cmd->add_option("--r", o.r, "smoothness order r >= 1")->capture_default_str();
    cmd->add_option("--k", o.k, "derivative order 0 <= k < r")->capture_default_str();
    cmd->add_option("--T", o.T, "heat evolution time T > 0")->capture_default_str();
    cmd->add_option("--delta", o.delta, "noise level delta > 0")->required();
}

AnyProblem make_problem(const ProblemOpts& o) {
    if (o.kind == "heat") return HeatProblem{o.r, o.T, o.delta};
    return DerivativeProblem{o.r, o.k, o.delta};
}

double closed_cutoff(const AnyProblem& p, const SolverConfig& cfg) {
    if (std::holds_alternative<DerivativeProblem>(p))
        return optirec::derivative_cutoff(std::get<DerivativeProblem>(p));
    return optirec::heat_cutoff(std::get<HeatProblem>(p), cfg);
}

double closed_error(const AnyProblem& p, const SolverConfig& cfg) {
    if (std::holds_alternative<DerivativeProblem>(p))
        return optirec::derivative_error(std::get<DerivativeProblem>(p));
    return optirec::heat_error(std::get<HeatProblem>(p), cfg);
}

optirec::RecoveryProblem to_recovery(const AnyProblem& p) {
    return std::visit([](const auto& q) { return optirec::recovery_problem(q); }, p);
}

std::string cutoff_entry(double cutoff, double error) {
    return "{\"t_delta\": " + optirec::format_double(cutoff) +
           ", \"E\": " + optirec::format_double(error) + ", \"alpha_support\": [" +
           optirec::format_double(-cutoff) + ", " + optirec::format_double(cutoff) +
           "]}";
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw optirec::DomainError("cannot open '" + out_path + "' for writing");
    f << text;
    if (!f) throw optirec::DomainError("write to '" + out_path + "' failed");
}

// --config file.json merges defaults: any long option the command line does
// not mention is appended from the file, so explicit flags always win. Keys
// are the long option names without the leading dashes.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size())
                throw optirec::DomainError("--config expects a file path");
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (path.empty()) return args;

    std::ifstream f(path);
    if (!f) throw optirec::DomainError("cannot open config '" + path + "'");
    nlohmann::json cfg;
    try {
        f >> cfg;
    } catch (const nlohmann::json::parse_error& e) {
        throw optirec::DomainError("config '" + path + "': " + e.what());
    }
    if (!cfg.is_object())
        throw optirec::DomainError("config '" + path + "' must be a JSON object");

    auto mentioned = [&args](const std::string& name) {
        const std::string flag = "--" + name;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };

    for (const auto& [key, value] : cfg.items()) {
        if (mentioned(key)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back("--" + key);
        } else if (value.is_string()) {
            args.push_back("--" + key + "=" + value.get<std::string>());
        } else if (value.is_number_integer()) {
            args.push_back("--" + key + "=" +
                           std::to_string(value.get<long long>()));
        } else if (value.is_number()) {
            args.push_back("--" + key + "=" +
                           optirec::format_double(value.get<double>()));
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& v : value) {
                if (!joined.empty()) joined += ',';
                joined += v.is_string() ? v.get<std::string>()
                                        : v.dump();
            }
            args.push_back("--" + key + "=" + joined);
        } else {
            throw optirec::DomainError("config '" + path + "': key '" + key +
                                       "' has an unsupported value type");
        }
    }
    return args;
}

int run(int argc, char** argv) {
    CLI::App app{"minimax recovery of multiplier operators from noisy Fourier data",
                 "optirec"};
    app.require_subcommand(1);
    const SolverConfig cfg;

    // cutoff: solve for the spectral cutoff and the optimal error.
    auto* cut = app.add_subcommand(
        "cutoff", "solve the cutoff equation and report t_delta, E, filter support");
    ProblemOpts cut_p;
    add_problem_options(cut, cut_p);
    bool want_closed = false, want_generic = false, want_both = false;
    cut->add_flag("--closed-form", want_closed, "closed-form fast path only");
    cut->add_flag("--generic", want_generic, "generic quadrature + root solve only");
    cut->add_flag("--both", want_both, "both paths (default)");
    std::string cut_out;
    cut->add_option("--output", cut_out, "write the JSON here instead of stdout");

    // recover: filter an observed spectrum file into a time-domain estimate.
    auto* rec = app.add_subcommand(
        "recover", "apply the optimal filter to an observed spectrum CSV");
    ProblemOpts rec_p;
    add_problem_options(rec, rec_p);
    std::string rec_in, rec_out;
    rec->add_option("--input", rec_in, "observed spectrum CSV (omega,re,im)")
        ->required();
    rec->add_option("--output", rec_out, "recovered signal CSV (t,value)")->required();

    // simulate: Monte Carlo error of the method at a chosen signal.
    auto* sim = app.add_subcommand(
        "simulate", "Monte Carlo expected-error estimate against the theory");
    ProblemOpts sim_p;
    add_problem_options(sim, sim_p);
    int sim_n = 4096, sim_trials = 1000;
    double sim_fmax = 0.0;
    std::uint64_t sim_seed = 0;
    std::string sim_signal = "extremal", sim_out;
    bool sim_serial = false;
    sim->add_option("--grid-n", sim_n, "frequency bins (power of two >= 8)")
        ->capture_default_str();
    sim->add_option("--freq-max", sim_fmax,
                    "grid half-width (0 = twice the filter support)")
        ->capture_default_str();
    sim->add_option("--trials", sim_trials, "Monte Carlo trials (>= 100)")
        ->capture_default_str();
    sim->add_option("--seed", sim_seed, "base seed")->capture_default_str();
    sim->add_option("--signal", sim_signal, "test signal")
        ->check(CLI::IsMember({"extremal", "gaussian"}))
        ->capture_default_str();
    sim->add_flag("--serial", sim_serial, "single-threaded run");
    sim->add_option("--output", sim_out, "write the JSON here instead of stdout");

    // lower-bound: discrete adversary certificate.
    auto* low = app.add_subcommand(
        "lower-bound", "discretized lower-bound certificate for E^2");
    ProblemOpts low_p;
    add_problem_options(low, low_p);
    double low_A = 0.0;
    std::vector<int> low_N{256, 512, 1024, 2048};
    bool low_serial = false;
    low->add_option("--A", low_A, "cell range (0 = twice the filter support)")
        ->capture_default_str();
    low->add_option("--N", low_N, "cells per side, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    low->add_flag("--serial", low_serial, "single-threaded run");
    std::string low_out;
    low->add_option("--output", low_out, "write the JSON here instead of stdout");

    // profile: filter curve and error-vs-noise scaling.
    auto* pro = app.add_subcommand(
        "profile", "write the filter curve and the E(delta) scaling profile");
    ProblemOpts pro_p;
    add_problem_options(pro, pro_p);
    std::string alpha_out = "alpha_profile.csv", error_out = "error_profile.csv";
    double dmin = 1e-3, dmax = 10.0;
    int dpoints = 25;
    pro->add_option("--alpha-out", alpha_out, "filter curve CSV path")
        ->capture_default_str();
    pro->add_option("--error-out", error_out, "E(delta) CSV path")
        ->capture_default_str();
    pro->add_option("--delta-min", dmin, "smallest noise level")
        ->capture_default_str();
    pro->add_option("--delta-max", dmax, "largest noise level")->capture_default_str();
    pro->add_option("--delta-points", dpoints, "log-spaced noise levels")
        ->capture_default_str();

    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(std::move(args));
    try {
        // CLI11 consumes reversed arguments.
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (cut->parsed()) {
        const AnyProblem p = make_problem(cut_p);
        if (!want_closed && !want_generic) want_both = true;
        std::string body;
        if (want_both || want_closed)
            body += "  \"closed_form\": " +
                    cutoff_entry(closed_cutoff(p, cfg), closed_error(p, cfg));
        if (want_both || want_generic) {
            const optirec::OptimalFilter f = optirec::solve_cutoff(to_recovery(p), cfg);
            if (!body.empty()) body += ",\n";
            body += "  \"generic\": " + cutoff_entry(f.cutoff, f.error);
        }
        emit("{\n  \"problem\": " + optirec::problem_json(p) + ",\n" + body + "\n}\n",
             cut_out);
        return 0;
    }

    if (rec->parsed()) {
        const AnyProblem p = make_problem(rec_p);
        const optirec::Spectrum observed = optirec::read_spectrum_csv(rec_in);
        const optirec::SignalSamples estimate = std::visit(
            [&](const auto& q) {
                if constexpr (std::is_same_v<std::decay_t<decltype(q)>, HeatProblem>)
                    return optirec::apply_recovery(observed, q, cfg);
                else
                    return optirec::apply_recovery(observed, q);
            },
            p);
        optirec::write_signal_csv(estimate, rec_out);
        std::cerr << "cutoff " << optirec::format_double(closed_cutoff(p, cfg))
                  << ", optimal error " << optirec::format_double(closed_error(p, cfg))
                  << ", grid n " << observed.grid.n << "\n";
        return 0;
    }

    if (sim->parsed()) {
        const AnyProblem p = make_problem(sim_p);
        const double cutoff = closed_cutoff(p, cfg);
        const double fmax = sim_fmax > 0.0 ? sim_fmax : 2.0 * cutoff;
        const optirec::FrequencyGrid grid(sim_n, fmax);
        optirec::Spectrum signal;
        if (sim_signal == "extremal") {
            const optirec::OptimalFilter f = optirec::solve_cutoff(to_recovery(p), cfg);
            signal = optirec::extremal_spectrum(f, grid, cfg);
        } else {
            optirec::SignalSamples x;
            x.n = grid.n;
            x.t_max = std::numbers::pi * grid.n / (2.0 * fmax);
            x.values.resize(grid.n);
            for (int m = 0; m < grid.n; ++m) {
                const double t = x.time(m);
                x.values[m] = std::exp(-0.5 * t * t);
            }
            signal = optirec::class_spectrum(x);
            optirec::normalize_to_class(signal, to_recovery(p).pair);
        }
        const optirec::GaussianPointwise model{sim_p.delta};
        const optirec::SimulationReport report = optirec::monte_carlo_error(
            p, signal, model, sim_trials, sim_seed,
            sim_serial ? optirec::Exec::Serial : optirec::Exec::Parallel, cfg);
        emit(optirec::to_json(report), sim_out);
        return 0;
    }

    if (low->parsed()) {
        const AnyProblem p = make_problem(low_p);
        const double A = low_A > 0.0 ? low_A : 2.0 * closed_cutoff(p, cfg);
        const auto rows = optirec::certificate(
            p, A, low_N, cfg,
            low_serial ? optirec::Exec::Serial : optirec::Exec::Parallel);
        emit(optirec::to_json(rows, p, A), low_out);
        return 0;
    }

    if (pro->parsed()) {
        const AnyProblem p = make_problem(pro_p);
        const double cutoff = closed_cutoff(p, cfg);
        {
            std::ofstream f(alpha_out);
            if (!f)
                throw optirec::DomainError("cannot open '" + alpha_out +
                                           "' for writing");
            f << "t,alpha\n";
            const int points = 1025;
            for (int i = 0; i < points; ++i) {
                const double t = -1.2 * cutoff + 2.4 * cutoff * i / (points - 1);
                const double a = std::visit(
                    [&](const auto& q) {
                        if constexpr (std::is_same_v<std::decay_t<decltype(q)>,
                                                     HeatProblem>)
                            return optirec::heat_alpha_at(q, t, cutoff);
                        else
                            return optirec::derivative_alpha(q, t);
                    },
                    p);
                f << optirec::format_double(t) << ',' << optirec::format_double(a)
                  << '\n';
            }
        }
        if (dpoints < 2) throw optirec::DomainError("need at least 2 noise levels");
        if (!(dmin > 0.0) || !(dmax > dmin))
            throw optirec::DomainError("need 0 < delta-min < delta-max");
        std::vector<double> xs(dpoints), ys(dpoints);
        {
            std::ofstream f(error_out);
            if (!f)
                throw optirec::DomainError("cannot open '" + error_out +
                                           "' for writing");
            f << "delta,E\n";
            for (int i = 0; i < dpoints; ++i) {
                const double ld = std::log(dmin) +
                                  (std::log(dmax) - std::log(dmin)) * i / (dpoints - 1);
                const double d = std::exp(ld);
                AnyProblem q = p;
                std::visit([&](auto& pp) { pp.delta = d; }, q);
                const double e = closed_error(q, cfg);
                xs[i] = std::log(d);
                ys[i] = std::log(e);
                f << optirec::format_double(d) << ',' << optirec::format_double(e)
                  << '\n';
            }
        }
        double mx = 0, my = 0;
        for (int i = 0; i < dpoints; ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= dpoints;
        my /= dpoints;
        double sxx = 0, sxy = 0;
        for (int i = 0; i < dpoints; ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        const double slope = sxy / sxx;
        std::cout << "{\n  \"problem\": " << optirec::problem_json(p)
                  << ",\n  \"alpha_profile\": \"" << alpha_out
                  << "\",\n  \"error_profile\": \"" << error_out
                  << "\",\n  \"log_log_slope\": " << optirec::format_double(slope)
                  << "\n}\n";
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const optirec::InsufficientTrials& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const optirec::QuadratureFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const optirec::BracketFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const optirec::GridTooNarrow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const optirec::HermitianViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
