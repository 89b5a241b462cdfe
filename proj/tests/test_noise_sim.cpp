#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "optirec/noise_sim.hpp"
#include "optirec/report_io.hpp"

using namespace optirec;

namespace {

Spectrum zero_spectrum(int n, double fmax) {
    Spectrum s;
    s.grid = FrequencyGrid(n, fmax);
    s.values.assign(n, {0.0, 0.0});
    s.hermitian = true;
    return s;
}

}  // namespace

TEST_SUITE("noise_sim") {

TEST_CASE("noise is hermitian, unbiased, pointwise variance delta^2") {
    const double delta = 0.7;
    const Spectrum clean = zero_spectrum(64, 8.0);
    const GaussianPointwise model{delta};
    const int trials = 100000;
    const int probes[] = {0, 7, 31, 32, 33, 50};
    double mean_re[6] = {}, mean_im[6] = {}, second[6] = {};
    for (int i = 0; i < trials; ++i) {
        const Spectrum s = sample_noisy_spectrum(clean, model, 99, i);
        // mirror bins carry exact conjugates
        if (i < 100) {
            for (int j = 1; j < 64; ++j) {
                CHECK(s.values[j].real() == s.values[(64 - j) % 64].real());
                CHECK(s.values[j].imag() == -s.values[(64 - j) % 64].imag());
            }
            CHECK(s.values[0].imag() == 0.0);
            CHECK(s.values[32].imag() == 0.0);
            CHECK(check_hermitian(s, 1e-15));
        }
        for (int q = 0; q < 6; ++q) {
            const auto z = s.values[probes[q]];
            mean_re[q] += z.real();
            mean_im[q] += z.imag();
            second[q] += std::norm(z);
        }
    }
    const double d2 = delta * delta;
    for (int q = 0; q < 6; ++q) {
        mean_re[q] /= trials;
        mean_im[q] /= trials;
        second[q] /= trials;
        // component std <= delta, so 5 sigma of the mean is 5 delta/sqrt(M)
        const double mean_tol = 5.0 * delta / std::sqrt(double(trials));
        CHECK(std::fabs(mean_re[q]) <= mean_tol);
        CHECK(std::fabs(mean_im[q]) <= mean_tol);
        // var(|z|^2) <= 2 delta^4 for both real and complex bins
        const double var_tol = 5.0 * std::sqrt(2.0) * d2 / std::sqrt(double(trials));
        CHECK(std::fabs(second[q] - d2) <= var_tol);
    }
}

TEST_CASE("noise draws are keyed, not sequential") {
    const Spectrum clean = zero_spectrum(16, 2.0);
    const GaussianPointwise model{1.0};
    const Spectrum a = sample_noisy_spectrum(clean, model, 5, 3);
    const Spectrum b = sample_noisy_spectrum(clean, model, 5, 3);
    const Spectrum c = sample_noisy_spectrum(clean, model, 5, 4);
    const Spectrum d = sample_noisy_spectrum(clean, model, 6, 3);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(a.values != d.values);
}

TEST_CASE("noise model validation") {
    const Spectrum clean = zero_spectrum(16, 2.0);
    CHECK_THROWS_AS(sample_noisy_spectrum(clean, GaussianPointwise{-1.0}, 0, 0),
                    DomainError);
    Spectrum bad = clean;
    bad.values.resize(10);
    CHECK_THROWS_AS(sample_noisy_spectrum(bad, GaussianPointwise{1.0}, 0, 0),
                    DomainError);
}

TEST_CASE("staircase distribution: two-point case by hand") {
    const EtaDistribution eta({2.0}, {1}, 1.0);
    CHECK(eta.cells() == 1);
    CHECK(eta.levels() == 2);
    CHECK(eta.level_probability(0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(eta.level_probability(1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(eta.level_values(0)[0] == 0.0);
    CHECK(eta.level_values(1)[0] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(eta.mean()[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(eta.variance()[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("staircase distribution: exact moments for random configurations") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int rep = 0; rep < 25; ++rep) {
        const int m = 1 + int(u01(rng) * 40);
        const double delta = 0.1 + 3.0 * u01(rng);
        std::vector<double> tau(m);
        std::vector<int> signs(m);
        double level = 0.5 + 4.0 * u01(rng);
        for (int j = 0; j < m; ++j) {
            tau[j] = level;
            level *= 0.5 + 0.5 * u01(rng);
            signs[j] = u01(rng) < 0.5 ? -1 : 1;
        }
        const EtaDistribution eta = eta_distribution(tau, signs, delta);
        const auto mean = eta.mean();
        const auto var = eta.variance();
        double prob_total = 0.0;
        for (int l = 0; l <= m; ++l) prob_total += eta.level_probability(l);
        CHECK(prob_total == doctest::Approx(1.0).epsilon(1e-12));
        for (int j = 0; j < m; ++j) {
            CHECK(mean[j] == doctest::Approx(signs[j] * tau[j]).epsilon(1e-10));
            CHECK(var[j] == doctest::Approx(delta * delta).epsilon(1e-10));
        }
    }
}

TEST_CASE("staircase distribution: sampling matches the table") {
    const EtaDistribution eta({2.0}, {1}, 1.0);
    int full = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
        if (eta.sample(1234, i)[0] != 0.0) ++full;
    const double freq = double(full) / draws;
    CHECK(std::fabs(freq - 0.8) <= 5.0 * std::sqrt(0.8 * 0.2 / draws));
}

TEST_CASE("staircase distribution validation") {
    CHECK_THROWS_AS(EtaDistribution({}, {}, 1.0), DomainError);
    CHECK_THROWS_AS(EtaDistribution({1.0, 2.0}, {1, 1}, 1.0), DomainError);
    CHECK_THROWS_AS(EtaDistribution({1.0, 0.0}, {1, 1}, 1.0), DomainError);
    CHECK_THROWS_AS(EtaDistribution({-1.0}, {1}, 1.0), DomainError);
    CHECK_THROWS_AS(EtaDistribution({1.0}, {2}, 1.0), DomainError);
    CHECK_THROWS_AS(EtaDistribution({1.0}, {1, 1}, 1.0), DomainError);
    CHECK_THROWS_AS(EtaDistribution({1.0}, {1}, 0.0), DomainError);
}

TEST_CASE("extremal profile sampled on a grid") {
    const OptimalFilter f = solve_cutoff(recovery_problem(DerivativeProblem{1, 0, 1.0}));
    const FrequencyGrid grid(1024, 6.0);
    const Spectrum s = extremal_spectrum(f, grid);
    CHECK(s.hermitian);
    const int n = grid.n;
    CHECK(std::isfinite(s.values[n / 2].real()));
    CHECK(s.values[n / 2].real() > 0.0);
    for (int j = 1; j < n / 2; ++j) {
        CHECK(s.values[n / 2 + j] == s.values[n / 2 - j]);
        if (std::fabs(grid.frequency(n / 2 + j)) >= f.cutoff)
            CHECK(s.values[n / 2 + j] == std::complex<double>(0.0, 0.0));
    }
    // pole-cell averaging keeps the discrete weighted norm near the class budget
    const double norm = class_norm(s, f.problem.pair);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("class spectrum and weighted norm of a smooth signal") {
    // ||x'||^2 for the unit gaussian is sqrt(pi)/2
    SignalSamples x;
    x.n = 2048;
    x.t_max = 20.0;
    x.values.resize(x.n);
    for (int m = 0; m < x.n; ++m) {
        const double t = x.time(m);
        x.values[m] = std::exp(-0.5 * t * t);
    }
    Spectrum s = class_spectrum(x);
    const WeightPair pair = WeightPair::derivative(1, 0);
    CHECK(class_norm(s, pair)
          == doctest::Approx(0.88622692545275801).epsilon(1e-6));
    normalize_to_class(s, pair);
    CHECK(class_norm(s, pair) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("monte carlo reports are reproducible and trial-count checked") {
    const AnyProblem p = DerivativeProblem{1, 0, 1.0};
    const OptimalFilter f = solve_cutoff(recovery_problem(DerivativeProblem{1, 0, 1.0}));
    const FrequencyGrid grid(256, 6.0);
    const Spectrum signal = extremal_spectrum(f, grid);
    const GaussianPointwise model{1.0};
    CHECK_THROWS_AS(monte_carlo_error(p, signal, model, 99, 1), InsufficientTrials);

    const SimulationReport a = monte_carlo_error(p, signal, model, 120, 42);
    const SimulationReport b = monte_carlo_error(p, signal, model, 120, 42);
    CHECK(a.empirical_rmse == b.empirical_rmse);
    CHECK(a.rmse_stderr == b.rmse_stderr);
    CHECK(to_json(a) == to_json(b));
    const SimulationReport c = monte_carlo_error(p, signal, model, 120, 43);
    CHECK(a.empirical_rmse != c.empirical_rmse);
}

TEST_CASE("monte carlo error sits near the theoretical value") {
    const AnyProblem p = DerivativeProblem{1, 0, 1.0};
    const OptimalFilter f = solve_cutoff(recovery_problem(DerivativeProblem{1, 0, 1.0}));
    const FrequencyGrid grid(1024, 6.0);
    const Spectrum signal = extremal_spectrum(f, grid);
    const SimulationReport rep =
        monte_carlo_error(p, signal, GaussianPointwise{1.0}, 500, 2026);
    CHECK(rep.theoretical_error == doctest::Approx(1.2009369551760027).epsilon(1e-9));
    const double tol = std::max(4.0 * rep.rmse_stderr, 0.05 * rep.theoretical_error);
    CHECK(std::fabs(rep.empirical_rmse - rep.theoretical_error) <= tol);
}

}  // TEST_SUITE
