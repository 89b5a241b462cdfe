#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "optirec/parallel.hpp"
#include "optirec/spectral.hpp"

namespace optirec {

using AnyProblem = std::variant<DerivativeProblem, HeatProblem>;

// Complex Gaussian observation noise with pointwise variance exactly delta^2,
// hermitian-symmetrized so noisy spectra of real signals stay spectra of real
// signals: mirrored bins receive conjugate draws, the two self-conjugate bins
// (origin and Nyquist) receive real draws of variance delta^2.
struct GaussianPointwise {
    double delta;
};

// Draws are keyed by (seed, trial, frequency index) through a counter-based
// generator, so results do not depend on evaluation order or thread count.
Spectrum sample_noisy_spectrum(const Spectrum& clean, const GaussianPointwise& model,
                               std::uint64_t seed, std::uint64_t trial = 0);

// The exact worst-case noise distribution on a finite cell basis: given
// non-increasing positive amplitudes tau and signs s, the observation takes
// the staircase of partial sums
//   0                                   with prob p_1
//   sum_{i<=j} s_i tau_i/(1-p_i) e_i    with prob p_{j+1} - p_j
//   the full sum                        with prob 1 - p_m
// where p_j = delta^2/(delta^2 + tau_j^2). Its mean is exactly s_j tau_j per
// cell and its pointwise variance exactly delta^2 on every cell.
class EtaDistribution {
public:
    EtaDistribution(std::vector<double> tau, std::vector<int> signs, double delta);

    int cells() const { return static_cast<int>(tau_.size()); }
    int levels() const { return cells() + 1; }
    double level_probability(int level) const { return probs_[level]; }
    // Cell values of outcome `level` (level 0 is the zero element).
    std::vector<double> level_values(int level) const;

    // First and second moments summed straight off the distribution table.
    std::vector<double> mean() const;
    std::vector<double> variance() const;

    std::vector<double> sample(std::uint64_t seed, std::uint64_t trial = 0) const;

private:
    std::vector<double> tau_;
    std::vector<int> signs_;
    std::vector<double> probs_;   // level probabilities, size cells()+1
    std::vector<double> value_;   // per-cell staircase value s_j tau_j/(1-p_j)
    double delta_;
};

EtaDistribution eta_distribution(std::vector<double> tau, std::vector<int> signs,
                                 double delta);

struct SimulationReport {
    AnyProblem problem;
    int trials = 0;
    std::uint64_t seed = 0;
    double empirical_rmse = 0.0;
    double rmse_stderr = 0.0;
    double theoretical_error = 0.0;
    FrequencyGrid grid;
};

// Samples the extremal class element on the grid. The origin bin holds the
// cell average over [-spacing/2, spacing/2] (the pole is integrable for the
// acceptance-grade families, r-k = 1 resp. r = 1); when the pole is too
// strong for a finite average, the nu-weighted RMS cell average is used
// instead, which always exists.
Spectrum extremal_spectrum(const OptimalFilter& filter, const FrequencyGrid& grid,
                           const SolverConfig& cfg = {});

// Frequency-side object X = forward(x)/sqrt(2 pi), whose weighted norm
// integral nu |X|^2 equals ||x^(r)||^2 — the class membership functional.
Spectrum class_spectrum(const SignalSamples& x);

// Discrete class norm sum nu(w_j) |X_j|^2 spacing (bins with nu = 0 are
// skipped, so an infinite pole sample does not poison the sum).
double class_norm(const Spectrum& x, const WeightPair& pair);

// Scales the spectrum so class_norm == target.
void normalize_to_class(Spectrum& x, const WeightPair& pair, double target = 1.0);

// Monte Carlo estimate of the method's expected error at one signal:
// each trial perturbs the spectrum with pointwise-variance-delta^2 noise,
// runs the recovery multiplier + inverse transform, and measures
//   err^2 = 2 pi * sum (recovered_m - truth_m)^2 spacing_t
// (by Parseval the frequency-side weighted norm in which the theoretical
// error E lives). truth = inverse transform of the operator response times
// the clean spectrum. Trials are independent; the per-trial errors land in a
// preallocated slot array reduced in index order, so serial and parallel
// execution produce byte-identical reports.
SimulationReport monte_carlo_error(const AnyProblem& problem, const Spectrum& signal,
                                   const GaussianPointwise& model, int trials,
                                   std::uint64_t seed, Exec exec = Exec::Parallel,
                                   const SolverConfig& cfg = {});

namespace detail {
// Counter-based Gaussian pair keyed by (seed, trial, index): splitmix64
// avalanche over the packed key feeding a Box-Muller transform.
void normal_pair(std::uint64_t seed, std::uint64_t trial, std::uint64_t index,
                 double& g1, double& g2);
double uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t index);
}  // namespace detail

}  // namespace optirec
