#include "optirec/noise_sim.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "optirec/errors.hpp"
#include "optirec/quadrature.hpp"

namespace optirec {

namespace detail {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// 53-bit mantissa, offset half a step: lands strictly inside (0, 1).
double to_unit(std::uint64_t z) {
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t key(std::uint64_t seed, std::uint64_t trial, std::uint64_t index) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ trial);
    h = mix64(h ^ index);
    return h;
}

}  // namespace

double uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t index) {
    return to_unit(key(seed, trial, index));
}

void normal_pair(std::uint64_t seed, std::uint64_t trial, std::uint64_t index,
                 double& g1, double& g2) {
    const std::uint64_t h = key(seed, trial, index);
    const double u1 = to_unit(h);
    const double u2 = to_unit(mix64(h));
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    g1 = radius * std::cos(angle);
    g2 = radius * std::sin(angle);
}

}  // namespace detail

Spectrum sample_noisy_spectrum(const Spectrum& clean, const GaussianPointwise& model,
                               std::uint64_t seed, std::uint64_t trial) {
    const int n = clean.grid.n;
    if (static_cast<int>(clean.values.size()) != n || n < 8)
        throw DomainError("spectrum length does not match grid");
    if (!(model.delta >= 0.0) || !std::isfinite(model.delta))
        throw DomainError("noise level must be finite and non-negative");

    Spectrum out = clean;
    const double d = model.delta;
    const double half_scale = d / std::numbers::sqrt2;
    double g1 = 0.0, g2 = 0.0;
    // Positive-frequency bins get complex draws, mirrors their conjugates;
    // total variance per bin is d^2 split evenly over the two components.
    for (int j = n / 2 + 1; j < n; ++j) {
        detail::normal_pair(seed, trial, static_cast<std::uint64_t>(j), g1, g2);
        const std::complex<double> z(half_scale * g1, half_scale * g2);
        out.values[j] += z;
        out.values[n - j] += std::conj(z);
    }
    // Self-conjugate bins (origin and the -freq_max edge) stay real.
    detail::normal_pair(seed, trial, static_cast<std::uint64_t>(n / 2), g1, g2);
    out.values[n / 2] += d * g1;
    detail::normal_pair(seed, trial, 0, g1, g2);
    out.values[0] += d * g1;
    return out;
}

EtaDistribution::EtaDistribution(std::vector<double> tau, std::vector<int> signs,
                                 double delta)
    : tau_(std::move(tau)), signs_(std::move(signs)), delta_(delta) {
    const int m = static_cast<int>(tau_.size());
    if (m == 0) throw DomainError("staircase distribution needs at least one cell");
    if (signs_.size() != tau_.size())
        throw DomainError("signs and amplitudes must have equal length");
    if (!(delta_ > 0.0) || !std::isfinite(delta_))
        throw DomainError("noise level must be positive and finite");
    for (int j = 0; j < m; ++j) {
        if (!(tau_[j] > 0.0) || !std::isfinite(tau_[j]))
            throw DomainError("amplitudes must be positive and finite");
        if (j > 0 && tau_[j] > tau_[j - 1] * (1.0 + 1e-12))
            throw DomainError("amplitudes must be non-increasing");
        if (signs_[j] != 1 && signs_[j] != -1)
            throw DomainError("signs must be +1 or -1");
    }

    const double d2 = delta_ * delta_;
    value_.resize(m);
    for (int j = 0; j < m; ++j) {
        const double t2 = tau_[j] * tau_[j];
        // tau_j / (1 - p_j), with 1 - p_j expanded to avoid cancellation.
        value_[j] = signs_[j] * (d2 + t2) / tau_[j];
    }
    // Every level probability in cancellation-free form, so that partial sums
    // of the table reproduce p_j and 1 - p_j to full precision even when the
    // amplitudes span many decades:
    //   p_l - p_(l-1) = d^2 (tau_(l-1)^2 - tau_l^2)
    //                   / ((d^2 + tau_l^2)(d^2 + tau_(l-1)^2)).
    probs_.resize(m + 1);
    probs_[0] = d2 / (d2 + tau_[0] * tau_[0]);
    for (int l = 1; l < m; ++l) {
        const double lo = tau_[l] * tau_[l];
        const double hi = tau_[l - 1] * tau_[l - 1];
        probs_[l] = d2 * (hi - lo) / ((d2 + lo) * (d2 + hi));
    }
    const double last = tau_[m - 1] * tau_[m - 1];
    probs_[m] = last / (d2 + last);
}

std::vector<double> EtaDistribution::level_values(int level) const {
    const int m = cells();
    if (level < 0 || level > m) throw DomainError("level out of range");
    std::vector<double> v(m, 0.0);
    for (int i = 0; i < level; ++i) v[i] = value_[i];
    return v;
}

std::vector<double> EtaDistribution::mean() const {
    const int m = cells();
    std::vector<double> out(m);
    for (int i = 0; i < m; ++i) {
        double tail = 0.0;  // probability that cell i is switched on
        for (int l = i + 1; l <= m; ++l) tail += probs_[l];
        out[i] = value_[i] * tail;
    }
    return out;
}

std::vector<double> EtaDistribution::variance() const {
    const int m = cells();
    std::vector<double> out(m);
    for (int i = 0; i < m; ++i) {
        // head + tail == 1; both accumulated as positive sums so the product
        // keeps full relative precision at either extreme.
        double tail = 0.0;
        for (int l = i + 1; l <= m; ++l) tail += probs_[l];
        double head = 0.0;
        for (int l = 0; l <= i; ++l) head += probs_[l];
        out[i] = value_[i] * value_[i] * tail * head;
    }
    return out;
}

std::vector<double> EtaDistribution::sample(std::uint64_t seed,
                                            std::uint64_t trial) const {
    const double u = detail::uniform01(seed, trial, 0);
    double acc = 0.0;
    const int m = cells();
    for (int l = 0; l <= m; ++l) {
        acc += probs_[l];
        if (u <= acc) return level_values(l);
    }
    return level_values(m);
}

EtaDistribution eta_distribution(std::vector<double> tau, std::vector<int> signs,
                                 double delta) {
    return EtaDistribution(std::move(tau), std::move(signs), delta);
}

Spectrum extremal_spectrum(const OptimalFilter& filter, const FrequencyGrid& grid,
                           const SolverConfig& cfg) {
    const int n = grid.n;
    const double h = grid.spacing();
    Spectrum s;
    s.grid = grid;
    s.hermitian = true;  // real, even signal
    s.values.resize(n);
    for (int j = 0; j < n; ++j) {
        if (j == n / 2) continue;
        s.values[j] = filter.extremal(grid.frequency(j));
    }

    // Origin bin: the profile peaks (often diverges) at 0, so the sample is
    // replaced by its average over the bin's cell. Substituting t = u^2
    // flattens the integrable pole.
    double center;
    const auto& pair = filter.problem.pair;
    const double d = filter.problem.delta;
    try {
        const double upper = std::sqrt(0.5 * h);
        const double integral = integrate(
            [&](double u) { return 2.0 * u * filter.extremal(u * u); }, 0.0, upper,
            cfg.quad_rel_tol, cfg.quad_max_depth);
        center = integral / (0.5 * h);
        if (!std::isfinite(center)) throw QuadratureFailure("averaged pole not finite");
    } catch (const QuadratureFailure&) {
        // Pole too strong for a plain average: use the nu-weighted RMS value,
        // which preserves the cell's weighted-norm contribution and is finite
        // whenever the class integral is.
        const double rc = filter.ratio_at_cutoff;
        const double num = d * d * integrate(
            [&](double t) {
                return std::max(pair.mu_sqrt_nu(t) / rc - pair.nu(t), 0.0);
            },
            0.0, 0.5 * h, cfg.quad_rel_tol, cfg.quad_max_depth);
        const double den =
            integrate([&](double t) { return pair.nu(t); }, 0.0, 0.5 * h,
                      cfg.quad_rel_tol, cfg.quad_max_depth);
        center = den > 0.0 ? std::sqrt(num / den) : 0.0;
    }
    s.values[n / 2] = center;
    return s;
}

Spectrum class_spectrum(const SignalSamples& x) {
    Spectrum s = forward_transform(x);
    const double scale = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (auto& v : s.values) v *= scale;
    return s;
}

double class_norm(const Spectrum& x, const WeightPair& pair) {
    const int n = x.grid.n;
    if (static_cast<int>(x.values.size()) != n)
        throw DomainError("spectrum length does not match grid");
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double nu = pair.nu(x.grid.frequency(j));
        if (nu == 0.0) continue;
        acc += nu * std::norm(x.values[j]);
    }
    return acc * x.grid.spacing();
}

void normalize_to_class(Spectrum& x, const WeightPair& pair, double target) {
    if (!(target > 0.0)) throw DomainError("target norm must be positive");
    const double cn = class_norm(x, pair);
    if (!(cn > 0.0) || !std::isfinite(cn))
        throw DomainError("cannot normalize: weighted norm is not positive finite");
    const double scale = std::sqrt(target / cn);
    for (auto& v : x.values) v *= scale;
}

namespace {

std::vector<std::complex<double>> rec_mult(const FrequencyGrid& g,
                                           const DerivativeProblem& p,
                                           const SolverConfig&) {
    return recovery_multiplier(g, p);
}
std::vector<std::complex<double>> rec_mult(const FrequencyGrid& g,
                                           const HeatProblem& p,
                                           const SolverConfig& cfg) {
    return recovery_multiplier(g, p, cfg);
}
double closed_error(const DerivativeProblem& p, const SolverConfig&) {
    return derivative_error(p);
}
double closed_error(const HeatProblem& p, const SolverConfig& cfg) {
    return heat_error(p, cfg);
}

}  // namespace

SimulationReport monte_carlo_error(const AnyProblem& problem, const Spectrum& signal,
                                   const GaussianPointwise& model, int trials,
                                   std::uint64_t seed, Exec exec,
                                   const SolverConfig& cfg) {
    if (trials < 100)
        throw InsufficientTrials("need at least 100 trials, got " +
                                 std::to_string(trials));
    const FrequencyGrid grid = signal.grid;
    const int n = grid.n;
    if (static_cast<int>(signal.values.size()) != n || n < 8)
        throw DomainError("spectrum length does not match grid");
    if (!(model.delta >= 0.0) || !std::isfinite(model.delta))
        throw DomainError("noise level must be finite and non-negative");

    const auto rec =
        std::visit([&](const auto& p) { return rec_mult(grid, p, cfg); }, problem);
    const auto op =
        std::visit([&](const auto& p) { return operator_multiplier(grid, p); },
                   problem);

    Spectrum response;
    response.grid = grid;
    response.hermitian = signal.hermitian;
    response.values.resize(n);
    for (int j = 0; j < n; ++j) response.values[j] = op[j] * signal.values[j];
    const SignalSamples truth = inverse_transform(response);

    const detail::FftPlan plan(n);
    const double dt = truth.spacing();
    const double inv_scale = grid.spacing() / (2.0 * std::numbers::pi);
    const double two_pi = 2.0 * std::numbers::pi;

    // Error of one perturbed recovery against the exact operator response,
    // measured in the (2 pi-weighted) time-domain square norm. Depends only
    // on the trial index, never on thread layout.
    auto one_trial = [&](int trial, std::vector<std::complex<double>>& work) {
        const Spectrum noisy = sample_noisy_spectrum(signal, model, seed,
                                                     static_cast<std::uint64_t>(trial));
        for (int p = 0; p < n; ++p) {
            const int j = (p + n / 2) % n;
            work[p] = noisy.values[j] * rec[j];
        }
        plan.inverse(work.data());
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            const double xm = work[(m + n / 2) % n].real() * inv_scale;
            const double dd = xm - truth.values[m];
            acc += dd * dd;
        }
        return two_pi * acc * dt;
    };

    std::vector<double> errsq(trials);
    const int cap = exec == Exec::Parallel ? thread_cap() : 1;
    (void)cap;
#ifdef _OPENMP
    if (cap > 1) {
#pragma omp parallel num_threads(cap)
        {
            std::vector<std::complex<double>> work(n);
#pragma omp for schedule(static)
            for (int i = 0; i < trials; ++i) errsq[i] = one_trial(i, work);
        }
    } else
#endif
    {
        std::vector<std::complex<double>> work(n);
        for (int i = 0; i < trials; ++i) errsq[i] = one_trial(i, work);
    }

    // Fixed-order reduction over the slot array: identical bytes for any
    // thread count.
    double mean = 0.0, m2 = 0.0;
    for (int i = 0; i < trials; ++i) {
        const double d = errsq[i] - mean;
        mean += d / (i + 1);
        m2 += d * (errsq[i] - mean);
    }
    const double var = trials > 1 ? m2 / (trials - 1) : 0.0;

    SimulationReport report;
    report.problem = problem;
    report.trials = trials;
    report.seed = seed;
    report.grid = grid;
    report.empirical_rmse = std::sqrt(mean);
    const double se_mean = std::sqrt(var / trials);
    report.rmse_stderr =
        report.empirical_rmse > 0.0 ? se_mean / (2.0 * report.empirical_rmse) : 0.0;
    report.theoretical_error =
        std::visit([&](const auto& p) { return closed_error(p, cfg); }, problem);
    return report;
}

}  // namespace optirec
