#include "optirec/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace optirec {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Both shift directions coincide for even n: rotate by n/2.
template <class T>
std::vector<T> rotate_half(const std::vector<T>& in) {
    const int n = static_cast<int>(in.size());
    std::vector<T> out(n);
    for (int p = 0; p < n; ++p) out[p] = in[(p + n / 2) % n];
    return out;
}

constexpr std::complex<double> kPhase[4] = {
    {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};  // i^k

}  // namespace

FrequencyGrid::FrequencyGrid(int n_, double freq_max_) : n(n_), freq_max(freq_max_) {
    if (!power_of_two(n) || n < 8)
        throw DomainError("frequency grid size must be a power of two >= 8");
    if (!(freq_max > 0.0)) throw DomainError("freq_max must be positive");
}

namespace detail {

FftPlan::FftPlan(int n) : n_(n) {
    if (!power_of_two(n)) throw DomainError("transform size must be a power of two");
    twiddle_.resize(n / 2);
    for (int k = 0; k < n / 2; ++k)
        twiddle_[k] = std::polar(1.0, -2.0 * std::numbers::pi * k / n);
    bitrev_.assign(n, 0);
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        bitrev_[i] = j;
    }
}

void FftPlan::run(std::complex<double>* a, bool inverse) const {
    for (int i = 0; i < n_; ++i) {
        const int j = bitrev_[i];
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n_; len <<= 1) {
        const int half = len >> 1;
        const int stride = n_ / len;
        for (int start = 0; start < n_; start += len) {
            for (int i = 0; i < half; ++i) {
                std::complex<double> w = twiddle_[i * stride];
                if (inverse) w = std::conj(w);
                const std::complex<double> u = a[start + i];
                const std::complex<double> v = a[start + i + half] * w;
                a[start + i] = u + v;
                a[start + i + half] = u - v;
            }
        }
    }
}

}  // namespace detail

double hermitian_residue(const Spectrum& s) {
    const int n = s.grid.n;
    double peak = 0.0, worst = 0.0;
    for (int j = 0; j < n; ++j) peak = std::max(peak, std::abs(s.values[j]));
    for (int j = 0; j < n; ++j) {
        const auto d = s.values[j] - std::conj(s.values[(n - j) % n]);
        worst = std::max(worst, std::abs(d));
    }
    return worst / std::max(1.0, peak);
}

bool check_hermitian(const Spectrum& s, double tol) {
    return hermitian_residue(s) <= tol;
}

Spectrum forward_transform(const SignalSamples& x) {
    const int n = x.n;
    if (!power_of_two(n) || n < 8)
        throw DomainError("signal length must be a power of two >= 8");
    if (static_cast<int>(x.values.size()) != n)
        throw DomainError("signal length does not match sample count");
    if (!(x.t_max > 0.0)) throw DomainError("t_max must be positive");

    Spectrum s;
    s.grid = FrequencyGrid(n, std::numbers::pi * n / (2.0 * x.t_max));
    std::vector<std::complex<double>> buf(n);
    for (int m = 0; m < n; ++m) buf[m] = x.values[(m + n / 2) % n];
    detail::FftPlan plan(n);
    plan.forward(buf.data());
    buf = rotate_half(buf);
    const double dt = x.spacing();
    s.values.resize(n);
    for (int j = 0; j < n; ++j) s.values[j] = buf[j] * dt;
    s.hermitian = true;  // real input
    return s;
}

SignalSamples inverse_transform(const Spectrum& s) {
    const int n = s.grid.n;
    if (static_cast<int>(s.values.size()) != n)
        throw DomainError("spectrum length does not match grid");
    std::vector<std::complex<double>> buf = rotate_half(s.values);
    detail::FftPlan plan(n);
    plan.inverse(buf.data());
    buf = rotate_half(buf);

    SignalSamples x;
    x.n = n;
    x.t_max = std::numbers::pi * n / (2.0 * s.grid.freq_max);
    const double scale = s.grid.spacing() / (2.0 * std::numbers::pi);
    double peak = 0.0, worst_imag = 0.0;
    x.values.resize(n);
    for (int m = 0; m < n; ++m) {
        const std::complex<double> v = buf[(m + 0) % n] * scale;
        x.values[m] = v.real();
        peak = std::max(peak, std::abs(v));
        worst_imag = std::max(worst_imag, std::fabs(v.imag()));
    }
    x.imag_residue = worst_imag / std::max(1.0, peak);
    if (s.hermitian && x.imag_residue > 1e-9)
        throw HermitianViolation("inverse of hermitian-flagged spectrum has "
                                 "imaginary residue " + std::to_string(x.imag_residue));
    return x;
}

std::vector<std::complex<double>> recovery_multiplier(const FrequencyGrid& grid,
                                                      const DerivativeProblem& p) {
    const double c = derivative_cutoff(p);
    if (c >= grid.freq_max)
        throw GridTooNarrow("filter support [-" + std::to_string(c) + ", " +
                            std::to_string(c) + "] exceeds freq_max " +
                            std::to_string(grid.freq_max));
    std::vector<std::complex<double>> m(grid.n);
    const std::complex<double> ik = kPhase[p.k & 3];
    for (int j = 0; j < grid.n; ++j) {
        const double w = grid.frequency(j);
        const double a = std::fabs(w);
        const double alpha = a >= c ? 0.0 : 1.0 - std::pow(a / c, p.r - p.k);
        m[j] = ik * std::pow(w, p.k) * alpha;
    }
    return m;
}

std::vector<std::complex<double>> recovery_multiplier(const FrequencyGrid& grid,
                                                      const HeatProblem& p,
                                                      const SolverConfig& cfg) {
    const double c = heat_cutoff(p, cfg);
    if (c >= grid.freq_max)
        throw GridTooNarrow("filter support [-" + std::to_string(c) + ", " +
                            std::to_string(c) + "] exceeds freq_max " +
                            std::to_string(grid.freq_max));
    std::vector<std::complex<double>> m(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        const double w = grid.frequency(j);
        m[j] = std::exp(-w * w * p.T) * heat_alpha_at(p, w, c);
    }
    return m;
}

std::vector<std::complex<double>> operator_multiplier(const FrequencyGrid& grid,
                                                      const DerivativeProblem& p) {
    std::vector<std::complex<double>> m(grid.n);
    const std::complex<double> ik = kPhase[p.k & 3];
    for (int j = 0; j < grid.n; ++j)
        m[j] = ik * std::pow(grid.frequency(j), p.k);
    return m;
}

std::vector<std::complex<double>> operator_multiplier(const FrequencyGrid& grid,
                                                      const HeatProblem& p) {
    std::vector<std::complex<double>> m(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        const double w = grid.frequency(j);
        m[j] = std::exp(-w * w * p.T);
    }
    return m;
}

namespace {

SignalSamples multiply_and_invert(const Spectrum& observed,
                                  const std::vector<std::complex<double>>& mult) {
    Spectrum filtered;
    filtered.grid = observed.grid;
    filtered.hermitian = observed.hermitian;  // responses are conj-symmetric
    filtered.values.resize(observed.grid.n);
    for (int j = 0; j < observed.grid.n; ++j)
        filtered.values[j] = observed.values[j] * mult[j];
    return inverse_transform(filtered);
}

}  // namespace

SignalSamples apply_recovery(const Spectrum& observed, const DerivativeProblem& p) {
    return multiply_and_invert(observed, recovery_multiplier(observed.grid, p));
}

SignalSamples apply_recovery(const Spectrum& observed, const HeatProblem& p,
                             const SolverConfig& cfg) {
    return multiply_and_invert(observed, recovery_multiplier(observed.grid, p, cfg));
}

}  // namespace optirec
