#pragma once

#include <complex>
#include <vector>

#include "optirec/applications.hpp"

namespace optirec {

// Conventions, fixed project-wide:
//   transform:  X(w) = integral x(t) e^(-i w t) dt
//   inversion:  x(t) = (1/2pi) integral X(w) e^(+i w t) dw
//   Parseval:   ||x||^2 = (1/2pi) integral |X|^2 dw
// Grids are uniform and centered; n is a power of two so index n/2 is exactly
// the origin. Time and frequency grids pair through freq_max = pi n / (2 t_max)
// (i.e. spacing_t * spacing_w = 2 pi / n), which makes the discrete transforms
// exact inverses of each other.

struct FrequencyGrid {
    int n = 0;          // power of two, >= 8
    double freq_max = 0;

    FrequencyGrid() = default;
    FrequencyGrid(int n_, double freq_max_);

    double spacing() const { return 2.0 * freq_max / n; }
    double frequency(int j) const { return (j - n / 2) * spacing(); }
};

struct Spectrum {
    FrequencyGrid grid;
    std::vector<std::complex<double>> values;  // size grid.n, index j at frequency(j)
    bool hermitian = false;  // asserts values(-w) = conj(values(w))
};

struct SignalSamples {
    int n = 0;
    double t_max = 0;
    std::vector<double> values;  // size n, sample m at time (m - n/2) * spacing
    double imag_residue = 0.0;   // diagnostic from the inverse transform

    double spacing() const { return 2.0 * t_max / n; }
    double time(int m) const { return (m - n / 2) * spacing(); }
};

// Largest |Im(values(-w) - conj(values(w)))|-style asymmetry, relative to the
// peak magnitude (floor 1).
double hermitian_residue(const Spectrum& s);
bool check_hermitian(const Spectrum& s, double tol = 1e-9);

// Riemann approximation of the transform on the implied frequency grid
// (freq_max = pi n / (2 t_max)). Real input makes the result hermitian.
Spectrum forward_transform(const SignalSamples& x);

// Inverse on the implied time grid. With the hermitian flag set, an imaginary
// residue above 1e-9 (relative to peak, floor 1) raises HermitianViolation;
// below it, the residue is discarded and recorded in imag_residue.
SignalSamples inverse_transform(const Spectrum& s);

// The recovery method's frequency response mu(w) * alpha(w): (iw)^k alpha(w)
// for the derivative problem, e^(-w^2 T) alpha(w) for the heat problem.
// Raises GridTooNarrow when the filter support [-cutoff, cutoff] does not fit
// inside the grid.
std::vector<std::complex<double>> recovery_multiplier(
    const FrequencyGrid& grid, const DerivativeProblem& p);
std::vector<std::complex<double>> recovery_multiplier(
    const FrequencyGrid& grid, const HeatProblem& p,
    const SolverConfig& cfg = {});

// The plain operator response mu(w) without the filter: (iw)^k, e^(-w^2 T).
std::vector<std::complex<double>> operator_multiplier(
    const FrequencyGrid& grid, const DerivativeProblem& p);
std::vector<std::complex<double>> operator_multiplier(
    const FrequencyGrid& grid, const HeatProblem& p);

// Multiplies the observed spectrum by the recovery response and inverts:
// the optimal estimate of the k-th derivative / heat evolution in time.
SignalSamples apply_recovery(const Spectrum& observed, const DerivativeProblem& p);
SignalSamples apply_recovery(const Spectrum& observed, const HeatProblem& p,
                             const SolverConfig& cfg = {});

namespace detail {
// Iterative radix-2 transform over pre-shifted storage; forward applies
// e^(-2pi i jk/n). Twiddles come from a table built per call site.
class FftPlan {
public:
    explicit FftPlan(int n);
    int size() const { return n_; }
    void forward(std::complex<double>* a) const { run(a, false); }
    void inverse(std::complex<double>* a) const { run(a, true); }  // unscaled

private:
    void run(std::complex<double>* a, bool inverse) const;
    int n_;
    std::vector<std::complex<double>> twiddle_;  // e^(-2pi i k/n), k < n/2
    std::vector<int> bitrev_;
};
}  // namespace detail

}  // namespace optirec
