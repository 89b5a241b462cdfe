#pragma once

#include "optirec/optimal_core.hpp"

namespace optirec {

// Recovery of the k-th derivative from noisy Fourier data of a function with
// ||x^(r)|| <= 1: weight pair nu = t^(2r), |mu| = |t|^k.
struct DerivativeProblem {
    int r;
    int k;
    double delta;
};

// Recovery of the heat evolution at time T from noisy Fourier data of the
// initial condition: weight pair nu = t^(2r), |mu| = exp(-t^2 T).
struct HeatProblem {
    int r;
    double T;
    double delta;
};

WeightPair weight_pair(const DerivativeProblem& p);
WeightPair weight_pair(const HeatProblem& p);
RecoveryProblem recovery_problem(const DerivativeProblem& p);
RecoveryProblem recovery_problem(const HeatProblem& p);

// Closed forms for the derivative family:
//   cutoff = ((2r+1)(r+k+1) / (2 delta^2 (r-k)))^(1/(2r+1))
//   E      = (2r+1)^((2k+1)/(2(2r+1))) / sqrt(2k+1)
//            * (2 delta^2 (r-k)/(r+k+1))^((r-k)/(2(2r+1)))
//   alpha  = (1 - (|t|/cutoff)^(r-k))_+   (|t|: the weights are even)
double derivative_cutoff(const DerivativeProblem& p);
double derivative_error(const DerivativeProblem& p);
double derivative_alpha(const DerivativeProblem& p, double t);

// Lower incomplete gamma integral_0^x u^(a-1) e^-u du for a > 0, x >= 0;
// power series below x = a+1, continued fraction for the upper tail above,
// relative tolerance 1e-12.
double lower_incomplete_gamma(double a, double x);

// Heat family: the cutoff equation reduces to
//   f(s) = 2 s^r e^(s^2 T) G(s) - 2 s^(2r+1)/(2r+1),
//   G(s) = integral_0^s t^r e^(-t^2 T) dt
//        = (1 - e^(-s^2 T)) / (2T)                        for r = 1
//        = gamma((r+1)/2, s^2 T) / (2 T^((r+1)/2))        in general.
double heat_f(const HeatProblem& p, double s);
double heat_cutoff(const HeatProblem& p, const SolverConfig& cfg = {});
// alpha(t) = (1 - (|t|/cutoff)^r * e^((t^2 - cutoff^2) T))_+ , evaluated in
// ratio form so no intermediate overflows.
double heat_alpha(const HeatProblem& p, double t, const SolverConfig& cfg = {});
double heat_alpha_at(const HeatProblem& p, double t, double cutoff);
// E = delta * sqrt( integral over |t| <= cutoff of e^(-2 t^2 T) alpha(t) dt ).
double heat_error(const HeatProblem& p, const SolverConfig& cfg = {});

}  // namespace optirec
