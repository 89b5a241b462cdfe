#pragma once

#include <functional>

#include "optirec/weights.hpp"

namespace optirec {

struct SolverConfig {
    double quad_rel_tol = 1e-10;
    double root_rel_tol = 1e-10;
    int max_bracket_doublings = 200;
    int quad_max_depth = 60;
};

struct RecoveryProblem {
    WeightPair pair;
    double delta;  // noise level: pointwise variance bound delta^2
};

// Solved spectral-cutoff filter. The optimal linear method multiplies the
// observed data by mu(t) * alpha(t) with
//   alpha(t) = (1 - sqrt(nu(t))/|mu(t)| * ratio_at_cutoff)_+ ,
// supported exactly on [-cutoff, cutoff], alpha(0) = 1.
struct OptimalFilter {
    RecoveryProblem problem;
    double cutoff;            // t_delta: unique root of f(s) = delta^-2
    double ratio_at_cutoff;   // |mu(cutoff)| / sqrt(nu(cutoff))
    double error;             // exact worst-case expected error E

    double alpha(double t) const;

    // Extremal class element saturating the worst case: support
    // [-cutoff, cutoff], integral nu*|x|^2 = 1, +infinity at t = 0 for the
    // built-in pairs (integrable pole).
    double extremal(double t) const;
};

// Integrand of the cutoff equation in cancellation-free form:
//   (sqrt(nu(s))/|mu(s)|) * |mu(t)|*sqrt(nu(t)) - nu(t),
// the analytic continuation of (ratio(s)^-1 * ratio(t) - 1) * nu(t) at t = 0.
double cutoff_integrand(const RecoveryProblem& p, double s, double t);

// f(s) = integral of cutoff_integrand over |t| <= s; continuous, increasing,
// f(0+) = 0, f(inf) = inf for the built-in pairs.
double f_general(const RecoveryProblem& p, double s, const SolverConfig& cfg = {});

// Root-solves f(cutoff) = delta^-2 (bracket by doubling from s = 1) and fills
// ratio_at_cutoff and error.
OptimalFilter solve_cutoff(const RecoveryProblem& p, const SolverConfig& cfg = {});

// E = delta * sqrt( integral over |t| <= cutoff of
//                   |mu(t)|^2 * (1 - sqrt(nu)/|mu| * ratio_at_cutoff) dt ),
// the first power of the filter weight under the integral.
double optimal_error(const RecoveryProblem& p, double cutoff,
                     const SolverConfig& cfg = {});

// integral of nu * extremal^2 over the support, evaluated pointwise with a
// u = sqrt(t) substitution near the origin to tame the pole. Equals 1 up to
// quadrature and cutoff-root tolerance.
double extremal_norm(const OptimalFilter& f, const SolverConfig& cfg = {});

// Worst-case expected-error bound of the linear method y -> mu * alpha * y
// for an arbitrary bounded measurable filter weight:
//   sqrt( esssup |mu|^2/nu * |1 - alpha|^2  +  delta^2 * integral |mu alpha|^2 ).
// The esssup is a 65537-point scan of [-domain_hint, domain_hint] plus the
// analytic limit at 0; the integral is truncated at domain_hint. +infinity is
// a first-class return value (e.g. alpha = 0 with an unbounded |mu|^2/nu).
double method_error_bound(const RecoveryProblem& p,
                          const std::function<double(double)>& alpha,
                          const SolverConfig& cfg = {});

}  // namespace optirec
