#include "optirec/applications.hpp"

#include <cmath>
#include <string>

#include "optirec/quadrature.hpp"
#include "optirec/roots.hpp"

namespace optirec {

namespace {

void validate(const DerivativeProblem& p) {
    if (p.r < 1) throw DomainError("derivative problem requires r >= 1");
    if (p.k < 0 || p.k >= p.r)
        throw DomainError("derivative problem requires 0 <= k < r");
    if (!(p.delta > 0.0)) throw DomainError("delta must be positive");
}

void validate(const HeatProblem& p) {
    if (p.r < 1) throw DomainError("heat problem requires r >= 1");
    if (!(p.T > 0.0)) throw DomainError("heat problem requires T > 0");
    if (!(p.delta > 0.0)) throw DomainError("delta must be positive");
}

}  // namespace

WeightPair weight_pair(const DerivativeProblem& p) {
    validate(p);
    return WeightPair::derivative(p.r, p.k);
}

WeightPair weight_pair(const HeatProblem& p) {
    validate(p);
    return WeightPair::heat(p.r, p.T);
}

RecoveryProblem recovery_problem(const DerivativeProblem& p) {
    return RecoveryProblem{weight_pair(p), p.delta};
}

RecoveryProblem recovery_problem(const HeatProblem& p) {
    return RecoveryProblem{weight_pair(p), p.delta};
}

double derivative_cutoff(const DerivativeProblem& p) {
    validate(p);
    const double num = (2.0 * p.r + 1.0) * (p.r + p.k + 1.0);
    const double den = 2.0 * p.delta * p.delta * (p.r - p.k);
    return std::pow(num / den, 1.0 / (2.0 * p.r + 1.0));
}

double derivative_error(const DerivativeProblem& p) {
    validate(p);
    const double n = 2.0 * p.r + 1.0;
    const double lead =
        std::pow(n, (2.0 * p.k + 1.0) / (2.0 * n)) / std::sqrt(2.0 * p.k + 1.0);
    const double base = 2.0 * p.delta * p.delta * (p.r - p.k) / (p.r + p.k + 1.0);
    // E^2 = 2 delta^2 c^(2k+1) (r-k) / ((2k+1)(r+k+1)) with the closed-form
    // cutoff substituted; the base exponent (r-k)/(2r+1) makes E scale as
    // delta^(2(r-k)/(2r+1)).
    return lead * std::pow(base, (p.r - p.k) / n);
}

double derivative_alpha(const DerivativeProblem& p, double t) {
    const double c = derivative_cutoff(p);
    const double a = std::fabs(t);
    if (a >= c) return 0.0;
    return 1.0 - std::pow(a / c, p.r - p.k);
}

double lower_incomplete_gamma(double a, double x) {
    if (!(a > 0.0)) throw DomainError("incomplete gamma requires a > 0");
    if (x < 0.0) throw DomainError("incomplete gamma requires x >= 0");
    if (x == 0.0) return 0.0;
    constexpr double kRelTol = 1e-12;
    const double log_prefix = a * std::log(x) - x;

    if (x < a + 1.0) {
        // gamma(a,x) = x^a e^-x * sum_n x^n / (a (a+1) ... (a+n))
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 1000; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * kRelTol) break;
        }
        return std::exp(log_prefix) * sum;
    }

    // Upper tail by modified Lentz continued fraction, then complement.
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kRelTol) break;
    }
    const double upper = std::exp(log_prefix) * h;
    return std::tgamma(a) - upper;
}

double heat_f(const HeatProblem& p, double s) {
    validate(p);
    if (!(s > 0.0)) throw DomainError("f is defined for s > 0");
    const double x = s * s * p.T;
    double G;  // integral_0^s t^r e^(-t^2 T) dt
    if (p.r == 1) {
        G = -std::expm1(-x) / (2.0 * p.T);
    } else {
        const double shape = (p.r + 1.0) / 2.0;
        G = lower_incomplete_gamma(shape, x) / (2.0 * std::pow(p.T, shape));
    }
    const double n = 2.0 * p.r + 1.0;
    return 2.0 * std::pow(s, p.r) * std::exp(x) * G - 2.0 * std::pow(s, n) / n;
}

double heat_cutoff(const HeatProblem& p, const SolverConfig& cfg) {
    validate(p);
    const double target = 1.0 / (p.delta * p.delta);
    // f grows super-exponentially, so brackets are found in a few steps.
    const double s0 = std::min(1.0, std::pow(p.delta, 2.0 / (2.0 * p.r + 1.0)));
    return solve_increasing([&](double s) { return heat_f(p, s); }, target, s0,
                            cfg.root_rel_tol, cfg.max_bracket_doublings);
}

double heat_alpha_at(const HeatProblem& p, double t, double cutoff) {
    const double a = std::fabs(t);
    if (a >= cutoff) return 0.0;
    const double q = std::pow(a / cutoff, p.r) *
                     std::exp((t * t - cutoff * cutoff) * p.T);
    return std::max(0.0, 1.0 - q);
}

double heat_alpha(const HeatProblem& p, double t, const SolverConfig& cfg) {
    return heat_alpha_at(p, t, heat_cutoff(p, cfg));
}

double heat_error(const HeatProblem& p, const SolverConfig& cfg) {
    const double c = heat_cutoff(p, cfg);
    const double integral =
        2.0 * integrate(
                  [&](double t) {
                      return std::exp(-2.0 * t * t * p.T) * heat_alpha_at(p, t, c);
                  },
                  0.0, c, cfg.quad_rel_tol, cfg.quad_max_depth);
    return p.delta * std::sqrt(integral);
}

}  // namespace optirec
