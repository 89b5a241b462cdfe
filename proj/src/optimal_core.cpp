#include "optirec/optimal_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "optirec/quadrature.hpp"
#include "optirec/roots.hpp"

namespace optirec {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double OptimalFilter::alpha(double t) const {
    if (std::fabs(t) >= cutoff) return 0.0;
    const double q = problem.pair.inverse_ratio(t) * ratio_at_cutoff;
    return std::clamp(1.0 - q, 0.0, 1.0);
}

double OptimalFilter::extremal(double t) const {
    if (std::fabs(t) >= cutoff) return 0.0;
    // ratio(t)/ratio(cutoff) - 1 >= 0 inside the support; +inf at t = 0.
    const double v = problem.pair.ratio(t) / ratio_at_cutoff - 1.0;
    if (std::isinf(v)) return kInf;
    return problem.delta * std::sqrt(std::max(v, 0.0));
}

double cutoff_integrand(const RecoveryProblem& p, double s, double t) {
    if (!(s > 0.0)) throw DomainError("cutoff integrand requires s > 0");
    return p.pair.inverse_ratio(s) * p.pair.mu_sqrt_nu(t) - p.pair.nu(t);
}

double f_general(const RecoveryProblem& p, double s, const SolverConfig& cfg) {
    if (!(s > 0.0)) throw DomainError("f is defined for s > 0");
    const double inv_ratio_s = p.pair.inverse_ratio(s);
    // Mandatory subdivision points on the weights' effective scale: bracket
    // doubling can push s far past the support of decaying weight pairs, and
    // without them the first quadrature pass would sample past all the mass.
    const double h = p.pair.domain_hint();
    return 2.0 * integrate(
                     [&](double t) {
                         return inv_ratio_s * p.pair.mu_sqrt_nu(t) - p.pair.nu(t);
                     },
                     0.0, s, cfg.quad_rel_tol, cfg.quad_max_depth,
                     {h / 64.0, h / 8.0, h, 8.0 * h, 64.0 * h});
}

OptimalFilter solve_cutoff(const RecoveryProblem& p, const SolverConfig& cfg) {
    if (!(p.delta > 0.0)) throw DomainError("delta must be positive");
    const double target = 1.0 / (p.delta * p.delta);
    const double cutoff =
        solve_increasing([&](double s) { return f_general(p, s, cfg); }, target,
                         1.0, cfg.root_rel_tol, cfg.max_bracket_doublings);
    return OptimalFilter{p, cutoff, p.pair.ratio(cutoff),
                         optimal_error(p, cutoff, cfg)};
}

double optimal_error(const RecoveryProblem& p, double cutoff,
                     const SolverConfig& cfg) {
    if (!(cutoff > 0.0)) throw DomainError("cutoff must be positive");
    const double rho_c = p.pair.ratio(cutoff);
    // |mu|^2 - |mu| sqrt(nu) * rho_c  ==  |mu|^2 * alpha on [0, cutoff],
    // kept in product form so the pole of sqrt(nu)/|mu| never appears.
    const double integral =
        2.0 * integrate(
                  [&](double t) {
                      return p.pair.mu_squared(t) - p.pair.mu_sqrt_nu(t) * rho_c;
                  },
                  0.0, cutoff, cfg.quad_rel_tol, cfg.quad_max_depth);
    return p.delta * std::sqrt(std::max(integral, 0.0));
}

double extremal_norm(const OptimalFilter& f, const SolverConfig& cfg) {
    const WeightPair& pair = f.problem.pair;
    auto g = [&](double t) {
        const double x = f.extremal(t);
        return pair.nu(t) * x * x;
    };
    const double split = f.cutoff / 8.0;
    // t = u^2 near the origin; the transformed integrand extends continuously
    // by 0 at u = 0 (and the open quadrature rule never evaluates there).
    const double inner = integrate([&](double u) { return 2.0 * u * g(u * u); },
                                   0.0, std::sqrt(split), cfg.quad_rel_tol,
                                   cfg.quad_max_depth);
    const double outer = integrate(g, split, f.cutoff, cfg.quad_rel_tol,
                                   cfg.quad_max_depth);
    return 2.0 * (inner + outer);
}

double method_error_bound(const RecoveryProblem& p,
                          const std::function<double(double)>& alpha,
                          const SolverConfig& cfg) {
    const WeightPair& pair = p.pair;
    const double H = pair.domain_hint();

    // esssup of |mu|^2/nu * |1 - alpha|^2 over the scan grid...
    constexpr int kPoints = 65537;
    const double step = 2.0 * H / (kPoints - 1);
    double sup = 0.0;
    for (int j = 0; j < kPoints; ++j) {
        const double t = -H + step * j;
        if (t == 0.0) continue;  // handled by the analytic limit below
        const double rho = pair.ratio(t);
        const double q = 1.0 - alpha(t);
        const double v = (rho * rho) * (q * q);
        if (v > sup) sup = v;
        if (std::isinf(sup)) break;
    }
    // ...plus the limit at the origin: exactly 0 if alpha(0) = 1 (the grid
    // captures the approach), otherwise rho(0)^2 |1-alpha(0)|^2, which is
    // +infinity for every pair with an unbounded ratio.
    const double q0 = 1.0 - alpha(0.0);
    if (q0 != 0.0) {
        const double rho0 = pair.ratio(0.0);
        const double v0 = (rho0 * rho0) * (q0 * q0);
        if (v0 > sup) sup = v0;
    }
    if (std::isinf(sup)) return kInf;

    const double integral =
        integrate(
            [&](double t) {
                const double a = alpha(t);
                return pair.mu_squared(t) * a * a;
            },
            -H, H, cfg.quad_rel_tol, cfg.quad_max_depth, {0.0}) *
        p.delta * p.delta;
    return std::sqrt(sup + integral);
}

}  // namespace optirec
