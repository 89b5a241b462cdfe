#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

#include "optirec/errors.hpp"

namespace optirec {

// Adaptive Gauss-Kronrod 7-15 quadrature. The error estimate |K15 - G7| is
// conservative for the smooth integrands this library produces; intervals are
// bisected recursively until the local estimate clears the tolerance.
namespace detail {

// QUADPACK qk15 constants: positive Kronrod abscissae (descending), Kronrod
// weights, and the embedded 7-point Gauss weights (odd indices + center).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
    double integral;
    double err;
    double resabs;  // estimate of integral |f|, the local noise scale
};

template <class F>
GkEstimate gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    double resabs = kWgk[7] * std::fabs(fc);
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += kWgk[i] * (f1 + f2);
        resabs += kWgk[i] * (std::fabs(f1) + std::fabs(f2));
        if (i % 2 == 1) resg += kWg[i / 2] * (f1 + f2);
    }
    if (!std::isfinite(resk))
        throw QuadratureFailure("non-finite integrand value in [" +
                                std::to_string(a) + ", " + std::to_string(b) + "]");
    return {resk * h, std::fabs((resk - resg) * h), resabs * std::fabs(h)};
}

template <class F>
double adapt(F&& f, double a, double b, double rel_tol, double abs_budget_per_len,
             int depth, int max_depth) {
    const GkEstimate est = gk15(f, a, b);
    const double abs_ok = abs_budget_per_len * (b - a);
    // Third clause: the estimate sits at the rounding noise floor of the
    // integrand's own magnitude — subdividing cannot improve it, the panel
    // is as converged as double precision allows.
    constexpr double kNoiseFloor = 64.0 * 2.220446049250313e-16;
    if (est.err <= rel_tol * std::fabs(est.integral) || est.err <= abs_ok ||
        est.err <= kNoiseFloor * est.resabs)
        return est.integral;
    if (depth >= max_depth)
        throw QuadratureFailure("adaptive refinement exceeded depth " +
                                std::to_string(max_depth) + " on [" +
                                std::to_string(a) + ", " + std::to_string(b) + "]");
    const double c = 0.5 * (a + b);
    return adapt(f, a, c, rel_tol, abs_budget_per_len, depth + 1, max_depth) +
           adapt(f, c, b, rel_tol, abs_budget_per_len, depth + 1, max_depth);
}

}  // namespace detail

// Integral of f over [a, b] to relative tolerance rel_tol. `breaks` lists
// interior points where the integrand has kinks or limits (mandatory
// subdivision points); points outside (a, b) are ignored.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol, int max_depth,
                 std::initializer_list<double> breaks = {}) {
    if (!(b > a)) return 0.0;
    std::vector<double> edges{a};
    for (double p : breaks)
        if (p > a && p < b) edges.push_back(p);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    // First pass sets the absolute floor so that intervals whose true
    // contribution is negligible against the whole do not recurse forever.
    double whole = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        whole += detail::gk15(f, edges[i], edges[i + 1]).integral;
    const double abs_budget_per_len =
        (rel_tol * std::fabs(whole) + 1e-300) / (b - a);

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        total += detail::adapt(f, edges[i], edges[i + 1], rel_tol,
                               abs_budget_per_len, 0, max_depth);
    return total;
}

}  // namespace optirec
