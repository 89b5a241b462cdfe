#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "optirec/errors.hpp"

namespace optirec {

// Solves g(s) = target for a continuous increasing g on (0, inf).
//
// The bracket starts at s0 and doubles (or halves) until the target is
// enclosed; BracketFailure is raised after max_doublings steps in either
// direction (g may be bounded below the target for custom weight pairs).
// Inside the bracket, secant proposals accelerate plain bisection; a proposal
// too close to an endpoint falls back to the midpoint. Convergence is judged
// on the residual |g(s) - target| <= 4*rel_tol*|target|, so the root respects
// the caller's residual-based acceptance checks directly.
template <class F>
double solve_increasing(F&& g, double target, double s0, double rel_tol,
                        int max_doublings) {
    double lo = s0, hi = s0;
    double glo = g(lo), ghi = glo;
    if (glo > target) {
        for (int i = 0;; ++i) {
            if (i >= max_doublings)
                throw BracketFailure("no lower bracket for target " +
                                     std::to_string(target) + " after " +
                                     std::to_string(max_doublings) + " halvings");
            hi = lo;
            ghi = glo;
            lo *= 0.5;
            glo = g(lo);
            if (glo <= target) break;
        }
    } else {
        for (int i = 0;; ++i) {
            if (ghi >= target) break;
            if (i >= max_doublings)
                throw BracketFailure("target " + std::to_string(target) +
                                     " not reached after " +
                                     std::to_string(max_doublings) +
                                     " doublings; function appears bounded");
            lo = hi;
            glo = ghi;
            hi *= 2.0;
            ghi = g(hi);
        }
    }

    const double res_tol = 4.0 * rel_tol * std::fabs(target);
    if (std::fabs(glo - target) <= res_tol) return lo;
    if (std::fabs(ghi - target) <= res_tol) return hi;

    double best = lo;
    double best_res = std::fabs(glo - target);
    for (int it = 0; it < 200; ++it) {
        const double width = hi - lo;
        double mid;
        if (ghi > glo) {
            mid = lo + (target - glo) / (ghi - glo) * width;
            if (!(mid > lo + 0.01 * width && mid < hi - 0.01 * width))
                mid = lo + 0.5 * width;
        } else {
            mid = lo + 0.5 * width;
        }
        const double gm = g(mid);
        const double res = std::fabs(gm - target);
        if (res < best_res) {
            best = mid;
            best_res = res;
        }
        if (res <= res_tol) return mid;
        if (gm < target) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
        if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() * hi)
            return best;  // bracket exhausted at machine precision
    }
    return best;
}

}  // namespace optirec
