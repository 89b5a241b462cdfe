#include "optirec/weights.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace optirec {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

WeightPair WeightPair::derivative(int r, int k) {
    if (r < 1) throw DomainError("derivative pair requires r >= 1");
    if (k < 0 || k >= r) throw DomainError("derivative pair requires 0 <= k < r");
    WeightPair p;
    p.kind_ = WeightKind::Derivative;
    p.r_ = r;
    p.k_ = k;
    // Covers cutoffs across delta in [0.01, 10] for r <= 5 with ample margin.
    p.domain_hint_ = 64.0;
    return p;
}

WeightPair WeightPair::heat(int r, double T) {
    if (r < 1) throw DomainError("heat pair requires r >= 1");
    if (!(T > 0.0)) throw DomainError("heat pair requires T > 0");
    WeightPair p;
    p.kind_ = WeightKind::Heat;
    p.r_ = r;
    p.T_ = T;
    // exp(-2 t^2 T) underflows every integrand well inside this range.
    p.domain_hint_ = std::max(8.0, 5.0 / std::sqrt(T));
    return p;
}

WeightPair WeightPair::custom(std::function<double(double)> abs_mu,
                              std::function<double(double)> nu,
                              std::function<double(double)> ratio,
                              double domain_hint) {
    if (!abs_mu || !nu) throw DomainError("custom pair requires |mu| and nu evaluators");
    if (!(domain_hint > 0.0)) throw DomainError("custom pair requires a positive domain_hint");
    WeightPair p;
    p.kind_ = WeightKind::Custom;
    p.domain_hint_ = domain_hint;
    p.custom_abs_mu_ = std::move(abs_mu);
    p.custom_nu_ = std::move(nu);
    p.custom_ratio_ = std::move(ratio);

    // Monotonicity screen: the optimality theory needs |mu|/sqrt(nu)
    // non-increasing; sample log-spaced points and reject clear violations.
    constexpr int kProbes = 4096;
    const double lo = 1e-6, hi = p.domain_hint_;
    const double step = std::log(hi / lo) / (kProbes - 1);
    double prev = p.ratio(lo);
    for (int i = 1; i < kProbes; ++i) {
        const double t = lo * std::exp(step * i);
        const double cur = p.ratio(t);
        if (std::isnan(cur))
            throw DomainError("custom ratio is NaN at t = " + std::to_string(t));
        if (std::isfinite(prev) && cur > prev * (1.0 + 1e-10) + 1e-10 * std::fabs(prev))
            throw DomainError("custom ratio increases near t = " + std::to_string(t) +
                              "; |mu|/sqrt(nu) must be non-increasing on [0, inf)");
        prev = cur;
    }
    return p;
}

double WeightPair::nu(double t) const {
    switch (kind_) {
        case WeightKind::Derivative:
        case WeightKind::Heat:
            return std::pow(std::fabs(t), 2 * r_);
        case WeightKind::Custom:
            return custom_nu_(t);
    }
    return 0.0;
}

double WeightPair::abs_mu(double t) const {
    switch (kind_) {
        case WeightKind::Derivative:
            return std::pow(std::fabs(t), k_);
        case WeightKind::Heat:
            return std::exp(-t * t * T_);
        case WeightKind::Custom:
            return custom_abs_mu_(t);
    }
    return 0.0;
}

double WeightPair::mu_squared(double t) const {
    const double m = abs_mu(t);
    return m * m;
}

double WeightPair::ratio(double t) const {
    const double a = std::fabs(t);
    switch (kind_) {
        case WeightKind::Derivative:
            // |t|^(k-r), k < r: +infinity at the origin.
            return a == 0.0 ? kInf : std::pow(a, k_ - r_);
        case WeightKind::Heat:
            return a == 0.0 ? kInf : std::exp(-t * t * T_) / std::pow(a, r_);
        case WeightKind::Custom: {
            if (custom_ratio_) return custom_ratio_(t);
            const double m = custom_abs_mu_(t);
            const double n = custom_nu_(t);
            if (n == 0.0) return m == 0.0 ? std::numeric_limits<double>::quiet_NaN() : kInf;
            return m / std::sqrt(n);
        }
    }
    return 0.0;
}

double WeightPair::inverse_ratio(double t) const {
    const double a = std::fabs(t);
    switch (kind_) {
        case WeightKind::Derivative:
            return std::pow(a, r_ - k_);
        case WeightKind::Heat:
            return std::pow(a, r_) * std::exp(t * t * T_);
        case WeightKind::Custom: {
            // Documented guard: +infinity when nu > 0 and |mu| = 0.
            const double rho = ratio(t);
            if (rho == 0.0) return kInf;
            if (std::isinf(rho)) return 0.0;
            return 1.0 / rho;
        }
    }
    return 0.0;
}

double WeightPair::mu_sqrt_nu(double t) const {
    const double a = std::fabs(t);
    switch (kind_) {
        case WeightKind::Derivative:
            return std::pow(a, r_ + k_);
        case WeightKind::Heat:
            return std::pow(a, r_) * std::exp(-t * t * T_);
        case WeightKind::Custom:
            return custom_abs_mu_(t) * std::sqrt(custom_nu_(t));
    }
    return 0.0;
}

}  // namespace optirec
