#pragma once

#include <functional>

#include "optirec/errors.hpp"

namespace optirec {

enum class WeightKind { Derivative, Heat, Custom };

// An even weight pair (nu, |mu|) on the real line: nu defines the signal
// class { x : integral nu|x|^2 <= 1 } and |mu| the modulus of the multiplier
// being recovered. The ratio |mu|/sqrt(nu) must be non-increasing on [0, inf);
// +infinity at t = 0 is a legitimate value (all built-in pairs have it).
//
// Built-in families:
//   derivative(r, k):  nu = t^(2r),  |mu| = |t|^k,  0 <= k < r
//   heat(r, T):        nu = t^(2r),  |mu| = exp(-t^2 T),  T > 0
class WeightPair {
public:
    static WeightPair derivative(int r, int k);
    static WeightPair heat(int r, double T);

    // ratio may be empty, in which case |mu|/sqrt(nu) is formed by guarded
    // division (+infinity when nu > 0 and |mu| = 0 in the inverse direction;
    // pairs whose ratio has a removable 0/0 at the origin should supply the
    // evaluator). The constructor screens monotonicity of the ratio on 4096
    // log-spaced points in [1e-6, domain_hint] and rejects violations.
    static WeightPair custom(std::function<double(double)> abs_mu,
                             std::function<double(double)> nu,
                             std::function<double(double)> ratio,
                             double domain_hint);

    double nu(double t) const;
    double abs_mu(double t) const;
    double mu_squared(double t) const;

    /// |mu(t)| / sqrt(nu(t)); +infinity allowed (and expected at 0).
    double ratio(double t) const;
    /// sqrt(nu(t)) / |mu(t)|; 0 at t = 0 for the built-in pairs.
    double inverse_ratio(double t) const;
    /// |mu(t)| * sqrt(nu(t)), the cancellation-free product the cutoff
    /// integrand needs (|t|^(r+k) and |t|^r e^(-t^2 T) for the built-ins).
    double mu_sqrt_nu(double t) const;

    /// Scale beyond which evaluations are numerically negligible; used for
    /// bracketing, truncated integrals and the worst-case grid scan.
    double domain_hint() const { return domain_hint_; }

    WeightKind kind() const { return kind_; }
    int order_r() const { return r_; }
    int order_k() const { return k_; }
    double heat_time() const { return T_; }

private:
    WeightPair() = default;

    WeightKind kind_ = WeightKind::Custom;
    int r_ = 0;
    int k_ = 0;
    double T_ = 0.0;
    double domain_hint_ = 0.0;
    std::function<double(double)> custom_abs_mu_;
    std::function<double(double)> custom_nu_;
    std::function<double(double)> custom_ratio_;
};

}  // namespace optirec
