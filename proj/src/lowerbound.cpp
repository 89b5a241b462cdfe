#include "optirec/lowerbound.hpp"

#include <cmath>
#include <string>

#include "optirec/applications.hpp"
#include "optirec/errors.hpp"
#include "optirec/quadrature.hpp"

namespace optirec {

namespace {

void validate_grid(const DiscreteGrid& grid) {
    if (!(grid.A > 0.0) || !std::isfinite(grid.A))
        throw DomainError("cell range A must be positive and finite");
    if (grid.N < 1) throw DomainError("cell count N must be at least 1");
}

}  // namespace

CellMoments cell_moments(const DiscreteGrid& grid, const WeightPair& pair,
                         const SolverConfig& cfg, Exec exec) {
    validate_grid(grid);
    const double h = grid.A / grid.N;
    CellMoments m;
    m.grid = grid;
    m.mu.assign(2 * grid.N, 0.0);
    m.nu.assign(2 * grid.N, 0.0);

    const int cap = exec == Exec::Parallel ? thread_cap() : 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(cap)
#endif
    for (int j = 0; j < grid.N; ++j) {
        const double a = j * h;
        const double b = (j + 1) * h;
        const double mu_cell =
            integrate([&](double t) { return pair.mu_squared(t); }, a, b,
                      cfg.quad_rel_tol, cfg.quad_max_depth);
        const double nu_cell = integrate([&](double t) { return pair.nu(t); }, a, b,
                                         cfg.quad_rel_tol, cfg.quad_max_depth);
        m.mu[2 * j] = mu_cell;
        m.mu[2 * j + 1] = mu_cell;
        m.nu[2 * j] = nu_cell;
        m.nu[2 * j + 1] = nu_cell;
    }
    (void)cap;
    return m;
}

double discrete_lower_bound(const CellMoments& moments, const std::vector<double>& tau,
                            double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw DomainError("noise level must be positive and finite");
    const std::size_t cells = moments.mu.size();
    if (tau.size() != cells)
        throw ConstraintViolation("amplitude vector has " + std::to_string(tau.size()) +
                                  " entries, grid has " + std::to_string(cells) +
                                  " cells");
    double energy = 0.0;
    for (std::size_t j = 0; j < cells; ++j) {
        if (!(tau[j] >= 0.0) || !std::isfinite(tau[j]))
            throw ConstraintViolation("amplitudes must be non-negative and finite");
        if (j > 0 && tau[j] > tau[j - 1] * (1.0 + 1e-10) + 1e-300)
            throw ConstraintViolation("amplitudes must be non-increasing outward");
        energy += moments.nu[j] * tau[j] * tau[j];
    }
    if (energy > 1.0 + 1e-12)
        throw ConstraintViolation("weighted energy " + std::to_string(energy) +
                                  " exceeds the class budget 1");

    const double d2 = delta * delta;
    double bound = 0.0;
    for (std::size_t j = 0; j < cells; ++j) {
        const double t2 = tau[j] * tau[j];
        if (t2 == 0.0) continue;
        bound += d2 * t2 / (d2 + t2) * moments.mu[j];
    }
    return bound;
}

std::vector<double> extremal_tau(const OptimalFilter& filter,
                                 const CellMoments& moments,
                                 const SolverConfig& cfg) {
    const DiscreteGrid grid = moments.grid;
    validate_grid(grid);
    const double h = grid.A / grid.N;
    std::vector<double> tau(2 * grid.N, 0.0);

    for (int j = 1; j < grid.N; ++j) {
        const double mid = (j + 0.5) * h;
        const double v = filter.extremal(mid);
        tau[2 * j] = v;
        tau[2 * j + 1] = v;
    }

    // Innermost pair: average over the cell (t = u^2 flattens the pole);
    // nu-weighted RMS fallback when the profile itself is not integrable.
    const auto& pair = filter.problem.pair;
    const double d = filter.problem.delta;
    double center;
    try {
        const double integral = integrate(
            [&](double u) { return 2.0 * u * filter.extremal(u * u); }, 0.0,
            std::sqrt(h), cfg.quad_rel_tol, cfg.quad_max_depth);
        center = integral / h;
        if (!std::isfinite(center)) throw QuadratureFailure("averaged pole not finite");
    } catch (const QuadratureFailure&) {
        const double rc = filter.ratio_at_cutoff;
        const double num = d * d * integrate(
            [&](double t) {
                return std::max(pair.mu_sqrt_nu(t) / rc - pair.nu(t), 0.0);
            },
            0.0, h, cfg.quad_rel_tol, cfg.quad_max_depth);
        const double den = integrate([&](double t) { return pair.nu(t); }, 0.0, h,
                                     cfg.quad_rel_tol, cfg.quad_max_depth);
        center = den > 0.0 ? std::sqrt(num / den) : 0.0;
    }
    tau[0] = center;
    tau[1] = center;

    // Guard against quadrature jitter breaking monotonicity at the seam.
    for (std::size_t j = 1; j < tau.size(); ++j) tau[j] = std::min(tau[j], tau[j - 1]);

    double energy = 0.0;
    for (std::size_t j = 0; j < tau.size(); ++j)
        energy += moments.nu[j] * tau[j] * tau[j];
    if (!(energy > 0.0) || !std::isfinite(energy))
        throw DomainError("extremal amplitudes carry no weighted energy on this grid");
    const double scale = 1.0 / std::sqrt(energy);
    for (auto& t : tau) t *= scale;
    return tau;
}

namespace {

RecoveryProblem to_recovery(const DerivativeProblem& p) { return recovery_problem(p); }
RecoveryProblem to_recovery(const HeatProblem& p) { return recovery_problem(p); }

}  // namespace

std::vector<CertificateRow> certificate(const AnyProblem& problem, double A,
                                        const std::vector<int>& Ns,
                                        const SolverConfig& cfg, Exec exec) {
    if (Ns.empty()) throw DomainError("certificate needs at least one cell count");
    const RecoveryProblem rp =
        std::visit([](const auto& p) { return to_recovery(p); }, problem);
    const OptimalFilter filter = solve_cutoff(rp, cfg);
    const double e2 = filter.error * filter.error;

    std::vector<CertificateRow> rows;
    rows.reserve(Ns.size());
    for (int N : Ns) {
        const DiscreteGrid grid{A, N};
        const CellMoments moments = cell_moments(grid, rp.pair, cfg, exec);
        const std::vector<double> tau = extremal_tau(filter, moments, cfg);
        const double bound = discrete_lower_bound(moments, tau, filter.problem.delta);
        rows.push_back({A, N, bound, bound / e2});
    }
    return rows;
}

}  // namespace optirec
