#pragma once

#include <vector>

#include "optirec/noise_sim.hpp"
#include "optirec/optimal_core.hpp"
#include "optirec/parallel.hpp"

namespace optirec {

// Uniform partition of [-A, A] into 2N cells of width A/N, indexed
// interleaved by distance from the origin: cell 2j is [j h, (j+1) h), cell
// 2j+1 its mirror (-(j+1) h, -j h]. That ordering makes "amplitudes
// non-increasing outward" a plain monotonicity test on the index.
struct DiscreteGrid {
    double A = 0;
    int N = 0;
};

struct CellMoments {
    DiscreteGrid grid;
    std::vector<double> mu;  // per-cell integral of |mu|^2, size 2N
    std::vector<double> nu;  // per-cell integral of nu
};

// Per-cell quadratures. Weight pairs are even in t by contract, so both
// cells of a mirror pair integrate the positive representative — mirrors are
// equal to the last bit. Cells are independent; parallel runs write each
// result to its own slot, giving output identical to a serial run.
CellMoments cell_moments(const DiscreteGrid& grid, const WeightPair& pair,
                         const SolverConfig& cfg = {}, Exec exec = Exec::Parallel);

// Value of the discrete adversary: a piecewise-constant class element with
// amplitude tau_j on cell j, observed through exact worst-case noise, forces
// expected squared error at least
//   sum_j delta^2 tau_j^2 / (delta^2 + tau_j^2) * mu_j.
// Admissibility (ConstraintViolation otherwise): tau_j >= 0 and finite,
// non-increasing along the interleaved index, weighted energy
// sum nu_j tau_j^2 <= 1 (tolerance 1e-12). Zero amplitudes are allowed.
double discrete_lower_bound(const CellMoments& moments, const std::vector<double>& tau,
                            double delta);

// Amplitudes read off the extremal profile: cell midpoint values, except the
// innermost mirror pair where the profile peaks and the cell average is used
// (same regularization as the spectrum sampler). The result is rescaled so
// the discrete weighted energy is exactly 1.
std::vector<double> extremal_tau(const OptimalFilter& filter,
                                 const CellMoments& moments,
                                 const SolverConfig& cfg = {});

struct CertificateRow {
    double A = 0;
    int N = 0;
    double bound = 0;   // discrete lower bound on E^2
    double ratio = 0;   // bound / E^2
};

// Runs the discretization ladder at fixed A: for each N, cell moments +
// extremal amplitudes + the bound, reported against the theoretical E^2.
// Ratios sit below 1 and climb toward it as N grows.
std::vector<CertificateRow> certificate(const AnyProblem& problem, double A,
                                        const std::vector<int>& Ns,
                                        const SolverConfig& cfg = {},
                                        Exec exec = Exec::Parallel);

}  // namespace optirec
