#include <cmath>
#include <random>

#include "doctest.h"
#include "optirec/lowerbound.hpp"

using namespace optirec;

namespace {

const double kCut = 1.4422495703074084;   // cutoff for r=1, k=0, delta=1
const double kErr = 1.2009369551760027;   // optimal error for the same problem

}  // namespace

TEST_SUITE("lowerbound") {

TEST_CASE("cell moments against closed forms") {
    const WeightPair pair = WeightPair::derivative(1, 0);
    const CellMoments m = cell_moments(DiscreteGrid{2.0, 2}, pair);
    REQUIRE(m.mu.size() == 4);
    // |mu|^2 = 1: each cell of width 1 integrates to 1
    CHECK(m.mu[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.mu[2] == doctest::Approx(1.0).epsilon(1e-12));
    // nu = t^2 over [0,1) and [1,2)
    CHECK(m.nu[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(m.nu[2] == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
    // mirror cells are exactly equal
    CHECK(m.mu[1] == m.mu[0]);
    CHECK(m.nu[1] == m.nu[0]);
    CHECK(m.mu[3] == m.mu[2]);
    CHECK(m.nu[3] == m.nu[2]);
}

TEST_CASE("refinement preserves totals") {
    const WeightPair pair = WeightPair::heat(2, 0.5);
    const double A = 3.0;
    const CellMoments coarse = cell_moments(DiscreteGrid{A, 8}, pair);
    const CellMoments fine = cell_moments(DiscreteGrid{A, 16}, pair);
    for (int j = 0; j < 8; ++j) {
        CHECK(fine.mu[4 * j] + fine.mu[4 * j + 2]
              == doctest::Approx(coarse.mu[2 * j]).epsilon(1e-12));
        CHECK(fine.nu[4 * j] + fine.nu[4 * j + 2]
              == doctest::Approx(coarse.nu[2 * j]).epsilon(1e-12));
    }
    double total_nu = 0.0;
    for (double v : coarse.nu) total_nu += v;
    // integral of t^4 over [-3, 3]
    CHECK(total_nu == doctest::Approx(2.0 * std::pow(A, 5) / 5.0).epsilon(1e-12));
}

TEST_CASE("zero amplitudes give a zero bound") {
    const WeightPair pair = WeightPair::derivative(1, 0);
    const CellMoments m = cell_moments(DiscreteGrid{2.0, 4}, pair);
    CHECK(discrete_lower_bound(m, std::vector<double>(8, 0.0), 1.0) == 0.0);
}

TEST_CASE("inadmissible amplitudes are rejected") {
    const WeightPair pair = WeightPair::derivative(1, 0);
    const CellMoments m = cell_moments(DiscreteGrid{2.0, 2}, pair);
    // energy above the budget
    CHECK_THROWS_AS(discrete_lower_bound(m, {1.0, 1.0, 1.0, 1.0}, 1.0),
                    ConstraintViolation);
    // increasing outward
    CHECK_THROWS_AS(discrete_lower_bound(m, {0.1, 0.1, 0.2, 0.2}, 1.0),
                    ConstraintViolation);
    // negative
    CHECK_THROWS_AS(discrete_lower_bound(m, {0.1, -0.1, 0.0, 0.0}, 1.0),
                    ConstraintViolation);
    // wrong length
    CHECK_THROWS_AS(discrete_lower_bound(m, {0.1, 0.1}, 1.0), ConstraintViolation);
    // bad noise level
    CHECK_THROWS_AS(discrete_lower_bound(m, {0.1, 0.1, 0.0, 0.0}, 0.0), DomainError);
}

TEST_CASE("every admissible adversary stays below the minimax value") {
    const WeightPair pair = WeightPair::derivative(1, 0);
    const double delta = 1.0;
    const CellMoments m = cell_moments(DiscreteGrid{2.0 * kCut, 64}, pair);
    const double e2 = kErr * kErr;
    std::mt19937 rng(2468);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> tau(m.mu.size());
        double level = u01(rng) + 0.1;
        for (std::size_t j = 0; j < tau.size(); j += 2) {
            tau[j] = level;
            tau[j + 1] = level;
            level *= u01(rng);
        }
        double energy = 0.0;
        for (std::size_t j = 0; j < tau.size(); ++j)
            energy += m.nu[j] * tau[j] * tau[j];
        const double budget = 0.05 + 0.95 * u01(rng);  // spend part of the class
        const double scale = std::sqrt(budget / energy);
        for (auto& t : tau) t *= scale;
        const double bound = discrete_lower_bound(m, tau, delta);
        CHECK(bound <= e2 * (1.0 + 1e-9));
    }
}

TEST_CASE("extremal amplitudes: monotone, unit energy, near-optimal bound") {
    const OptimalFilter f =
        solve_cutoff(recovery_problem(DerivativeProblem{1, 0, 1.0}));
    const CellMoments m =
        cell_moments(DiscreteGrid{2.0 * f.cutoff, 128}, f.problem.pair);
    const std::vector<double> tau = extremal_tau(f, m);
    REQUIRE(tau.size() == m.mu.size());
    CHECK(tau[0] == tau[1]);
    for (std::size_t j = 1; j < tau.size(); ++j) CHECK(tau[j] <= tau[j - 1]);
    double energy = 0.0;
    for (std::size_t j = 0; j < tau.size(); ++j)
        energy += m.nu[j] * tau[j] * tau[j];
    CHECK(energy == doctest::Approx(1.0).epsilon(1e-12));
    const double bound = discrete_lower_bound(m, tau, 1.0);
    CHECK(bound / (kErr * kErr) > 0.999);
    CHECK(bound / (kErr * kErr) < 1.0);
}

TEST_CASE("certificate ladder climbs toward the minimax value") {
    const AnyProblem p = DerivativeProblem{1, 0, 1.0};
    const auto rows = certificate(p, 2.0 * kCut, {256, 512});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].N == 256);
    CHECK(rows[1].N == 512);
    CHECK(rows[0].ratio == doctest::Approx(0.999879935463).epsilon(1e-6));
    CHECK(rows[1].ratio == doctest::Approx(0.999968202464).epsilon(1e-6));
    CHECK(rows[1].ratio > rows[0].ratio);
    CHECK(rows[1].ratio < 1.0);
}

TEST_CASE("cells beyond the filter support do not change the bound") {
    const OptimalFilter f =
        solve_cutoff(recovery_problem(DerivativeProblem{1, 0, 1.0}));
    const double h = 2.0 * f.cutoff / 128;  // same cell width in both grids
    const CellMoments tight =
        cell_moments(DiscreteGrid{128 * h, 128}, f.problem.pair);
    const CellMoments padded =
        cell_moments(DiscreteGrid{192 * h, 192}, f.problem.pair);
    const double b1 = discrete_lower_bound(tight, extremal_tau(f, tight), 1.0);
    const double b2 = discrete_lower_bound(padded, extremal_tau(f, padded), 1.0);
    CHECK(b2 == doctest::Approx(b1).epsilon(1e-12));
}

TEST_CASE("grid validation") {
    const WeightPair pair = WeightPair::derivative(1, 0);
    CHECK_THROWS_AS(cell_moments(DiscreteGrid{0.0, 4}, pair), DomainError);
    CHECK_THROWS_AS(cell_moments(DiscreteGrid{1.0, 0}, pair), DomainError);
    CHECK_THROWS_AS(certificate(DerivativeProblem{1, 0, 1.0}, 2.0, {}), DomainError);
}

}  // TEST_SUITE
