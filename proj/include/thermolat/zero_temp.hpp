#pragma once

#include <vector>

#include "thermolat/transfer.hpp"

namespace thermolat {

/// (1/beta) log lambda_{beta A} along an increasing list of betas, computed
/// with overflow-safe shifting. Values increase toward the ergodic maximizing
/// value m(A) from below (entropy is non-positive in this normalization).
struct BetaSweep {
    GridPtr grid;
    Potential potential;
    std::vector<double> betas;
    std::vector<double> values;            // (1/beta) log lambda_{beta A}
    std::vector<GridFunction> gibbs_family;  // r-coordinate Gibbs tensors, optional
    bool has_gibbs = false;
};

BetaSweep beta_sweep(const Potential& p, const GridPtr& grid, std::vector<double> betas,
                     bool want_gibbs = false, double solve_tol = 1e-12);

/// Max-plus eigendata: m with a calibrated sub-action V such that
///   max_a { A(a, x) + V(a, ...) } - V(x) = m  on every grid tuple x,
/// with defect A + V o prepend - V - m <= 0 everywhere.
struct SubActionSolution {
    double m = 0.0;
    GridFunction V;  // arity range-1
    double residual = 0.0;
    bool converged = true;
    std::size_t iterations = 0;
};

/// Max-plus value iteration with additive normalization V <- V - max V and
/// ties broken toward the smallest node index. A cycling iteration returns
/// the best iterate with converged = false.
SubActionSolution solve_max_plus(const Potential& p, const GridPtr& grid,
                                 double tol = 1e-10, std::size_t max_iter = 100000);

/// Exact maximum cycle mean on the complete grid graph with edge weight
/// A(a_i, a_j) (Karp). One-coordinate potentials are lifted as constants in
/// the second coordinate, so the result is max_i A(a_i).
double max_mean_cycle(const Potential& p, const GridPtr& grid);

struct GroundStateReport {
    std::vector<std::vector<double>> trajectories;  // int g d mu_beta per test fn
    std::vector<double> cauchy_defects;             // over the last three betas
    std::vector<double> energy;                     // int A d mu_beta
    double m = 0.0;                                 // max-plus value on the same grid
    double energy_gap = 0.0;                        // |m - final energy|
};

/// Accumulation diagnostics for the ground-state family (mu_{beta A}).
/// Requires a sweep computed with gibbs tensors.
GroundStateReport ground_state_diagnostic(const BetaSweep& sweep,
                                          std::span<const GridFunction> test_functions);

}  // namespace thermolat
