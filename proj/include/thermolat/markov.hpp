#pragma once

#include <utility>
#include <vector>

#include "thermolat/transfer.hpp"

namespace thermolat {

/// Two-coordinate specialization of a Gibbs state: transition kernel P,
/// stationary density theta, and the normalizer pi_A = int psi psibar f.
/// Row normalization is against the a priori weights:
///   sum_j w_j P(a_i, a_j) = 1,   sum_i w_i theta_i P(a_i, a_j) = theta_j.
struct MarkovModel {
    GridPtr grid;
    std::vector<double> P;      // M*M, P[i*M + j] = P(a_i, a_j), strictly positive
    std::vector<double> theta;  // strictly positive stationary density
    double pi_norm = 0.0;

    double max_row_residual() const;
    double max_stationarity_residual() const;
    double theta_mass_residual() const;
    /// Induced pair weights w_i theta_i P_ij w_j.
    GridFunction pair_measure() const;
};

/// Builds the Markov model of a range-2 Gibbs state:
///   P_A(x1,x2) = e^{A(x1,x2)} psibar(x2) / (lambda psibar(x1)),
///   theta = psi psibar / pi_A,
/// where psibar solves the reflected problem A*(y1,y2) = A(y2,y1).
MarkovModel gibbs_to_markov(const RpfSolution& sol, double solve_tol = 1e-12);

/// A = log P (range 2) and its RPF solution; lambda = 1 up to the solver
/// tolerance and the induced Gibbs pair measure reproduces the model's.
std::pair<Potential, RpfSolution> markov_to_potential(const MarkovModel& m,
                                                      double norm_tol = 1e-6,
                                                      double solve_tol = 1e-12);

/// S(theta P) = -sum_ij w_i w_j theta_i P_ij log P_ij.
double markov_entropy(const MarkovModel& m);

}  // namespace thermolat
