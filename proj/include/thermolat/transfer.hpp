#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "thermolat/grid.hpp"
#include "thermolat/potential.hpp"

namespace thermolat {

/// Discretized Ruelle operator for a range-r potential:
///   (L_A phi)(x) = sum_i w_i e^{A(a_i, x_1..x_{r-1})} phi(a_i, x_1..x_{r-2}).
/// The kernel is stored with the potential shifted by its grid maximum, so
/// large-beta potentials never overflow inside a solve; apply() restores the
/// true scale.
class TransferOperator {
public:
    TransferOperator(GridPtr grid, Potential potential);

    const GridPtr& grid() const { return grid_; }
    const Potential& potential() const { return potential_; }
    std::size_t range() const { return potential_.range; }
    double shift() const { return shift_; }

    /// True operator application; output arity r-1. Throws on arity mismatch.
    GridFunction apply(const GridFunction& phi) const;

    /// Application to a higher-arity function (arity q >= r-1); output arity
    /// max(q-1, r-1). Used by the specification-kernel identities.
    GridFunction apply_arity(const GridFunction& phi) const;

    /// Shifted application (kernel weights use e^{A - shift}); safe at any
    /// beta. Works on raw value vectors of arity r-1.
    void apply_shifted(std::span<const double> in, std::span<double> out) const;
    /// Transpose (dual) of the shifted application on measure weights.
    void apply_shifted_dual(std::span<const double> in, std::span<double> out) const;

private:
    GridPtr grid_;
    Potential potential_;
    double shift_ = 0.0;
    std::vector<double> kernel_;  // r=1: M entries; r=2: M*M; r=3: M^3
};

struct SolveStats {
    double op_residual = 0.0;    // ||L psi - lambda psi||_inf / (lambda ||psi||_inf)
    double dual_residual = 0.0;  // ||L* rho - lambda rho||_inf / lambda
    std::size_t iterations = 0;
};

/// Principal eigendata of L_A with the normalization rho(1) = 1 and
/// int psi d rho = 1, plus the induced Gibbs state mu = psi * rho.
struct RpfSolution {
    GridPtr grid;
    Potential potential;
    double lambda = 0.0;
    double log_lambda = 0.0;
    GridFunction psi;    // arity r-1, strictly positive
    GridFunction rho;    // conformal weights, arity max(r-1, 1), mass 1
    GridFunction gibbs;  // mu = psi * rho (mass 1), arity max(r-1, 1)
    SolveStats stats;

    /// Abar = A + log psi - log psi o sigma - log lambda on an r-window.
    double normalized_eval(std::span<const double> window) const;
    /// Abar as a Potential (off-grid psi values by interpolation).
    Potential normalized_potential() const;

    /// Gibbs weights on r-coordinate cylinders:
    ///   tuple[i, t] = w_i e^{Abar(a_i, a_t...)} mu[t]   (r >= 2)
    /// and the single-site marginal itself for r = 1.
    GridFunction gibbs_tuple() const;

    /// Max deviation between the marginals of gibbs_tuple over the leading
    /// and trailing coordinate (0 for r = 1).
    double shift_consistency_residual() const;
};

RpfSolution solve_rpf(const TransferOperator& op, double tol = 1e-12,
                      std::size_t max_iter = 20000);

double pressure(const RpfSolution& sol);

/// h(mu_A) = -int Abar d mu_A; agrees with log lambda - int A d mu_A.
double gibbs_entropy(const RpfSolution& sol);

/// min over candidates (plus e^{Abar}) of int log(L_0 u / u) d mu_A.
/// Candidates are strictly positive GridFunctions of arity <= r.
double entropy_inf_probe(const RpfSolution& sol, std::span<const GridFunction> candidates,
                         std::vector<double>* values = nullptr);

/// log lambda_A - (h_mu + int A d mu) for a shift-consistent probability
/// tensor mu of arity >= r; nonnegative, zero exactly at mu_A.
double variational_gap(const RpfSolution& sol, const GridFunction& mu, double h_mu,
                       double mass_tol = 1e-8);

/// (||L_Abar^n w - int w d mu||_inf, ||L_A^n w / lambda^n - psi int w d rho||_inf).
std::pair<double, double> uniform_limit_check(const TransferOperator& op,
                                              const RpfSolution& sol,
                                              const GridFunction& w, std::size_t n);

struct EigenvalueBoundReport {
    bool pass = false;
    double value = 0.0;   // |log lambda_{beta A}| / beta
    double bound = 0.0;   // ||A||_inf
    double margin = 0.0;  // bound - value
};

/// Checks -||A|| <= (1/beta) log lambda_{beta A} <= ||A||.
EigenvalueBoundReport eigenvalue_bound_check(const Potential& p, const GridPtr& grid,
                                             double beta, double tol = 1e-10,
                                             double solve_tol = 1e-12);

}  // namespace thermolat
