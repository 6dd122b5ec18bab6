#pragma once

#include <span>
#include <vector>

#include "thermolat/transfer.hpp"

namespace thermolat {

/// Truncated involution-kernel series
///   W(y|x) = sum_{n>=1} A(tau_{y,n}(x)) - A(tau_{y,n}(x')),
/// tau_{y,n}(x) = (y_n, ..., y_1, x_1, x_2, ...). Terms with n >= range
/// vanish exactly for finite-range potentials; the reported error bound
/// covers the dropped tail of the general series.
struct InvolutionKernel {
    Potential potential;
    std::vector<double> reference;  // x', extended periodically; default all zeros
    std::size_t truncation_depth = 40;

    double reference_at(std::size_t k) const {
        return reference.empty() ? 0.0 : reference[k % reference.size()];
    }
    /// Hol_A * sum_{n > depth} 2^{-n alpha}.
    double error_bound() const;
};

InvolutionKernel make_involution_kernel(Potential p, std::vector<double> reference = {},
                                        std::size_t truncation_depth = 40);

/// Partial sum of the series; within error_bound() of the full series.
/// Prefixes are padded by the reference point beyond the supplied entries.
double involution_W(const InvolutionKernel& ik, std::span<const double> y_prefix,
                    std::span<const double> x_prefix);

struct AdjointValue {
    double value = 0.0;   // mean over probes
    double spread = 0.0;  // max - min over probes; <= 2 * error_bound
};

/// A*(y) = A(y_1 x) + W(sigma*(y) | y_1 x) - W(y|x), probed over x values to
/// verify the x-independence.
AdjointValue adjoint_potential(const InvolutionKernel& ik, std::span<const double> y_prefix,
                               std::span<const std::vector<double>> probe_xs);

/// The adjoint as a unilateral potential (range <= 2). For range 2 this is
///   A*(v1, v2) = A(v2, v1) + h(v1) - h(v2),  h(v) = A(v, x'_1),
/// with derived partials; for range 1 the adjoint equals A.
Potential adjoint_as_potential(const InvolutionKernel& ik);

/// Bilateral kernel K(y|x) = e^{W(y|x) - c} on grid x grid, with c chosen so
/// that the (rho_{A*} x rho_A)-mass of K is one.
struct BilateralKernel {
    GridPtr grid;
    double c = 0.0;
    std::vector<double> K;  // [i*M + j] = K(y = a_i | x = a_j)
    GridFunction rho_star;  // conformal weights of the adjoint problem
    GridFunction rho;       // conformal weights of A

    double mass() const;  // sum rho*_i K_ij rho_j; 1 by construction
};

/// Requires range <= 2; sol_star solves the adjoint potential.
BilateralKernel bilateral_normalize(const InvolutionKernel& ik, const RpfSolution& sol,
                                    const RpfSolution& sol_star);

/// psi_A(x) = sum_y rho*_y K(y|x) and psi_{A*}(y) = sum_x rho_x K(y|x).
std::pair<GridFunction, GridFunction> eigenfunction_from_kernel(const BilateralKernel& bk);

/// psi_A at an arbitrary spin value (off-grid), through the kernel series.
double kernel_eigenfunction_at(const BilateralKernel& bk, const InvolutionKernel& ik,
                               double x);

/// D_j W(y|x) = sum_{n>=1} D_{n+j} A(tau_{y,n}(x)); exact for finite range.
double kernel_gradient(const InvolutionKernel& ik, std::size_t j,
                       std::span<const double> y_prefix, std::span<const double> x_prefix);

/// D_j psi_A(x) = sum_y rho*_y K(y|x) D_j W(y|x) on the grid.
GridFunction eigenfunction_gradient(const BilateralKernel& bk, const InvolutionKernel& ik,
                                    std::size_t j);

}  // namespace thermolat
