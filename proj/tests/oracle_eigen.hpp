#pragma once

// Test-only dense eigen oracle, independent of the power-iteration path:
// cyclic Jacobi rotations on the symmetrized kernel
//   S = D^{1/2} E D^{1/2},  E_ij = e^{A(a_i, a_j)},  D = diag(w),
// valid for symmetric range-2 potentials. The top pair (lambda, v) gives
//   psi = D^{-1/2} v,  rho ~ D^{1/2} v.

#include <algorithm>
#include <cmath>
#include <vector>

#include "thermolat/grid.hpp"
#include "thermolat/potential.hpp"

namespace oracle {

struct JacobiResult {
    std::vector<double> eigenvalues;          // descending
    std::vector<std::vector<double>> vectors; // matching order
};

inline JacobiResult jacobi_symmetric(std::vector<double> S, std::size_t n,
                                     double tol = 1e-14, std::size_t max_sweeps = 100) {
    std::vector<double> V(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) V[i * n + i] = 1.0;

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += S[p * n + q] * S[p * n + q];
        if (std::sqrt(off) < tol) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = S[p * n + q];
                if (apq == 0.0) continue;
                const double app = S[p * n + p], aqq = S[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double skp = S[k * n + p], skq = S[k * n + q];
                    S[k * n + p] = c * skp - s * skq;
                    S[k * n + q] = s * skp + c * skq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double spk = S[p * n + k], sqk = S[q * n + k];
                    S[p * n + k] = c * spk - s * sqk;
                    S[q * n + k] = s * spk + c * sqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = V[k * n + p], vkq = V[k * n + q];
                    V[k * n + p] = c * vkp - s * vkq;
                    V[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return S[a * n + a] > S[b * n + b]; });

    JacobiResult res;
    for (std::size_t r = 0; r < n; ++r) {
        res.eigenvalues.push_back(S[order[r] * n + order[r]]);
        std::vector<double> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = V[k * n + order[r]];
        res.vectors.push_back(std::move(v));
    }
    return res;
}

struct DenseRpf {
    double lambda = 0.0;
    double lambda2 = 0.0;  // second eigenvalue (spectral gap diagnostics)
    std::vector<double> psi;
    std::vector<double> rho;
};

// The Jacobi solve runs on the block of nodes whose weights are numerically
// alive (the Gaussian weights underflow at the extreme compactified nodes and
// sqrt(w)-scaled eigenvector components there lose all relative precision).
// Dead-node values of psi and rho follow from the defining identities
//   psi_j = (1/lambda) sum_i w_i e^{A(a_i, a_j)} psi_i,
//   rho_i = (1/lambda) w_i sum_j e^{A(a_i, a_j)} rho_j,
// which are single quadratures dominated by the live block.
inline DenseRpf dense_rpf_symmetric(const thermolat::Potential& p,
                                    const thermolat::GridSpec& grid,
                                    double live_weight = 1e-12) {
    const std::size_t M = grid.size;
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < M; ++i)
        if (grid.weights[i] >= live_weight) live.push_back(i);
    const std::size_t L = live.size();

    std::vector<double> S(L * L);
    std::vector<double> window(2);
    for (std::size_t a = 0; a < L; ++a) {
        window[0] = grid.nodes[live[a]];
        for (std::size_t b = 0; b < L; ++b) {
            window[1] = grid.nodes[live[b]];
            S[a * L + b] = std::sqrt(grid.weights[live[a]]) * std::exp(p.eval(window)) *
                           std::sqrt(grid.weights[live[b]]);
        }
    }
    auto jr = jacobi_symmetric(std::move(S), L);

    DenseRpf out;
    out.lambda = jr.eigenvalues[0];
    out.lambda2 = jr.eigenvalues[1];
    auto& v = jr.vectors[0];
    double sign = 0.0;
    for (double x : v) sign += x;
    if (sign < 0)
        for (double& x : v) x = -x;

    out.psi.assign(M, 0.0);
    out.rho.assign(M, 0.0);
    for (std::size_t a = 0; a < L; ++a) {
        out.psi[live[a]] = v[a] / std::sqrt(grid.weights[live[a]]);
        out.rho[live[a]] = v[a] * std::sqrt(grid.weights[live[a]]);
    }
    for (std::size_t j = 0; j < M; ++j) {
        if (grid.weights[j] >= live_weight) continue;
        window[1] = grid.nodes[j];
        double acc_psi = 0.0;
        for (std::size_t a = 0; a < L; ++a) {
            window[0] = grid.nodes[live[a]];
            acc_psi += grid.weights[live[a]] * std::exp(p.eval(window)) * out.psi[live[a]];
        }
        out.psi[j] = acc_psi / out.lambda;
        window[0] = grid.nodes[j];
        double acc_rho = 0.0;
        for (std::size_t b = 0; b < L; ++b) {
            window[1] = grid.nodes[live[b]];
            acc_rho += std::exp(p.eval(window)) * out.rho[live[b]];
        }
        out.rho[j] = grid.weights[j] * acc_rho / out.lambda;
    }

    double rho_mass = 0.0;
    for (double x : out.rho) rho_mass += x;
    for (auto& x : out.rho) x /= rho_mass;
    double psi_rho = 0.0;
    for (std::size_t i = 0; i < M; ++i) psi_rho += out.psi[i] * out.rho[i];
    for (auto& x : out.psi) x /= psi_rho;
    return out;
}

}  // namespace oracle
