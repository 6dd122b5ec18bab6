#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "thermolat/transfer.hpp"

namespace thermolat {

/// Boundary condition: a finite prefix extended periodically. The ergodic
/// sums of a range-r potential only read it up to coordinate n + r - 1, so a
/// prefix suffices; indexing is by absolute sequence position.
struct BoundaryWord {
    std::vector<double> prefix;
    double at(std::size_t pos) const { return prefix[pos % prefix.size()]; }
};

/// Test function of the first `arity` coordinates of a word.
struct Observable {
    std::size_t arity = 1;
    std::function<double(std::span<const double>)> fn;
    double operator()(std::span<const double> w) const { return fn(w.subspan(0, arity)); }
};

enum class KernelMode { exact_quadrature, monte_carlo };

/// Finite-volume measure mu_n^y: density e^{S_n A([x|y]_n)} times the a
/// priori weights on grid^n, normalized by Z_n^y.
struct SpecKernel {
    Potential potential;
    GridPtr grid;
    BoundaryWord boundary;
    std::size_t volume = 1;
    KernelMode mode = KernelMode::exact_quadrature;
    /// Exact mode is allowed while volume * log2(M) stays within this budget
    /// (defaults allow n <= 3 at M = 200 and n <= 6 at M = 40).
    double budget_bits = 32.0;

    bool within_exact_budget() const;
};

/// (1/Z) sum over grid^n of e^{S_n A} phi([x|y]_n) prod w, with Z from the
/// same sum at phi = 1. Throws CapabilityError beyond the exact budget.
double kernel_expectation_exact(const SpecKernel& k, const Observable& phi);
/// Z_n^y by exact quadrature.
double kernel_partition(const SpecKernel& k);

/// |K_{n+gap}(phi, z) - K_{n+gap}(K_n(phi, .), z)|, relative.
double compatibility_check(const Potential& p, const GridPtr& grid, std::size_t n,
                           std::size_t gap, const Observable& phi, const BoundaryWord& z,
                           double budget_bits = 32.0);

/// DLR residuals (|int K_n(phi,.) d nu - int phi d nu|) for nu = rho_A and
/// for nu = mu_A with the normalized potential. Range-2 potentials only.
std::pair<double, double> dlr_check(const RpfSolution& sol, std::size_t n,
                                    const Observable& phi, double budget_bits = 32.0);

struct ThermoLimitReport {
    std::vector<std::size_t> volumes;
    std::vector<double> values;
    std::vector<bool> exact;          // per volume: exact quadrature or MC
    std::vector<double> std_errors;   // 0 for exact volumes
    double cauchy_defect = 0.0;       // over the last three volumes
    std::optional<double> mu_limit;   // int phi d mu_A for range-2 potentials
    std::vector<double> gaps;         // |value - mu_limit| when available
};

ThermoLimitReport thermo_limit_probe(const Potential& p, const GridPtr& grid,
                                     const BoundaryWord& z, const Observable& phi,
                                     std::span<const std::size_t> volumes,
                                     double budget_bits = 32.0,
                                     std::size_t mc_sweeps = 100000,
                                     std::uint64_t seed = 7);

/// Single-site Gibbs sampler state; reproducible given (seed, sweeps).
struct SamplerState {
    std::vector<double> config;
    std::uint64_t seed = 0;
    std::size_t sweeps_completed = 0;
};

/// Deterministic coordinate sweeps; the conditional at a site is proportional
/// to exp(sum of windows containing the site) times f, sampled by inverse CDF
/// on the grid with linear interpolation in the compact coordinate.
SamplerState gibbs_sample(const SpecKernel& k, std::size_t sweeps, std::uint64_t seed);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // batch means, 32 batches
    std::size_t samples = 0;
};

/// Chain estimate of int phi d mu_n^y (burn-in: first tenth of the sweeps).
McEstimate mc_expectation(const SpecKernel& k, const Observable& phi, std::size_t sweeps,
                          std::uint64_t seed);

struct FkgReport {
    double covariance = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    bool pass = false;  // covariance >= -3 SE
    std::optional<bool> class_e_pass;  // empty when partials are unavailable
};

/// Monte Carlo FKG test: Cov(phi, psi) under mu_n^y with batch-means errors.
/// phi, psi must be increasing (spot-checked on sampled ordered pairs).
FkgReport fkg_test(const SpecKernel& k, const Observable& phi, const Observable& psi,
                   std::size_t sweeps, std::uint64_t seed);

/// Exact covariance of two observables under mu_n^y (within budget).
double fkg_covariance_exact(const SpecKernel& k, const Observable& phi,
                            const Observable& psi);

struct EtaDecompositionResult {
    double residual = 0.0;  // relative mismatch of the two sides
    double eta_mass = 0.0;  // total mass of eta; 1 up to round-off
};

/// Verifies int (int phi d mu_n^{[x|t|y]}) d eta(t) = int phi d mu_{n+1}^{[x|y]}
/// with eta(dt) = (Z_n^{[y|t|y]} / Z_{n+1}^y) e^{A([t|sigma^n y]_1)} f(t) dt.
EtaDecompositionResult eta_decomposition_check(const Potential& p, const GridPtr& grid,
                                               std::size_t n, const Observable& phi,
                                               const BoundaryWord& y,
                                               double budget_bits = 32.0);

struct MonotoneMapResult {
    bool pass = false;
    std::vector<double> values;  // t -> int phi d mu_n^{[y|t|y]}
    bool class_e_warning = false;
};

/// Evaluates t -> K_n(phi, [y|t|y]) on an increasing t list; passes when
/// non-decreasing up to 1e-8 slack.
MonotoneMapResult monotone_map_check(const Potential& p, const GridPtr& grid, std::size_t n,
                                     const BoundaryWord& y, const Observable& phi,
                                     std::span<const double> t_values,
                                     double budget_bits = 32.0);

}  // namespace thermolat
