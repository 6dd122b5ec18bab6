#include "thermolat/specification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "thermolat/errors.hpp"

namespace thermolat {

namespace {

bool volume_within_budget(std::size_t volume, std::size_t M, double budget_bits) {
    return static_cast<double>(volume) * std::log2(static_cast<double>(M)) <=
           budget_bits + 1e-9;
}

// Exact finite-volume sums. `boundary_at` supplies word values at absolute
// positions >= n; the callback sees the word and the grid indices of the
// integration coordinates.
struct ExactSum {
    double weighted = 0.0;  // sum e^{S_n A} phi prod w
    double Z = 0.0;         // sum e^{S_n A} prod w
};

template <typename Callback>
ExactSum exact_sum(const Potential& p, const GridSpec& grid, std::size_t n,
                   const std::function<double(std::size_t)>& boundary_at,
                   std::size_t word_len, Callback&& phi) {
    const std::size_t M = grid.size;
    const std::size_t len = std::max(word_len, n + p.range - 1);
    std::vector<double> word(len);
    for (std::size_t pos = n; pos < len; ++pos) word[pos] = boundary_at(pos);

    ExactSum acc;
    for (TupleIterator it(M, n); !it.done(); it.next()) {
        auto idx = it.index();
        double wprod = 1.0;
        for (std::size_t d = 0; d < n; ++d) {
            word[d] = grid.nodes[idx[d]];
            wprod *= grid.weights[idx[d]];
        }
        const double boltz = wprod * std::exp(ergodic_sum(p, n, word));
        acc.Z += boltz;
        acc.weighted += boltz * phi(std::span<const double>(word), idx);
    }
    return acc;
}

std::function<double(std::size_t)> boundary_fn(const BoundaryWord& y) {
    return [y](std::size_t pos) { return y.at(pos); };
}

}  // namespace

bool SpecKernel::within_exact_budget() const {
    return volume_within_budget(volume, grid->size, budget_bits);
}

double kernel_expectation_exact(const SpecKernel& k, const Observable& phi) {
    if (!k.within_exact_budget())
        throw CapabilityError(
            "kernel_expectation_exact: volume exceeds the exact budget; use Monte Carlo");
    auto acc = exact_sum(k.potential, *k.grid, k.volume, boundary_fn(k.boundary), phi.arity,
                         [&](std::span<const double> w, std::span<const std::size_t>) {
                             return phi(w);
                         });
    return acc.weighted / acc.Z;
}

double kernel_partition(const SpecKernel& k) {
    if (!k.within_exact_budget())
        throw CapabilityError("kernel_partition: volume exceeds the exact budget");
    auto acc = exact_sum(k.potential, *k.grid, k.volume, boundary_fn(k.boundary), 0,
                         [](std::span<const double>, std::span<const std::size_t>) {
                             return 0.0;
                         });
    return acc.Z;
}

double compatibility_check(const Potential& p, const GridPtr& grid, std::size_t n,
                           std::size_t gap, const Observable& phi, const BoundaryWord& z,
                           double budget_bits) {
    const std::size_t M = grid->size;
    const std::size_t N = n + gap;
    if (!volume_within_budget(N, M, budget_bits))
        throw CapabilityError("compatibility_check: volume exceeds the exact budget");

    // K_n(phi, w) depends on w only through positions n .. n+dep-1.
    const std::size_t dep =
        std::max<std::size_t>(p.range - 1, phi.arity > n ? phi.arity - n : 0);
    const std::size_t d1 = std::min(dep, gap);  // positions integrated by the outer sum

    // Tabulate the inner kernel over grid^{d1}; positions >= N read z.
    std::vector<double> kappa;
    {
        std::size_t count = 1;
        for (std::size_t d = 0; d < d1; ++d) count *= M;
        kappa.resize(count);
        std::vector<std::size_t> jidx(d1);
        std::size_t flat = 0;
        for (TupleIterator it(M, d1); !it.done(); it.next(), ++flat) {
            auto j = it.index();
            auto inner_boundary = [&](std::size_t pos) {
                if (pos >= n && pos < n + d1) return grid->nodes[j[pos - n]];
                return z.at(pos);
            };
            auto acc = exact_sum(p, *grid, n, inner_boundary, phi.arity,
                                 [&](std::span<const double> w, std::span<const std::size_t>) {
                                     return phi(w);
                                 });
            kappa[flat] = acc.weighted / acc.Z;
        }
    }

    // Outer volume N with the original phi.
    auto direct = exact_sum(p, *grid, N, boundary_fn(z), phi.arity,
                            [&](std::span<const double> w, std::span<const std::size_t>) {
                                return phi(w);
                            });
    // Outer volume N with kappa looked up at the integration indices.
    auto nested = exact_sum(p, *grid, N, boundary_fn(z), 0,
                            [&](std::span<const double>, std::span<const std::size_t> idx) {
                                std::size_t flat = 0;
                                for (std::size_t d = 0; d < d1; ++d)
                                    flat = flat * M + idx[n + d];
                                return kappa[flat];
                            });
    const double lhs = direct.weighted / direct.Z;
    const double rhs = nested.weighted / nested.Z;
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

namespace {

// Markov data of a range-2 Gibbs solution: B[i*M+j] = w_i e^{Abar(a_i,a_j)}.
// Cylinder weights of mu are products of B ending in mu1; cylinder weights of
// rho additionally divide by psi at the first coordinate.
struct MarkovCylinders {
    std::size_t M;
    std::vector<double> B;
    std::vector<double> mu1;
    std::vector<double> inv_psi;

    std::vector<double> row_times_Bn(std::vector<double> row, std::size_t steps) const {
        std::vector<double> next(M);
        for (std::size_t s = 0; s < steps; ++s) {
            for (std::size_t jj = 0; jj < M; ++jj) {
                double acc = 0.0;
                for (std::size_t i = 0; i < M; ++i) acc += row[i] * B[i * M + jj];
                next[jj] = acc;
            }
            row.swap(next);
        }
        return row;
    }

    // sum over grid^d of block(start vector, B-chain, mu1 at the end) * h(nodes)
    double block_integral(const std::vector<double>& start, std::size_t d,
                          const GridSpec& grid,
                          const std::function<double(std::span<const double>)>& h) const {
        std::vector<double> nodes(d);
        double acc = 0.0;
        for (TupleIterator it(M, d); !it.done(); it.next()) {
            auto j = it.index();
            double wgt = start[j[0]];
            for (std::size_t t = 0; t + 1 < d; ++t) wgt *= B[j[t] * M + j[t + 1]];
            wgt *= mu1[j[d - 1]];
            if (wgt == 0.0) continue;
            for (std::size_t t = 0; t < d; ++t) nodes[t] = grid.nodes[j[t]];
            acc += wgt * h(nodes);
        }
        return acc;
    }
};

MarkovCylinders make_cylinders(const RpfSolution& sol) {
    const std::size_t M = sol.grid->size;
    MarkovCylinders mc;
    mc.M = M;
    mc.B.resize(M * M);
    mc.mu1 = sol.gibbs.values();
    mc.inv_psi.resize(M);
    std::vector<double> window(2);
    for (std::size_t i = 0; i < M; ++i) {
        mc.inv_psi[i] = 1.0 / sol.psi[i];
        window[0] = sol.grid->nodes[i];
        for (std::size_t j = 0; j < M; ++j) {
            window[1] = sol.grid->nodes[j];
            mc.B[i * M + j] =
                sol.grid->weights[i] *
                std::exp(sol.potential.eval(window) + std::log(sol.psi[i]) -
                         std::log(sol.psi[j]) - sol.log_lambda);
        }
    }
    return mc;
}

}  // namespace

std::pair<double, double> dlr_check(const RpfSolution& sol, std::size_t n,
                                    const Observable& phi, double budget_bits) {
    if (sol.potential.range != 2)
        throw CapabilityError("dlr_check: implemented for range-2 potentials");
    const std::size_t M = sol.grid->size;
    if (!volume_within_budget(n, M, budget_bits))
        throw CapabilityError("dlr_check: volume exceeds the exact budget");

    MarkovCylinders mc = make_cylinders(sol);
    const std::size_t q = std::max<std::size_t>(phi.arity, 1);
    const std::size_t dep = std::max<std::size_t>(1, phi.arity > n ? phi.arity - n : 0);

    // kappa(z_{n+1}..z_{n+dep}) = K_n(phi, z); K_n reads the boundary only at
    // those positions, so tabulating on grid^{dep} captures it completely.
    auto tabulate_kappa = [&](const Potential& pot) {
        std::size_t count = 1;
        for (std::size_t d = 0; d < dep; ++d) count *= M;
        std::vector<double> kappa(count);
        std::size_t flat = 0;
        for (TupleIterator it(M, dep); !it.done(); it.next(), ++flat) {
            auto j = it.index();
            auto bnd = [&](std::size_t pos) {
                const std::size_t off = std::min(pos - n, dep - 1);
                return sol.grid->nodes[j[off]];
            };
            auto acc = exact_sum(pot, *sol.grid, n, bnd, phi.arity,
                                 [&](std::span<const double> w, std::span<const std::size_t>) {
                                     return phi(w);
                                 });
            kappa[flat] = acc.weighted / acc.Z;
        }
        return kappa;
    };

    // Integrates kappa against the measure block over coordinates
    // (n+1 .. n+dep): block = start(B^n)[j_1] B[j_1 j_2] ... mu1[j_dep].
    auto block_vs_kappa = [&](const std::vector<double>& start,
                              const std::vector<double>& kappa) {
        double acc = 0.0;
        std::size_t flat = 0;
        for (TupleIterator it(M, dep); !it.done(); it.next(), ++flat) {
            auto j = it.index();
            double wgt = start[j[0]];
            for (std::size_t t = 0; t + 1 < dep; ++t) wgt *= mc.B[j[t] * M + j[t + 1]];
            wgt *= mc.mu1[j[dep - 1]];
            acc += wgt * kappa[flat];
        }
        return acc;
    };

    // rho side: rho cylinders carry a 1/psi factor at the leading coordinate.
    std::vector<double> kappaA = tabulate_kappa(sol.potential);
    const double lhs_rho = block_vs_kappa(mc.row_times_Bn(mc.inv_psi, n), kappaA);
    const double rhs_rho = mc.block_integral(
        mc.inv_psi, q, *sol.grid, [&](std::span<const double> w) { return phi(w); });

    // mu side: the specification of the normalized potential; mu marginals
    // are shift-invariant, so the leading factor is 1.
    std::vector<double> kappaBar = tabulate_kappa(sol.normalized_potential());
    std::vector<double> ones(M, 1.0);
    const double lhs_mu = block_vs_kappa(ones, kappaBar);
    const double rhs_mu = mc.block_integral(
        ones, q, *sol.grid, [&](std::span<const double> w) { return phi(w); });

    return {std::abs(lhs_rho - rhs_rho), std::abs(lhs_mu - rhs_mu)};
}

ThermoLimitReport thermo_limit_probe(const Potential& p, const GridPtr& grid,
                                     const BoundaryWord& z, const Observable& phi,
                                     std::span<const std::size_t> volumes,
                                     double budget_bits, std::size_t mc_sweeps,
                                     std::uint64_t seed) {
    ThermoLimitReport rep;
    for (std::size_t n : volumes) {
        SpecKernel k{p, grid, z, n, KernelMode::exact_quadrature, budget_bits};
        if (k.within_exact_budget()) {
            rep.values.push_back(kernel_expectation_exact(k, phi));
            rep.exact.push_back(true);
            rep.std_errors.push_back(0.0);
        } else {
            k.mode = KernelMode::monte_carlo;
            auto est = mc_expectation(k, phi, mc_sweeps, seed + n);
            rep.values.push_back(est.mean);
            rep.exact.push_back(false);
            rep.std_errors.push_back(est.std_error);
        }
        rep.volumes.push_back(n);
    }
    const std::size_t m = rep.values.size();
    const std::size_t lo = m >= 3 ? m - 3 : 0;
    for (std::size_t i = lo + 1; i < m; ++i)
        rep.cauchy_defect =
            std::max(rep.cauchy_defect, std::abs(rep.values[i] - rep.values[i - 1]));

    if (p.range == 2) {
        TransferOperator op(grid, p);
        RpfSolution sol = solve_rpf(op);
        // int phi d mu_A through stationary mu cylinders of length arity.
        MarkovCylinders mc = make_cylinders(sol);
        std::vector<double> ones(grid->size, 1.0);
        const double limit = mc.block_integral(
            ones, std::max<std::size_t>(phi.arity, 1), *grid,
            [&](std::span<const double> w) { return phi(w); });
        rep.mu_limit = limit;
        for (double v : rep.values) rep.gaps.push_back(std::abs(v - limit));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Monte Carlo sampler
// ---------------------------------------------------------------------------

namespace {

struct ChainWorkspace {
    std::vector<double> word;        // config | boundary values
    std::vector<double> site_logw;   // per node log weight at the active site
    std::vector<double> cdf;
    std::vector<double> cell_lo, cell_hi;  // u-space cell edges per node
};

void init_cells(const GridSpec& grid, ChainWorkspace& ws) {
    const std::size_t M = grid.size;
    const auto& u = grid.compact_coords;
    ws.cell_lo.resize(M);
    ws.cell_hi.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
        ws.cell_lo[m] = m == 0 ? u[0] - 0.5 * (u[1] - u[0]) : 0.5 * (u[m - 1] + u[m]);
        ws.cell_hi[m] =
            m + 1 == M ? u[M - 1] + 0.5 * (u[M - 1] - u[M - 2]) : 0.5 * (u[m] + u[m + 1]);
    }
}

// One sweep of single-site updates; word[0..n) is the configuration.
void sweep_once(const SpecKernel& k, ChainWorkspace& ws, std::mt19937_64& rng) {
    const GridSpec& grid = *k.grid;
    const std::size_t M = grid.size;
    const std::size_t n = k.volume;
    const std::size_t r = k.potential.range;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (std::size_t site = 0; site < n; ++site) {
        const std::size_t k_lo = site + 1 >= r ? site + 1 - r : 0;
        const std::size_t k_hi = std::min(site, n - 1);
        double max_logw = -std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < M; ++m) {
            ws.word[site] = grid.nodes[m];
            double e = 0.0;
            for (std::size_t kk = k_lo; kk <= k_hi; ++kk)
                e += k.potential.eval(
                    std::span<const double>(ws.word).subspan(kk, r));
            ws.site_logw[m] = e;
            max_logw = std::max(max_logw, e);
        }
        double total = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            total += grid.weights[m] * std::exp(ws.site_logw[m] - max_logw);
            ws.cdf[m] = total;
        }
        const double U = unit(rng) * total;
        const std::size_t cell = static_cast<std::size_t>(
            std::lower_bound(ws.cdf.begin(), ws.cdf.end(), U) - ws.cdf.begin());
        const std::size_t m = std::min(cell, M - 1);
        const double prev = m == 0 ? 0.0 : ws.cdf[m - 1];
        const double frac = (U - prev) / (ws.cdf[m] - prev);
        const double u_val = ws.cell_lo[m] + frac * (ws.cell_hi[m] - ws.cell_lo[m]);
        ws.word[site] = std::tan(std::numbers::pi * u_val);
    }
}

ChainWorkspace make_workspace(const SpecKernel& k, std::size_t extra_arity) {
    ChainWorkspace ws;
    const std::size_t n = k.volume;
    const std::size_t len = std::max(n + k.potential.range - 1, extra_arity);
    ws.word.resize(std::max<std::size_t>(len, n + 1));
    for (std::size_t pos = 0; pos < ws.word.size(); ++pos)
        ws.word[pos] = k.boundary.at(pos);
    ws.site_logw.resize(k.grid->size);
    ws.cdf.resize(k.grid->size);
    init_cells(*k.grid, ws);
    return ws;
}

struct BatchAccumulator {
    static constexpr std::size_t kBatches = 32;
    std::vector<double> series;

    void add(double v) { series.push_back(v); }

    McEstimate reduce() const {
        McEstimate est;
        est.samples = series.size();
        const std::size_t per = std::max<std::size_t>(1, series.size() / kBatches);
        std::vector<double> batch_means;
        for (std::size_t b = 0; b * per < series.size(); ++b) {
            const std::size_t lo = b * per;
            const std::size_t hi = std::min(series.size(), lo + per);
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += series[i];
            batch_means.push_back(s / static_cast<double>(hi - lo));
        }
        double mean = std::accumulate(batch_means.begin(), batch_means.end(), 0.0) /
                      static_cast<double>(batch_means.size());
        double var = 0.0;
        for (double b : batch_means) var += (b - mean) * (b - mean);
        var /= std::max<std::size_t>(1, batch_means.size() - 1);
        est.mean = mean;
        est.std_error = std::sqrt(var / static_cast<double>(batch_means.size()));
        return est;
    }
};

}  // namespace

SamplerState gibbs_sample(const SpecKernel& k, std::size_t sweeps, std::uint64_t seed) {
    ChainWorkspace ws = make_workspace(k, 0);
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < sweeps; ++s) sweep_once(k, ws, rng);
    SamplerState st;
    st.config.assign(ws.word.begin(), ws.word.begin() + k.volume);
    st.seed = seed;
    st.sweeps_completed = sweeps;
    return st;
}

McEstimate mc_expectation(const SpecKernel& k, const Observable& phi, std::size_t sweeps,
                          std::uint64_t seed) {
    ChainWorkspace ws = make_workspace(k, phi.arity);
    std::mt19937_64 rng(seed);
    const std::size_t burn = sweeps / 10;
    BatchAccumulator acc;
    for (std::size_t s = 0; s < sweeps; ++s) {
        sweep_once(k, ws, rng);
        if (s >= burn) acc.add(phi(ws.word));
    }
    return acc.reduce();
}

double fkg_covariance_exact(const SpecKernel& k, const Observable& phi,
                            const Observable& psi) {
    if (!k.within_exact_budget())
        throw CapabilityError("fkg_covariance_exact: volume exceeds the exact budget");
    const std::size_t arity = std::max(phi.arity, psi.arity);
    auto acc = exact_sum(k.potential, *k.grid, k.volume, boundary_fn(k.boundary), arity,
                         [&](std::span<const double> w, std::span<const std::size_t>) {
                             return phi(w) * psi(w);
                         });
    auto acc1 = exact_sum(k.potential, *k.grid, k.volume, boundary_fn(k.boundary), arity,
                          [&](std::span<const double> w, std::span<const std::size_t>) {
                              return phi(w);
                          });
    auto acc2 = exact_sum(k.potential, *k.grid, k.volume, boundary_fn(k.boundary), arity,
                          [&](std::span<const double> w, std::span<const std::size_t>) {
                              return psi(w);
                          });
    const double e12 = acc.weighted / acc.Z;
    const double e1 = acc1.weighted / acc1.Z;
    const double e2 = acc2.weighted / acc2.Z;
    return e12 - e1 * e2;
}

namespace {

// Spot check that an observable is increasing on sampled ordered pairs.
void verify_increasing(const Observable& phi, const GridSpec& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, grid.size - 1);
    std::vector<double> lo(phi.arity), hi(phi.arity);
    for (int s = 0; s < 1000; ++s) {
        for (std::size_t d = 0; d < phi.arity; ++d) {
            const std::size_t i = pick(rng);
            const std::size_t j = pick(rng);
            lo[d] = grid.nodes[std::min(i, j)];
            hi[d] = grid.nodes[std::max(i, j)];
        }
        if (phi(lo) > phi(hi) + 1e-12)
            throw ArgumentError("fkg_test: observable is not increasing");
    }
}

}  // namespace

FkgReport fkg_test(const SpecKernel& k, const Observable& phi, const Observable& psi,
                   std::size_t sweeps, std::uint64_t seed) {
    FkgReport rep;
    if (k.potential.has_partials()) {
        ClassEReport ce = check_class_E(k.potential, *k.grid, std::max<std::size_t>(k.volume, 2),
                                        200, seed ^ 0x9e3779b97f4a7c15ULL);
        rep.class_e_pass = ce.pass;
    }
    verify_increasing(phi, *k.grid, seed + 1);
    verify_increasing(psi, *k.grid, seed + 2);

    ChainWorkspace ws = make_workspace(k, std::max(phi.arity, psi.arity));
    std::mt19937_64 rng(seed);
    const std::size_t burn = sweeps / 10;
    std::vector<double> fs, gs;
    fs.reserve(sweeps - burn);
    gs.reserve(sweeps - burn);
    for (std::size_t s = 0; s < sweeps; ++s) {
        sweep_once(k, ws, rng);
        if (s >= burn) {
            fs.push_back(phi(ws.word));
            gs.push_back(psi(ws.word));
        }
    }

    // Batch-means covariance: one covariance estimate per batch.
    constexpr std::size_t kBatches = 32;
    const std::size_t per = std::max<std::size_t>(2, fs.size() / kBatches);
    std::vector<double> covs;
    for (std::size_t b = 0; b * per < fs.size(); ++b) {
        const std::size_t lo = b * per;
        const std::size_t hi = std::min(fs.size(), lo + per);
        double mf = 0.0, mg = 0.0, mfg = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            mf += fs[i];
            mg += gs[i];
            mfg += fs[i] * gs[i];
        }
        const double cnt = static_cast<double>(hi - lo);
        covs.push_back(mfg / cnt - (mf / cnt) * (mg / cnt));
    }
    double mean = std::accumulate(covs.begin(), covs.end(), 0.0) /
                  static_cast<double>(covs.size());
    double var = 0.0;
    for (double c : covs) var += (c - mean) * (c - mean);
    var /= std::max<std::size_t>(1, covs.size() - 1);

    rep.covariance = mean;
    rep.std_error = std::sqrt(var / static_cast<double>(covs.size()));
    rep.samples = fs.size();
    rep.pass = rep.covariance >= -3.0 * rep.std_error;
    return rep;
}

EtaDecompositionResult eta_decomposition_check(const Potential& p, const GridPtr& grid,
                                               std::size_t n, const Observable& phi,
                                               const BoundaryWord& y, double budget_bits) {
    const std::size_t M = grid->size;
    if (!volume_within_budget(n + 1, M, budget_bits))
        throw CapabilityError("eta_decomposition_check: volume exceeds the exact budget");
    const std::size_t r = p.range;

    // RHS: K_{n+1}(phi, y) and Z_{n+1}^y.
    auto rhs_acc = exact_sum(p, *grid, n + 1, boundary_fn(y), phi.arity,
                             [&](std::span<const double> w, std::span<const std::size_t>) {
                                 return phi(w);
                             });
    const double rhs = rhs_acc.weighted / rhs_acc.Z;
    const double Zn1 = rhs_acc.Z;

    // LHS: integrate the inner kernel against eta over t (grid quadrature).
    std::vector<double> head_window(r);
    double lhs = 0.0, eta_mass = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        const double t = grid->nodes[m];
        auto bnd_t = [&](std::size_t pos) { return pos == n ? t : y.at(pos); };
        auto inner = exact_sum(p, *grid, n, bnd_t, phi.arity,
                               [&](std::span<const double> w, std::span<const std::size_t>) {
                                   return phi(w);
                               });
        // A([t|sigma^n(y)]_1): window (t, y_{n+2}, y_{n+3}, ...).
        head_window[0] = t;
        for (std::size_t d = 1; d < r; ++d) head_window[d] = y.at(n + d);
        const double eta_w =
            grid->weights[m] * (inner.Z / Zn1) * std::exp(p.eval(head_window));
        eta_mass += eta_w;
        lhs += eta_w * (inner.weighted / inner.Z);
    }

    EtaDecompositionResult out;
    out.residual = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    out.eta_mass = eta_mass;
    return out;
}

MonotoneMapResult monotone_map_check(const Potential& p, const GridPtr& grid, std::size_t n,
                                     const BoundaryWord& y, const Observable& phi,
                                     std::span<const double> t_values, double budget_bits) {
    const std::size_t M = grid->size;
    if (!volume_within_budget(n, M, budget_bits))
        throw CapabilityError("monotone_map_check: volume exceeds the exact budget");

    MonotoneMapResult out;
    if (p.has_partials()) {
        ClassEReport ce = check_class_E(p, *grid, std::max<std::size_t>(n, 2), 200);
        out.class_e_warning = !ce.pass;
    } else {
        out.class_e_warning = true;
    }
    for (double t : t_values) {
        auto bnd_t = [&](std::size_t pos) { return pos == n ? t : y.at(pos); };
        auto acc = exact_sum(p, *grid, n, bnd_t, phi.arity,
                             [&](std::span<const double> w, std::span<const std::size_t>) {
                                 return phi(w);
                             });
        out.values.push_back(acc.weighted / acc.Z);
    }
    out.pass = true;
    for (std::size_t i = 1; i < out.values.size(); ++i)
        if (out.values[i] + 1e-8 < out.values[i - 1]) out.pass = false;
    return out;
}

}  // namespace thermolat
