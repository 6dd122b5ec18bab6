#include "thermolat/zero_temp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermolat/errors.hpp"

namespace thermolat {

namespace {

/// Sum of weights * g over the leading coordinates of a weight tensor.
double integrate_leading(const GridFunction& weights, const GridFunction& g) {
    if (g.arity() > weights.arity())
        throw ArgumentError("integrate_leading: test function arity exceeds tensor arity");
    const std::size_t M = weights.grid()->size;
    // flat index of the leading k coordinates is flat / M^{arity-k}
    std::size_t tail = 1;
    for (std::size_t d = g.arity(); d < weights.arity(); ++d) tail *= M;
    double acc = 0.0;
    for (std::size_t flat = 0; flat < weights.size(); ++flat) {
        const double w = weights[flat];
        if (w != 0.0) acc += w * g[flat / tail];
    }
    return acc;
}

}  // namespace

BetaSweep beta_sweep(const Potential& p, const GridPtr& grid, std::vector<double> betas,
                     bool want_gibbs, double solve_tol) {
    for (std::size_t k = 0; k < betas.size(); ++k) {
        if (!(betas[k] > 0.0)) throw ArgumentError("beta_sweep: betas must be positive");
        if (k > 0 && !(betas[k] > betas[k - 1]))
            throw ArgumentError("beta_sweep: betas must be increasing");
    }
    BetaSweep sweep;
    sweep.grid = grid;
    sweep.potential = p;
    sweep.betas = std::move(betas);
    sweep.has_gibbs = want_gibbs;
    for (double beta : sweep.betas) {
        TransferOperator op(grid, scale_potential(p, beta));
        RpfSolution sol = solve_rpf(op, solve_tol);
        sweep.values.push_back(sol.log_lambda / beta);
        if (want_gibbs) sweep.gibbs_family.push_back(sol.gibbs_tuple());
    }
    return sweep;
}

SubActionSolution solve_max_plus(const Potential& p, const GridPtr& grid, double tol,
                                 std::size_t max_iter) {
    const std::size_t M = grid->size;
    const std::size_t r = p.range;
    SubActionSolution out;

    if (r == 1) {
        double m = -std::numeric_limits<double>::infinity();
        std::vector<double> window(1);
        for (std::size_t i = 0; i < M; ++i) {
            window[0] = grid->nodes[i];
            m = std::max(m, p.eval(window));
        }
        out.m = m;
        out.V = GridFunction::constant(grid, 0, 0.0);
        out.residual = 0.0;
        return out;
    }

    // Tabulate A on grid windows once.
    const std::size_t n_states = static_cast<std::size_t>(std::pow(M, r - 1));
    std::vector<double> table(M * n_states);  // [i * n_states + x_flat] = A(a_i, x)
    {
        std::vector<double> window(r);
        std::size_t x_flat = 0;
        for (TupleIterator it(M, r - 1); !it.done(); it.next(), ++x_flat) {
            auto idx = it.index();
            for (std::size_t d = 1; d < r; ++d) window[d] = grid->nodes[idx[d - 1]];
            for (std::size_t i = 0; i < M; ++i) {
                window[0] = grid->nodes[i];
                table[i * n_states + x_flat] = p.eval(window);
            }
        }
    }

    // V(a, x_1..x_{r-2}) is indexed by dropping the last coordinate of x and
    // prepending a: flat(a, x) = a * M^{r-2} + x_flat / M.
    const std::size_t head = n_states / M;  // M^{r-2}

    std::vector<double> V(n_states, 0.0), W(n_states);
    double best_span = std::numeric_limits<double>::infinity();
    std::vector<double> best_V = V;
    double best_m = 0.0;

    for (std::size_t it = 1; it <= max_iter; ++it) {
        for (std::size_t x = 0; x < n_states; ++x) {
            const std::size_t vx = x / M;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < M; ++i) {
                const double cand = table[i * n_states + x] + V[i * head + vx];
                if (cand > best) best = cand;  // strict: ties keep the smaller index
            }
            W[x] = best;
        }
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < n_states; ++x) {
            const double d = W[x] - V[x];
            hi = std::max(hi, d);
            lo = std::min(lo, d);
        }
        const double span = hi - lo;
        if (span < best_span) {
            best_span = span;
            best_V = V;
            best_m = hi;
        }
        out.iterations = it;
        if (span <= tol) {
            out.m = hi;
            out.residual = span;
            const double vmax = *std::max_element(V.begin(), V.end());
            for (auto& v : V) v -= vmax;
            out.V = GridFunction(grid, r - 1, std::move(V));
            return out;
        }
        const double wmax = *std::max_element(W.begin(), W.end());
        for (std::size_t x = 0; x < n_states; ++x) V[x] = W[x] - wmax;
    }

    // Cycling: report the best iterate, flagged.
    out.converged = false;
    out.m = best_m;
    out.residual = best_span;
    const double vmax = *std::max_element(best_V.begin(), best_V.end());
    for (auto& v : best_V) v -= vmax;
    out.V = GridFunction(grid, r - 1, std::move(best_V));
    return out;
}

double max_mean_cycle(const Potential& p, const GridPtr& grid) {
    const std::size_t M = grid->size;
    if (p.range > 2)
        throw CapabilityError("max_mean_cycle: range must be <= 2 (use solve_max_plus)");

    if (p.range == 1) {
        double m = -std::numeric_limits<double>::infinity();
        std::vector<double> window(1);
        for (std::size_t i = 0; i < M; ++i) {
            window[0] = grid->nodes[i];
            m = std::max(m, p.eval(window));
        }
        return m;
    }

    // Karp on the complete graph, edge i -> j with weight A(a_i, a_j).
    std::vector<double> wt(M * M);
    {
        std::vector<double> window(2);
        for (std::size_t i = 0; i < M; ++i) {
            window[0] = grid->nodes[i];
            for (std::size_t j = 0; j < M; ++j) {
                window[1] = grid->nodes[j];
                wt[i * M + j] = p.eval(window);
            }
        }
    }

    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> D(M + 1, std::vector<double>(M, ninf));
    D[0][0] = 0.0;  // source: node 0
    for (std::size_t k = 0; k < M; ++k) {
        for (std::size_t j = 0; j < M; ++j) {
            double best = ninf;
            for (std::size_t i = 0; i < M; ++i) {
                if (D[k][i] == ninf) continue;
                best = std::max(best, D[k][i] + wt[i * M + j]);
            }
            D[k + 1][j] = best;
        }
    }
    double m = ninf;
    for (std::size_t v = 0; v < M; ++v) {
        if (D[M][v] == ninf) continue;
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < M; ++k) {
            if (D[k][v] == ninf) continue;
            worst = std::min(worst, (D[M][v] - D[k][v]) / static_cast<double>(M - k));
        }
        m = std::max(m, worst);
    }
    return m;
}

GroundStateReport ground_state_diagnostic(const BetaSweep& sweep,
                                          std::span<const GridFunction> test_functions) {
    if (!sweep.has_gibbs || sweep.gibbs_family.empty())
        throw ArgumentError("ground_state_diagnostic: sweep lacks Gibbs tensors");

    GroundStateReport rep;
    const std::size_t n_beta = sweep.gibbs_family.size();

    for (const auto& g : test_functions) {
        std::vector<double> traj;
        for (const auto& mu : sweep.gibbs_family) traj.push_back(integrate_leading(mu, g));
        double defect = 0.0;
        const std::size_t lo = n_beta >= 3 ? n_beta - 3 : 0;
        for (std::size_t k = lo + 1; k < n_beta; ++k)
            defect = std::max(defect, std::abs(traj[k] - traj[k - 1]));
        rep.cauchy_defects.push_back(defect);
        rep.trajectories.push_back(std::move(traj));
    }

    GridFunction A_grid = GridFunction::sample(
        sweep.grid, sweep.potential.range,
        [&](std::span<const double> w) { return sweep.potential.eval(w); });
    for (const auto& mu : sweep.gibbs_family)
        rep.energy.push_back(integrate_leading(mu, A_grid));

    rep.m = solve_max_plus(sweep.potential, sweep.grid).m;
    rep.energy_gap = std::abs(rep.m - rep.energy.back());
    return rep;
}

}  // namespace thermolat
