#include "thermolat/markov.hpp"

#include <algorithm>
#include <cmath>

#include "thermolat/errors.hpp"

namespace thermolat {

double MarkovModel::max_row_residual() const {
    const std::size_t M = grid->size;
    double dev = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < M; ++j) s += grid->weights[j] * P[i * M + j];
        dev = std::max(dev, std::abs(s - 1.0));
    }
    return dev;
}

double MarkovModel::max_stationarity_residual() const {
    const std::size_t M = grid->size;
    double dev = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < M; ++i)
            s += grid->weights[i] * theta[i] * P[i * M + j];
        dev = std::max(dev, std::abs(s - theta[j]));
    }
    return dev;
}

double MarkovModel::theta_mass_residual() const {
    double s = 0.0;
    for (std::size_t i = 0; i < grid->size; ++i) s += grid->weights[i] * theta[i];
    return std::abs(s - 1.0);
}

GridFunction MarkovModel::pair_measure() const {
    const std::size_t M = grid->size;
    GridFunction pair(grid, 2);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            pair[i * M + j] =
                grid->weights[i] * theta[i] * P[i * M + j] * grid->weights[j];
    return pair;
}

MarkovModel gibbs_to_markov(const RpfSolution& sol, double solve_tol) {
    if (sol.potential.range != 2)
        throw CapabilityError("gibbs_to_markov: potential range must be 2");
    const std::size_t M = sol.grid->size;

    TransferOperator reflected(sol.grid, reflect_potential(sol.potential));
    RpfSolution star = solve_rpf(reflected, solve_tol);
    const auto& psibar = star.psi.values();

    MarkovModel m;
    m.grid = sol.grid;
    m.P.resize(M * M);
    m.theta.resize(M);

    std::vector<double> window(2);
    for (std::size_t i = 0; i < M; ++i) {
        window[0] = sol.grid->nodes[i];
        for (std::size_t j = 0; j < M; ++j) {
            window[1] = sol.grid->nodes[j];
            m.P[i * M + j] = std::exp(sol.potential.eval(window) - sol.log_lambda) *
                             psibar[j] / psibar[i];
        }
    }

    double pi = 0.0;
    for (std::size_t i = 0; i < M; ++i)
        pi += sol.grid->weights[i] * sol.psi[i] * psibar[i];
    m.pi_norm = pi;
    for (std::size_t i = 0; i < M; ++i) m.theta[i] = sol.psi[i] * psibar[i] / pi;
    return m;
}

std::pair<Potential, RpfSolution> markov_to_potential(const MarkovModel& m,
                                                      double norm_tol, double solve_tol) {
    if (m.max_row_residual() > norm_tol)
        throw ArgumentError("markov_to_potential: kernel rows are not normalized");
    const std::size_t M = m.grid->size;
    for (std::size_t i = 0; i < M * M; ++i)
        if (!(m.P[i] > 0.0))
            throw ArgumentError("markov_to_potential: kernel must be strictly positive");

    // A = log P; off-grid arguments interpolate log P in compact coordinates.
    GridFunction logP(m.grid, 2);
    for (std::size_t i = 0; i < M * M; ++i) logP[i] = std::log(m.P[i]);
    auto [mn, mx] = std::minmax_element(logP.values().begin(), logP.values().end());
    Potential p;
    p.range = 2;
    p.eval = [logP](std::span<const double> w) { return logP.eval(w.subspan(0, 2)); };
    p.sup_norm_bound = std::max(std::abs(*mn), std::abs(*mx));
    p.holder_exponent = 1.0;
    p.holder_constant = 0.0;  // not tracked for tabulated potentials
    p.name = "logP";

    TransferOperator op(m.grid, p);
    RpfSolution sol = solve_rpf(op, solve_tol);
    return {std::move(p), std::move(sol)};
}

double markov_entropy(const MarkovModel& m) {
    const std::size_t M = m.grid->size;
    double h = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        const double wt = m.grid->weights[i] * m.theta[i];
        for (std::size_t j = 0; j < M; ++j) {
            const double pij = m.P[i * M + j];
            h -= wt * m.grid->weights[j] * pij * std::log(pij);
        }
    }
    return h;
}

}  // namespace thermolat
