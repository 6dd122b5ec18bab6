#include "thermolat/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "thermolat/errors.hpp"

namespace thermolat {

namespace {

// Max of A over grid windows; the kernel is built with e^{A - shift}.
double grid_max(const Potential& p, const GridSpec& grid) {
    double m = -std::numeric_limits<double>::infinity();
    std::vector<double> window(p.range);
    for (TupleIterator it(grid.size, p.range); !it.done(); it.next()) {
        auto idx = it.index();
        for (std::size_t d = 0; d < p.range; ++d) window[d] = grid.nodes[idx[d]];
        m = std::max(m, p.eval(window));
    }
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

TransferOperator::TransferOperator(GridPtr grid, Potential potential)
    : grid_(std::move(grid)), potential_(std::move(potential)) {
    const std::size_t r = potential_.range;
    const std::size_t M = grid_->size;
    if (r < 1) throw ArgumentError("TransferOperator: potential range must be >= 1");
    if (r > 3) throw CapabilityError("TransferOperator: ranges above 3 are not supported");
    if (r == 3 && M * M * M > 40'000'000)
        throw CapabilityError("TransferOperator: range-3 kernel too large for this grid");

    shift_ = grid_max(potential_, *grid_);
    std::vector<double> window(r);
    if (r == 1) {
        kernel_.resize(M);
        for (std::size_t i = 0; i < M; ++i) {
            window[0] = grid_->nodes[i];
            kernel_[i] = grid_->weights[i] * std::exp(potential_.eval(window) - shift_);
        }
    } else if (r == 2) {
        kernel_.resize(M * M);  // [j*M + i] = w_i e^{A(a_i, a_j) - s}
        for (std::size_t j = 0; j < M; ++j) {
            window[1] = grid_->nodes[j];
            for (std::size_t i = 0; i < M; ++i) {
                window[0] = grid_->nodes[i];
                kernel_[j * M + i] =
                    grid_->weights[i] * std::exp(potential_.eval(window) - shift_);
            }
        }
    } else {
        kernel_.resize(M * M * M);  // [(j*M + k)*M + i] = w_i e^{A(a_i, a_j, a_k) - s}
        for (std::size_t j = 0; j < M; ++j) {
            window[1] = grid_->nodes[j];
            for (std::size_t k = 0; k < M; ++k) {
                window[2] = grid_->nodes[k];
                for (std::size_t i = 0; i < M; ++i) {
                    window[0] = grid_->nodes[i];
                    kernel_[(j * M + k) * M + i] =
                        grid_->weights[i] * std::exp(potential_.eval(window) - shift_);
                }
            }
        }
    }
}

void TransferOperator::apply_shifted(std::span<const double> in,
                                     std::span<double> out) const {
    const std::size_t M = grid_->size;
    const std::size_t r = potential_.range;
    if (r == 1) {
        // phi constant; output constant
        double s = 0.0;
        for (std::size_t i = 0; i < M; ++i) s += kernel_[i];
        out[0] = s * in[0];
    } else if (r == 2) {
        for (std::size_t j = 0; j < M; ++j) {
            const double* row = kernel_.data() + j * M;
            double s = 0.0;
            for (std::size_t i = 0; i < M; ++i) s += row[i] * in[i];
            out[j] = s;
        }
    } else {
        for (std::size_t j = 0; j < M; ++j) {
            for (std::size_t k = 0; k < M; ++k) {
                const double* row = kernel_.data() + (j * M + k) * M;
                double s = 0.0;
                for (std::size_t i = 0; i < M; ++i) s += row[i] * in[i * M + j];
                out[j * M + k] = s;
            }
        }
    }
}

void TransferOperator::apply_shifted_dual(std::span<const double> in,
                                          std::span<double> out) const {
    const std::size_t M = grid_->size;
    const std::size_t r = potential_.range;
    if (r == 1) {
        // measures live on one coordinate even for r = 1
        double mass = 0.0;
        for (std::size_t i = 0; i < in.size(); ++i) mass += in[i];
        for (std::size_t i = 0; i < M; ++i) out[i] = kernel_[i] * mass;
    } else if (r == 2) {
        // (L* rho)_i = w_i sum_j e^{A(a_i,a_j)-s} rho_j = sum_j kernel[j*M+i] rho_j
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t j = 0; j < M; ++j) {
            const double* row = kernel_.data() + j * M;
            const double rj = in[j];
            for (std::size_t i = 0; i < M; ++i) out[i] += row[i] * rj;
        }
    } else {
        // (L* rho)[i, j] = sum_k kernel[(j*M+k)*M + i] rho[j*M + k]
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t j = 0; j < M; ++j) {
            for (std::size_t k = 0; k < M; ++k) {
                const double* row = kernel_.data() + (j * M + k) * M;
                const double rjk = in[j * M + k];
                for (std::size_t i = 0; i < M; ++i) out[i * M + j] += row[i] * rjk;
            }
        }
    }
}

GridFunction TransferOperator::apply(const GridFunction& phi) const {
    const std::size_t r = potential_.range;
    if (phi.arity() != r - 1)
        throw ArgumentError("TransferOperator::apply: phi arity must be range-1");
    GridFunction out(grid_, r == 1 ? 0 : r - 1);
    apply_shifted(phi.values(), out.values());
    const double scale = std::exp(shift_);
    for (auto& v : out.values()) v *= scale;
    return out;
}

GridFunction TransferOperator::apply_arity(const GridFunction& phi) const {
    const std::size_t r = potential_.range;
    const std::size_t q = phi.arity();
    if (q == r - 1 || (r == 1 && q == 0)) return apply(phi);
    if (q < r - 1) throw ArgumentError("TransferOperator::apply_arity: arity below range-1");
    const std::size_t M = grid_->size;
    const std::size_t p = q - 1;  // output arity (q >= r so q-1 >= r-1)
    GridFunction out(grid_, p);
    std::vector<double> window(r);
    std::vector<std::size_t> phi_idx(q);
    for (TupleIterator it(M, p); !it.done(); it.next()) {
        auto idx = it.index();
        for (std::size_t d = 1; d < r; ++d) window[d] = grid_->nodes[idx[d - 1]];
        for (std::size_t d = 1; d < q; ++d) phi_idx[d] = idx[d - 1];
        double s = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            window[0] = grid_->nodes[i];
            phi_idx[0] = i;
            s += grid_->weights[i] * std::exp(potential_.eval(window)) * phi.at(phi_idx);
        }
        out[out.flat_index(idx)] = s;
    }
    return out;
}

namespace {

struct PowerResult {
    std::vector<double> vec;
    double lambda_shifted = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
};

// Power iteration with sup-norm (primal) or mass (dual) renormalization.
PowerResult power_iterate(const TransferOperator& op, std::size_t n, bool dual,
                          double tol, std::size_t max_iter) {
    PowerResult res;
    res.vec.assign(n, 1.0 / (dual ? static_cast<double>(n) : 1.0));
    std::vector<double> next(n);
    double lam = 0.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        if (dual)
            op.apply_shifted_dual(res.vec, next);
        else
            op.apply_shifted(res.vec, next);
        double norm = 0.0;
        if (dual) {
            for (double v : next) norm += v;
        } else {
            for (double v : next) norm = std::max(norm, std::abs(v));
        }
        double dev = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            dev = std::max(dev, std::abs(next[i] - norm * res.vec[i]));
        lam = norm;
        res.residual = dev / norm;
        for (std::size_t i = 0; i < n; ++i) res.vec[i] = next[i] / norm;
        res.iterations = it;
        if (res.residual <= tol) break;
    }
    res.lambda_shifted = lam;
    return res;
}

}  // namespace

RpfSolution solve_rpf(const TransferOperator& op, double tol, std::size_t max_iter) {
    if (!(tol > 0.0)) throw ArgumentError("solve_rpf: tol must be positive");
    const std::size_t M = op.grid()->size;
    const std::size_t r = op.range();

    RpfSolution sol;
    sol.grid = op.grid();
    sol.potential = op.potential();

    if (r == 1) {
        // psi is constant and lambda = sum_i w_i e^{A(a_i)} exactly.
        std::vector<double> one{1.0}, out{0.0};
        op.apply_shifted(one, out);
        const double lam_shift = out[0];
        sol.log_lambda = std::log(lam_shift) + op.shift();
        sol.lambda = std::exp(sol.log_lambda);
        sol.psi = GridFunction::constant(op.grid(), 0, 1.0);
        GridFunction rho(op.grid(), 1);
        std::vector<double> window(1);
        for (std::size_t i = 0; i < M; ++i) {
            window[0] = op.grid()->nodes[i];
            rho[i] = op.grid()->weights[i] *
                     std::exp(op.potential().eval(window) - op.shift()) / lam_shift;
        }
        const double mass = std::accumulate(rho.values().begin(), rho.values().end(), 0.0);
        for (auto& v : rho.values()) v /= mass;
        sol.rho = rho;
        sol.gibbs = rho;  // psi == 1
        return sol;
    }

    const std::size_t n = static_cast<std::size_t>(std::pow(M, r - 1));
    auto primal = power_iterate(op, n, /*dual=*/false, tol, max_iter);
    auto dual = power_iterate(op, n, /*dual=*/true, tol, max_iter);
    if (primal.residual > tol || dual.residual > tol)
        throw ConvergenceError("solve_rpf: power iteration did not reach tolerance",
                               std::max(primal.residual, dual.residual));

    // Rayleigh quotient with both eigenvectors for the final eigenvalue.
    std::vector<double> tmp(n);
    op.apply_shifted(primal.vec, tmp);
    const double lam_shift = dot(tmp, dual.vec) / dot(primal.vec, dual.vec);

    sol.log_lambda = std::log(lam_shift) + op.shift();
    sol.lambda = std::exp(sol.log_lambda);
    sol.stats.op_residual = primal.residual;
    sol.stats.dual_residual = dual.residual;
    sol.stats.iterations = std::max(primal.iterations, dual.iterations);

    // Normalization: rho has mass one, int psi d rho = 1, mu = psi rho.
    double mass = std::accumulate(dual.vec.begin(), dual.vec.end(), 0.0);
    for (auto& v : dual.vec) v /= mass;
    const double psi_rho = dot(primal.vec, dual.vec);
    for (auto& v : primal.vec) v /= psi_rho;

    sol.psi = GridFunction(op.grid(), r - 1, primal.vec);
    sol.rho = GridFunction(op.grid(), r - 1, dual.vec);
    std::vector<double> mu(n);
    for (std::size_t i = 0; i < n; ++i) mu[i] = primal.vec[i] * dual.vec[i];
    const double mu_mass = std::accumulate(mu.begin(), mu.end(), 0.0);
    for (auto& v : mu) v /= mu_mass;
    sol.gibbs = GridFunction(op.grid(), r - 1, mu);
    return sol;
}

double RpfSolution::normalized_eval(std::span<const double> window) const {
    const std::size_t r = potential.range;
    if (window.size() < r) throw ArgumentError("normalized_eval: window shorter than range");
    double v = potential.eval(window.subspan(0, r)) - log_lambda;
    if (r >= 2) {
        v += std::log(psi.eval(window.subspan(0, r - 1)));
        v -= std::log(psi.eval(window.subspan(1, r - 1)));
    }
    return v;
}

Potential RpfSolution::normalized_potential() const {
    Potential out;
    out.range = potential.range;
    out.name = potential.name + "~normalized";
    RpfSolution copy = *this;
    out.eval = [copy](std::span<const double> w) { return copy.normalized_eval(w); };
    double max_log_psi = 0.0, min_log_psi = 0.0;
    if (potential.range >= 2) {
        auto [mn, mx] = std::minmax_element(psi.values().begin(), psi.values().end());
        min_log_psi = std::log(*mn);
        max_log_psi = std::log(*mx);
    }
    out.sup_norm_bound =
        potential.sup_norm_bound + (max_log_psi - min_log_psi) + std::abs(log_lambda);
    const double a = potential.holder_exponent;
    const double c = std::pow(2.0, a) / (std::pow(2.0, a) - 1.0);
    out.holder_exponent = a;
    out.holder_constant = potential.holder_constant * (1.0 + c * (1.0 + std::pow(2.0, -a)));
    return out;
}

namespace {

// Abar on grid windows, indexed directly (no interpolation): window is
// (i, t_1, ..., t_{r-1}).
double normalized_at_nodes(const RpfSolution& sol, std::size_t i,
                           std::span<const std::size_t> t) {
    const std::size_t r = sol.potential.range;
    const std::size_t M = sol.grid->size;
    std::vector<double> window(r);
    window[0] = sol.grid->nodes[i];
    for (std::size_t d = 1; d < r; ++d) window[d] = sol.grid->nodes[t[d - 1]];
    double v = sol.potential.eval(window) - sol.log_lambda;
    if (r >= 2) {
        std::size_t head = i, tail = 0;
        for (std::size_t d = 0; d + 1 < r - 1; ++d) head = head * M + t[d];
        for (std::size_t d = 0; d < r - 1; ++d) tail = tail * M + t[d];
        v += std::log(sol.psi[head]) - std::log(sol.psi[tail]);
    }
    return v;
}

}  // namespace

GridFunction RpfSolution::gibbs_tuple() const {
    const std::size_t r = potential.range;
    if (r == 1) return gibbs;
    const std::size_t M = grid->size;
    GridFunction tuple(grid, r);
    std::size_t tail_flat = 0;
    for (TupleIterator it(M, r - 1); !it.done(); it.next(), ++tail_flat) {
        auto t = it.index();
        const double mu_t = gibbs[tail_flat];
        // flat index of (i, t): i * M^{r-1} + tail_flat
        const std::size_t stride = tuple.size() / M;
        for (std::size_t i = 0; i < M; ++i) {
            tuple[i * stride + tail_flat] =
                grid->weights[i] * std::exp(normalized_at_nodes(*this, i, t)) * mu_t;
        }
    }
    return tuple;
}

double RpfSolution::shift_consistency_residual() const {
    const std::size_t r = potential.range;
    if (r == 1) return 0.0;
    const std::size_t M = grid->size;
    GridFunction tuple = gibbs_tuple();
    const std::size_t inner = tuple.size() / M;  // M^{r-1}
    double dev = 0.0;
    // leading marginal (sum over first coordinate) against mu
    for (std::size_t t = 0; t < inner; ++t) {
        double s = 0.0;
        for (std::size_t i = 0; i < M; ++i) s += tuple[i * inner + t];
        dev = std::max(dev, std::abs(s - gibbs[t]));
    }
    // trailing marginal (sum over last coordinate) against mu
    for (std::size_t h = 0; h < inner; ++h) {
        double s = 0.0;
        for (std::size_t k = 0; k < M; ++k) s += tuple[h * M + k];
        dev = std::max(dev, std::abs(s - gibbs[h]));
    }
    return dev;
}

double pressure(const RpfSolution& sol) { return sol.log_lambda; }

double gibbs_entropy(const RpfSolution& sol) {
    const std::size_t r = sol.potential.range;
    const std::size_t M = sol.grid->size;
    double h = 0.0;
    if (r == 1) {
        std::vector<double> window(1);
        for (std::size_t i = 0; i < M; ++i) {
            window[0] = sol.grid->nodes[i];
            h -= sol.gibbs[i] * (sol.potential.eval(window) - sol.log_lambda);
        }
        return h;
    }
    GridFunction tuple = sol.gibbs_tuple();
    const std::size_t inner = tuple.size() / M;
    std::size_t t_flat = 0;
    for (TupleIterator it(M, r - 1); !it.done(); it.next(), ++t_flat) {
        auto t = it.index();
        for (std::size_t i = 0; i < M; ++i) {
            const double wgt = tuple[i * inner + t_flat];
            if (wgt != 0.0) h -= wgt * normalized_at_nodes(sol, i, t);
        }
    }
    return h;
}

double entropy_inf_probe(const RpfSolution& sol, std::span<const GridFunction> candidates,
                         std::vector<double>* values) {
    const std::size_t r = sol.potential.range;
    const std::size_t M = sol.grid->size;

    // Build the minimizer candidate e^{Abar} (arity r) alongside the inputs.
    GridFunction exp_abar(sol.grid, r);
    {
        std::size_t t_flat = 0;
        const std::size_t inner = exp_abar.size() / M;
        for (TupleIterator it(M, r - 1); !it.done(); it.next(), ++t_flat) {
            auto t = it.index();
            for (std::size_t i = 0; i < M; ++i)
                exp_abar[i * inner + t_flat] = std::exp(normalized_at_nodes(sol, i, t));
        }
    }

    GridFunction tuple = sol.gibbs_tuple();  // arity r (arity 1 when r = 1)

    auto value_of = [&](const GridFunction& u) {
        const std::size_t k = u.arity();
        if (k > r) throw ArgumentError("entropy_inf_probe: candidate arity exceeds range");
        for (double v : u.values())
            if (!(v > 0.0)) throw ArgumentError("entropy_inf_probe: candidate not positive");
        // L_0 u has arity k-1 (or stays constant for k = 0).
        GridFunction l0u(sol.grid, k == 0 ? 0 : k - 1);
        if (k == 0) {
            l0u[0] = u[0];
        } else {
            const std::size_t inner = l0u.size();
            for (std::size_t t = 0; t < inner; ++t) {
                double s = 0.0;
                for (std::size_t i = 0; i < M; ++i)
                    s += sol.grid->weights[i] * u[i * inner + t];
                l0u[t] = s;
            }
        }
        // integrate log(L0 u / u) over the leading coordinates of the tuple.
        const std::size_t tuple_arity = (r == 1) ? 1 : r;
        double acc = 0.0;
        std::size_t flat = 0;
        std::vector<std::size_t> sub;
        for (TupleIterator it(M, tuple_arity); !it.done(); it.next(), ++flat) {
            const double wgt = tuple[flat];
            if (wgt == 0.0) continue;
            auto idx = it.index();
            sub.assign(idx.begin(), idx.begin() + k);
            const double uv = k == 0 ? u[0] : u.at(sub);
            sub.assign(idx.begin(), idx.begin() + (k == 0 ? 0 : k - 1));
            const double lv = l0u.arity() == 0 ? l0u[0] : l0u.at(sub);
            acc += wgt * (std::log(lv) - std::log(uv));
        }
        return acc;
    };

    double best = value_of(exp_abar);
    if (values) values->clear();
    for (const auto& u : candidates) {
        const double v = value_of(u);
        if (values) values->push_back(v);
        best = std::min(best, v);
    }
    return best;
}

double variational_gap(const RpfSolution& sol, const GridFunction& mu, double h_mu,
                       double mass_tol) {
    const std::size_t r = sol.potential.range;
    if (mu.arity() < r)
        throw ArgumentError("variational_gap: measure arity below potential range");
    double mass = 0.0;
    for (double v : mu.values()) {
        if (v < -1e-14) throw ArgumentError("variational_gap: negative weight");
        mass += v;
    }
    if (std::abs(mass - 1.0) > mass_tol)
        throw ArgumentError("variational_gap: tensor is not a probability measure");

    const std::size_t M = sol.grid->size;
    double int_A = 0.0;
    std::vector<double> window(r);
    std::size_t flat = 0;
    for (TupleIterator it(M, mu.arity()); !it.done(); it.next(), ++flat) {
        const double wgt = mu[flat];
        if (wgt == 0.0) continue;
        auto idx = it.index();
        for (std::size_t d = 0; d < r; ++d) window[d] = sol.grid->nodes[idx[d]];
        int_A += wgt * sol.potential.eval(window);
    }
    return sol.log_lambda - (h_mu + int_A);
}

std::pair<double, double> uniform_limit_check(const TransferOperator& op,
                                              const RpfSolution& sol,
                                              const GridFunction& w, std::size_t n) {
    const std::size_t r = op.range();
    if (w.arity() != (r == 1 ? 0 : r - 1))
        throw ArgumentError("uniform_limit_check: w arity must be range-1");

    // int w d mu and int w d rho over the (r-1)-coordinate marginals.
    double int_mu = 0.0, int_rho = 0.0;
    if (r == 1) {
        int_mu = int_rho = w[0];
    } else {
        for (std::size_t t = 0; t < w.size(); ++t) {
            int_mu += sol.gibbs[t] * w[t];
            int_rho += sol.rho[t] * w[t];
        }
    }

    // First limit: L_Abar^n w -> int w d mu.
    TransferOperator norm_op(op.grid(), sol.normalized_potential());
    std::vector<double> v = w.values();
    std::vector<double> next(v.size());
    const double norm_scale = std::exp(norm_op.shift());
    for (std::size_t k = 0; k < n; ++k) {
        norm_op.apply_shifted(v, next);
        for (auto& x : next) x *= norm_scale;
        v.swap(next);
    }
    double res1 = 0.0;
    for (double x : v) res1 = std::max(res1, std::abs(x - int_mu));

    // Second limit: L_A^n w / lambda^n -> psi int w d rho. Work shifted and
    // divide by the shifted eigenvalue each step.
    const double lam_shift = std::exp(sol.log_lambda - op.shift());
    v = w.values();
    for (std::size_t k = 0; k < n; ++k) {
        op.apply_shifted(v, next);
        for (auto& x : next) x /= lam_shift;
        v.swap(next);
    }
    double res2 = 0.0;
    for (std::size_t t = 0; t < v.size(); ++t) {
        const double target = (r == 1 ? 1.0 : sol.psi[t]) * int_rho;
        res2 = std::max(res2, std::abs(v[t] - target));
    }
    return {res1, res2};
}

EigenvalueBoundReport eigenvalue_bound_check(const Potential& p, const GridPtr& grid,
                                             double beta, double tol, double solve_tol) {
    if (!(beta > 0.0)) throw ArgumentError("eigenvalue_bound_check: beta must be positive");
    TransferOperator op(grid, scale_potential(p, beta));
    RpfSolution sol = solve_rpf(op, solve_tol);
    EigenvalueBoundReport rep;
    rep.value = std::abs(sol.log_lambda) / beta;
    rep.bound = p.sup_norm_bound;
    rep.margin = rep.bound - rep.value;
    rep.pass = rep.value <= rep.bound + tol;
    return rep;
}

}  // namespace thermolat
