#include "thermolat/involution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermolat/errors.hpp"

namespace thermolat {

namespace {

double at_or_ref(std::span<const double> prefix, std::size_t k, const InvolutionKernel& ik) {
    return k < prefix.size() ? prefix[k] : ik.reference_at(k);
}

// Window of tau_{y,n}(x): coordinate t (0-based) is y_{n-t} for t < n and
// x_{t-n} beyond.
void fill_tau_window(const InvolutionKernel& ik, std::span<const double> y,
                     std::span<const double> x, std::size_t n,
                     std::span<double> window) {
    for (std::size_t t = 0; t < window.size(); ++t) {
        if (t < n)
            window[t] = at_or_ref(y, n - 1 - t, ik);
        else
            window[t] = at_or_ref(x, t - n, ik);
    }
}

}  // namespace

double InvolutionKernel::error_bound() const {
    const double q = std::pow(2.0, -potential.holder_exponent);
    return potential.holder_constant * std::pow(q, static_cast<double>(truncation_depth + 1)) /
           (1.0 - q);
}

InvolutionKernel make_involution_kernel(Potential p, std::vector<double> reference,
                                        std::size_t truncation_depth) {
    InvolutionKernel ik;
    ik.potential = std::move(p);
    ik.reference = std::move(reference);
    ik.truncation_depth = truncation_depth;
    return ik;
}

double involution_W(const InvolutionKernel& ik, std::span<const double> y_prefix,
                    std::span<const double> x_prefix) {
    const std::size_t r = ik.potential.range;
    std::vector<double> win_x(r), win_ref(r);
    double w = 0.0;
    // Terms with n >= r cancel exactly: both windows read y coordinates only.
    const std::size_t n_max = std::min<std::size_t>(ik.truncation_depth, r > 0 ? r - 1 : 0);
    for (std::size_t n = 1; n <= n_max; ++n) {
        fill_tau_window(ik, y_prefix, x_prefix, n, win_x);
        fill_tau_window(ik, y_prefix, {}, n, win_ref);
        w += ik.potential.eval(win_x) - ik.potential.eval(win_ref);
    }
    return w;
}

AdjointValue adjoint_potential(const InvolutionKernel& ik, std::span<const double> y_prefix,
                               std::span<const std::vector<double>> probe_xs) {
    const std::size_t r = ik.potential.range;
    const double y1 = at_or_ref(y_prefix, 0, ik);
    std::vector<double> y_shifted(y_prefix.size() > 1 ? y_prefix.size() - 1 : 0);
    for (std::size_t k = 0; k < y_shifted.size(); ++k) y_shifted[k] = y_prefix[k + 1];

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::vector<double> prepended, window(r);
    for (const auto& x : probe_xs) {
        prepended.assign(1, y1);
        prepended.insert(prepended.end(), x.begin(), x.end());
        for (std::size_t t = 0; t < r; ++t)
            window[t] = t < prepended.size() ? prepended[t] : ik.reference_at(t - 1);
        const double v = ik.potential.eval(window) +
                         involution_W(ik, y_shifted, prepended) - involution_W(ik, y_prefix, x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    AdjointValue out;
    out.value = probe_xs.empty() ? 0.0 : sum / static_cast<double>(probe_xs.size());
    out.spread = probe_xs.empty() ? 0.0 : hi - lo;
    return out;
}

Potential adjoint_as_potential(const InvolutionKernel& ik) {
    const Potential& p = ik.potential;
    if (p.range > 2) throw CapabilityError("adjoint_as_potential: range must be <= 2");
    if (p.range == 1) return p;

    const double ref1 = ik.reference_at(0);
    auto base = p.eval;
    Potential out;
    out.range = 2;
    out.eval = [base, ref1](std::span<const double> v) {
        const double sw[2] = {v[1], v[0]};
        const double h1[2] = {v[0], ref1};
        const double h2[2] = {v[1], ref1};
        return base(sw) + base(h1) - base(h2);
    };
    if (p.has_partials()) {
        auto d1 = p.partials[0], d2 = p.partials[1];
        out.partials.push_back([d1, d2, ref1](std::span<const double> v) {
            const double sw[2] = {v[1], v[0]};
            const double h1[2] = {v[0], ref1};
            return d2(sw) + d1(h1);
        });
        out.partials.push_back([d1, ref1](std::span<const double> v) {
            const double sw[2] = {v[1], v[0]};
            const double h2[2] = {v[1], ref1};
            return d1(sw) - d1(h2);
        });
    }
    out.sup_norm_bound = 3.0 * p.sup_norm_bound;
    out.holder_exponent = p.holder_exponent;
    out.holder_constant = 3.0 * p.holder_constant;
    out.name = p.name + "*adj";
    return out;
}

double BilateralKernel::mass() const {
    const std::size_t M = grid->size;
    double s = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < M; ++j) row += K[i * M + j] * rho[j];
        s += rho_star[i] * row;
    }
    return s;
}

BilateralKernel bilateral_normalize(const InvolutionKernel& ik, const RpfSolution& sol,
                                    const RpfSolution& sol_star) {
    if (ik.potential.range > 2)
        throw CapabilityError("bilateral_normalize: range must be <= 2");
    const GridPtr& grid = sol.grid;
    const std::size_t M = grid->size;

    BilateralKernel bk;
    bk.grid = grid;
    bk.rho = sol.rho;
    bk.rho_star = sol_star.rho;
    bk.K.resize(M * M);

    std::vector<double> W(M * M);
    double wmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < M; ++i) {
        const double y[1] = {grid->nodes[i]};
        for (std::size_t j = 0; j < M; ++j) {
            const double x[1] = {grid->nodes[j]};
            W[i * M + j] = involution_W(ik, y, x);
            wmax = std::max(wmax, W[i * M + j]);
        }
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            mass += bk.rho_star[i] * bk.rho[j] * std::exp(W[i * M + j] - wmax);
    bk.c = wmax + std::log(mass);
    for (std::size_t i = 0; i < M * M; ++i) bk.K[i] = std::exp(W[i] - bk.c);
    return bk;
}

std::pair<GridFunction, GridFunction> eigenfunction_from_kernel(const BilateralKernel& bk) {
    const std::size_t M = bk.grid->size;
    GridFunction psi(bk.grid, 1), psi_star(bk.grid, 1);
    for (std::size_t j = 0; j < M; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < M; ++i) s += bk.rho_star[i] * bk.K[i * M + j];
        psi[j] = s;
    }
    for (std::size_t i = 0; i < M; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < M; ++j) s += bk.K[i * M + j] * bk.rho[j];
        psi_star[i] = s;
    }
    return {std::move(psi), std::move(psi_star)};
}

double kernel_eigenfunction_at(const BilateralKernel& bk, const InvolutionKernel& ik,
                               double x) {
    const std::size_t M = bk.grid->size;
    const double xw[1] = {x};
    double s = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        const double y[1] = {bk.grid->nodes[i]};
        s += bk.rho_star[i] * std::exp(involution_W(ik, y, xw) - bk.c);
    }
    return s;
}

double kernel_gradient(const InvolutionKernel& ik, std::size_t j,
                       std::span<const double> y_prefix, std::span<const double> x_prefix) {
    if (!ik.potential.has_partials())
        throw CapabilityError("kernel_gradient: potential has no partial derivatives");
    if (j < 1 || j > x_prefix.size())
        throw ArgumentError("kernel_gradient: j must index the supplied x prefix");
    const std::size_t r = ik.potential.range;
    double s = 0.0;
    std::vector<double> window(r);
    // D_{n+j} vanishes once n + j exceeds the range.
    for (std::size_t n = 1; n + j <= r && n <= ik.truncation_depth; ++n) {
        fill_tau_window(ik, y_prefix, x_prefix, n, window);
        s += ik.potential.partials[n + j - 1](window);
    }
    return s;
}

GridFunction eigenfunction_gradient(const BilateralKernel& bk, const InvolutionKernel& ik,
                                    std::size_t j) {
    if (!ik.potential.has_partials())
        throw CapabilityError("eigenfunction_gradient: potential has no partials");
    if (ik.potential.range > 2)
        throw CapabilityError("eigenfunction_gradient: range must be <= 2");
    const std::size_t M = bk.grid->size;
    GridFunction grad(bk.grid, 1);
    for (std::size_t xj = 0; xj < M; ++xj) {
        const double x[1] = {bk.grid->nodes[xj]};
        double s = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            const double y[1] = {bk.grid->nodes[i]};
            s += bk.rho_star[i] * bk.K[i * M + xj] * kernel_gradient(ik, j, y, x);
        }
        grad[xj] = s;
    }
    return grad;
}

}  // namespace thermolat
