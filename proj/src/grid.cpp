#include "thermolat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace thermolat {

namespace {
constexpr double kPi = std::numbers::pi;
}

AprioriDensity standard_gaussian_density() {
    return AprioriDensity{
        [](double a) { return std::exp(-0.5 * a * a) / std::sqrt(2.0 * kPi); },
        "gaussian"};
}

void gauss_legendre(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
    // Newton iteration on P_n, nodes seeded by the Chebyshev-like estimate.
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 1; i <= m; ++i) {
        double z = std::cos(kPi * (static_cast<double>(i) - 0.25) /
                            (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / static_cast<double>(j);
            }
            pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        x[i - 1] = -z;
        x[n - i] = z;
        w[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - i] = w[i - 1];
    }
}

GridPtr build_grid(const AprioriDensity& density, std::size_t M, QuadratureScheme scheme) {
    if (M < 2) throw ConfigurationError("build_grid: need at least 2 nodes");
    if (!density.eval) throw ConfigurationError("build_grid: density has no evaluator");
    if (scheme != QuadratureScheme::compactified_gauss_legendre)
        throw ConfigurationError("build_grid: unknown quadrature scheme");

    std::vector<double> glx, glw;
    gauss_legendre(M, glx, glw);

    auto grid = std::make_shared<GridSpec>();
    grid->size = M;
    grid->nodes.resize(M);
    grid->weights.resize(M);
    grid->compact_coords.resize(M);

    double mass = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        const double u = 0.5 * glx[i];       // u in (-1/2, 1/2)
        const double a = std::tan(kPi * u);  // node on the real line
        const double fa = density.eval(a);
        if (fa < 0.0 || !std::isfinite(fa))
            throw ConfigurationError("build_grid: density negative or non-finite at node");
        const double sec2 = 1.0 / (std::cos(kPi * u) * std::cos(kPi * u));
        double wi = fa * kPi * sec2 * (0.5 * glw[i]);
        // Fast-decaying densities underflow at the outermost nodes; keep the
        // weights strictly positive without perturbing any integral.
        if (wi <= 0.0) wi = 1e-300;
        grid->compact_coords[i] = u;
        grid->nodes[i] = a;
        grid->weights[i] = wi;
        mass += wi;
    }
    grid->raw_mass_defect = std::abs(mass - 1.0);
    for (double& wi : grid->weights) wi /= mass;

    for (std::size_t i = 0; i + 1 < M; ++i)
        if (!(grid->nodes[i] < grid->nodes[i + 1]))
            throw ConfigurationError("build_grid: nodes not strictly increasing");
    return grid;
}

double metric_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ArgumentError("metric_distance: prefixes must have equal length");
    double d = 0.0;
    double pow2 = 2.0;  // 2^n for n = 1, 2, ...
    for (std::size_t n = 0; n < x.size(); ++n) {
        d += std::abs(std::atan(x[n]) - std::atan(y[n])) / (kPi * pow2);
        pow2 *= 2.0;
    }
    return d;
}

GridFunction::GridFunction(GridPtr grid, std::size_t arity)
    : grid_(std::move(grid)), arity_(arity) {
    std::size_t n = 1;
    for (std::size_t d = 0; d < arity_; ++d) n *= grid_->size;
    values_.assign(n, 0.0);
}

GridFunction::GridFunction(GridPtr grid, std::size_t arity, std::vector<double> values)
    : grid_(std::move(grid)), arity_(arity), values_(std::move(values)) {
    std::size_t n = 1;
    for (std::size_t d = 0; d < arity_; ++d) n *= grid_->size;
    if (values_.size() != n) throw ArgumentError("GridFunction: value count does not match arity");
}

GridFunction GridFunction::constant(GridPtr grid, std::size_t arity, double value) {
    GridFunction g(std::move(grid), arity);
    std::fill(g.values_.begin(), g.values_.end(), value);
    return g;
}

GridFunction GridFunction::sample(GridPtr grid, std::size_t arity,
                                  const std::function<double(std::span<const double>)>& fn) {
    GridFunction g(grid, arity);
    std::vector<double> point(arity);
    std::size_t flat = 0;
    for (TupleIterator it(grid->size, arity); !it.done(); it.next(), ++flat) {
        auto idx = it.index();
        for (std::size_t d = 0; d < arity; ++d) point[d] = grid->nodes[idx[d]];
        g.values_[flat] = fn(point);
    }
    return g;
}

std::size_t GridFunction::flat_index(std::span<const std::size_t> idx) const {
    if (idx.size() != arity_) throw ArgumentError("GridFunction: index arity mismatch");
    std::size_t flat = 0;
    for (std::size_t d = 0; d < arity_; ++d) flat = flat * grid_->size + idx[d];
    return flat;
}

double GridFunction::eval(std::span<const double> point) const {
    if (point.size() != arity_) throw ArgumentError("GridFunction::eval: arity mismatch");
    if (arity_ == 0) return values_[0];

    const auto& u = grid_->compact_coords;
    const std::size_t M = grid_->size;

    // Per coordinate: clamped cell index plus interpolation fraction in u.
    std::vector<std::size_t> lo(arity_);
    std::vector<double> frac(arity_);
    for (std::size_t d = 0; d < arity_; ++d) {
        const double ud = std::atan(point[d]) / kPi;
        if (ud <= u.front()) {
            lo[d] = 0;
            frac[d] = 0.0;
        } else if (ud >= u.back()) {
            lo[d] = M - 2;
            frac[d] = 1.0;
        } else {
            const auto it = std::upper_bound(u.begin(), u.end(), ud);
            const std::size_t hi = static_cast<std::size_t>(it - u.begin());
            lo[d] = hi - 1;
            frac[d] = (ud - u[lo[d]]) / (u[hi] - u[lo[d]]);
        }
    }

    double result = 0.0;
    const std::size_t corners = std::size_t{1} << arity_;
    std::vector<std::size_t> idx(arity_);
    for (std::size_t c = 0; c < corners; ++c) {
        double cw = 1.0;
        for (std::size_t d = 0; d < arity_; ++d) {
            const bool high = (c >> d) & 1u;
            idx[d] = lo[d] + (high ? 1 : 0);
            cw *= high ? frac[d] : (1.0 - frac[d]);
        }
        if (cw != 0.0) result += cw * at(idx);
    }
    return result;
}

GridFunction axpby(double a, const GridFunction& x, double b, const GridFunction& y) {
    if (x.arity() != y.arity() || x.size() != y.size())
        throw ArgumentError("axpby: shape mismatch");
    GridFunction out(x.grid(), x.arity());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
    return out;
}

}  // namespace thermolat
