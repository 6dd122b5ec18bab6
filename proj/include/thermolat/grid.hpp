#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "thermolat/errors.hpp"

namespace thermolat {

/// Strictly positive single-spin density f with unit mass, defining the
/// a priori measure nu = f(a) da on the real line.
struct AprioriDensity {
    std::function<double(double)> eval;
    std::string name;
};

AprioriDensity standard_gaussian_density();

enum class QuadratureScheme {
    // Gauss-Legendre in the compactified coordinate u = arctan(a)/pi on
    // (-1/2, 1/2); a_i = tan(pi u_i), weights carry f and the Jacobian.
    compactified_gauss_legendre,
};

/// Quadrature grid over the spin alphabet: nodes a_1 < ... < a_M with
/// positive weights summing to one (the weights include the a priori
/// density), plus the compactified coordinates u_i = arctan(a_i)/pi.
class GridSpec {
public:
    std::vector<double> nodes;           // strictly increasing
    std::vector<double> weights;         // strictly positive, sum to 1
    std::vector<double> compact_coords;  // u_i in (-1/2, 1/2)
    std::size_t size = 0;
    double raw_mass_defect = 0.0;  // |sum of unnormalized weights - 1|

    double node(std::size_t i) const { return nodes[i]; }
    double weight(std::size_t i) const { return weights[i]; }
    double compact(std::size_t i) const { return compact_coords[i]; }
};

using GridPtr = std::shared_ptr<const GridSpec>;

/// Discretizes nu = f da on M nodes. Weights are renormalized to unit mass;
/// the pre-normalization defect is kept as a diagnostic.
GridPtr build_grid(const AprioriDensity& density, std::size_t M,
                   QuadratureScheme scheme = QuadratureScheme::compactified_gauss_legendre);

/// Gauss-Legendre nodes/weights on (-1, 1).
void gauss_legendre(std::size_t n, std::vector<double>& x, std::vector<double>& w);

// ---------------------------------------------------------------------------
// Metric on sequence space: d(x,y) = sum_n |arctan x_n - arctan y_n|/(pi 2^n).
// Prefixes of equal length; tails assumed equal. Infinities are valid spins
// on the compactified alphabet.
// ---------------------------------------------------------------------------

double metric_distance(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// GridFunction: values of a k-coordinate function on grid^k, row-major with
// the first coordinate slowest. arity 0 is a single constant.
// ---------------------------------------------------------------------------

class GridFunction {
public:
    GridFunction() = default;
    GridFunction(GridPtr grid, std::size_t arity);
    GridFunction(GridPtr grid, std::size_t arity, std::vector<double> values);

    static GridFunction constant(GridPtr grid, std::size_t arity, double value);
    /// Samples fn on grid tuples; fn receives the node values of one tuple.
    static GridFunction sample(GridPtr grid, std::size_t arity,
                               const std::function<double(std::span<const double>)>& fn);

    std::size_t arity() const { return arity_; }
    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double& operator[](std::size_t flat) { return values_[flat]; }
    double operator[](std::size_t flat) const { return values_[flat]; }

    std::size_t flat_index(std::span<const std::size_t> idx) const;
    double at(std::span<const std::size_t> idx) const { return values_[flat_index(idx)]; }

    /// Multilinear interpolation in the compactified coordinates; exact at
    /// nodes, clamped to the outermost node beyond the grid.
    double eval(std::span<const double> point) const;

private:
    GridPtr grid_;
    std::size_t arity_ = 0;
    std::vector<double> values_;
};

GridFunction axpby(double a, const GridFunction& x, double b, const GridFunction& y);

/// Iterates all index tuples of grid^k in row-major order.
class TupleIterator {
public:
    TupleIterator(std::size_t M, std::size_t k) : M_(M), idx_(k, 0), done_(M == 0 && k > 0) {}
    bool done() const { return done_; }
    std::span<const std::size_t> index() const { return idx_; }
    void next() {
        for (std::size_t d = idx_.size(); d-- > 0;) {
            if (++idx_[d] < M_) return;
            idx_[d] = 0;
        }
        done_ = true;
    }

private:
    std::size_t M_;
    std::vector<std::size_t> idx_;
    bool done_ = false;
};

}  // namespace thermolat
