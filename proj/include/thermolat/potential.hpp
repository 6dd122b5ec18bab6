#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermolat/grid.hpp"

namespace thermolat {

using WindowFn = std::function<double(std::span<const double>)>;

/// Finite-range interaction A(x) = A(x_1, ..., x_r) with Holder metadata and
/// optional coordinate derivatives. Truncation of longer-range interactions
/// must happen before construction; the induced error is Hol_A * 2^{-r alpha}.
struct Potential {
    std::size_t range = 1;
    WindowFn eval;
    std::vector<WindowFn> partials;  // empty or exactly `range` entries
    double sup_norm_bound = 0.0;
    double holder_exponent = 1.0;
    double holder_constant = 0.0;
    std::string name;

    bool has_partials() const { return partials.size() == range; }
    double operator()(std::span<const double> window) const { return eval(window); }
};

// Built-in library. g denotes (2/pi) arctan throughout.
Potential make_zero_potential();                  // P0
Potential make_constant_potential(double c);      // Pc (default c = 0.5)
Potential make_p1();                              // A(x1) = -arctan^2(x1)
Potential make_p2(double J);                      // A(x1,x2) = J g(x1) g(x2)
Potential make_p3();                              // A(x1,x2) = -(arctan x1 - arctan(x2)/2)^2
Potential scale_potential(const Potential& p, double beta);
Potential add_constant(const Potential& p, double c);
/// A*(y1,y2) = A(y2,y1); the potential seen by the reversed-coordinate operator.
Potential reflect_potential(const Potential& p);

/// Lookup by id with parameter list, e.g. ("P2", {0.8}).
Potential potential_by_id(const std::string& id, std::span<const double> params);

/// S_n A(word) = sum_{k=0}^{n-1} A(word_{k+1}, ..., word_{k+r}).
double ergodic_sum(const Potential& p, std::size_t n, std::span<const double> word);

struct DecayReport {
    bool pass = false;
    double worst_margin = 0.0;  // min over samples of A(z0 context) - A(endpoint context)
    std::size_t samples = 0;
    double threshold = 0.0;
};

/// Samples the condition A(..., +-inf, ...) < A(..., z0, ...) over grid
/// contexts (including compactified endpoints). Report-valued; a pass means
/// no sampled violation, not a proof.
DecayReport check_decay_condition(const Potential& p, const GridSpec& grid, double z0,
                                  std::size_t sample_budget, double threshold = 1e-12);

struct ClassEReport {
    bool pass = false;
    double worst_margin = 0.0;
    std::size_t samples = 0;
};

/// Samples monotonicity in x of x -> d/dt S_n A([x|t|y]_n) on ordered pairs
/// x <= x' and boundary words.
ClassEReport check_class_E(const Potential& p, const GridSpec& grid, std::size_t n,
                           std::size_t sample_budget, std::uint64_t seed = 20240901);

/// d/dt S_n A([x|t|y]_n): sum of window partials at the inserted coordinate.
/// `word` is the full word (x_1..x_n, t, y_{n+2}, ...), t at position n+1.
double site_insertion_derivative(const Potential& p, std::size_t n,
                                 std::span<const double> word);

/// Max sampled |A(x)-A(y)| / d(x,y)^alpha; a lower bound for Hol_A. Includes
/// systematic single-coordinate pairs (which realize the supremum for
/// one-coordinate potentials) plus seeded random pairs.
double estimate_holder(const Potential& p, const GridSpec& grid, std::size_t pairs,
                       std::uint64_t seed = 20240902);

}  // namespace thermolat
