#include "thermolat/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "thermolat/errors.hpp"

namespace thermolat {

namespace {

constexpr double kPi = std::numbers::pi;

double g_fn(double t) { return (2.0 / kPi) * std::atan(t); }
double g_prime(double t) { return (2.0 / kPi) / (1.0 + t * t); }

}  // namespace

Potential make_zero_potential() {
    Potential p;
    p.range = 1;
    p.eval = [](std::span<const double>) { return 0.0; };
    p.partials = {[](std::span<const double>) { return 0.0; }};
    p.sup_norm_bound = 0.0;
    p.holder_constant = 0.0;
    p.name = "P0";
    return p;
}

Potential make_constant_potential(double c) {
    Potential p;
    p.range = 1;
    p.eval = [c](std::span<const double>) { return c; };
    p.partials = {[](std::span<const double>) { return 0.0; }};
    p.sup_norm_bound = std::abs(c);
    p.holder_constant = 0.0;
    p.name = "Pc";
    return p;
}

Potential make_p1() {
    Potential p;
    p.range = 1;
    p.eval = [](std::span<const double> x) {
        const double u = std::atan(x[0]);
        return -u * u;
    };
    p.partials = {[](std::span<const double> x) {
        return -2.0 * std::atan(x[0]) / (1.0 + x[0] * x[0]);
    }};
    p.sup_norm_bound = kPi * kPi / 4.0;
    p.holder_constant = 2.0 * kPi * kPi;  // |u+v| <= pi, first-coordinate weight 1/(2 pi)
    p.name = "P1";
    return p;
}

Potential make_p2(double J) {
    Potential p;
    p.range = 2;
    p.eval = [J](std::span<const double> x) { return J * g_fn(x[0]) * g_fn(x[1]); };
    p.partials = {
        [J](std::span<const double> x) { return J * g_prime(x[0]) * g_fn(x[1]); },
        [J](std::span<const double> x) { return J * g_fn(x[0]) * g_prime(x[1]); },
    };
    p.sup_norm_bound = std::abs(J);
    p.holder_constant = 8.0 * std::abs(J);  // worst direction: second coordinate alone
    p.name = "P2";
    return p;
}

Potential make_p3() {
    Potential p;
    p.range = 2;
    p.eval = [](std::span<const double> x) {
        const double v = std::atan(x[0]) - 0.5 * std::atan(x[1]);
        return -v * v;
    };
    p.partials = {
        [](std::span<const double> x) {
            const double v = std::atan(x[0]) - 0.5 * std::atan(x[1]);
            return -2.0 * v / (1.0 + x[0] * x[0]);
        },
        [](std::span<const double> x) {
            const double v = std::atan(x[0]) - 0.5 * std::atan(x[1]);
            return v / (1.0 + x[1] * x[1]);
        },
    };
    p.sup_norm_bound = 9.0 * kPi * kPi / 16.0;
    p.holder_constant = 6.0 * kPi * kPi;
    p.name = "P3";
    return p;
}

Potential scale_potential(const Potential& p, double beta) {
    Potential out = p;
    auto base = p.eval;
    out.eval = [base, beta](std::span<const double> x) { return beta * base(x); };
    out.partials.clear();
    for (const auto& d : p.partials) {
        out.partials.push_back(
            [d, beta](std::span<const double> x) { return beta * d(x); });
    }
    out.sup_norm_bound = std::abs(beta) * p.sup_norm_bound;
    out.holder_constant = std::abs(beta) * p.holder_constant;
    out.name = p.name + "*beta";
    return out;
}

Potential add_constant(const Potential& p, double c) {
    Potential out = p;
    auto base = p.eval;
    out.eval = [base, c](std::span<const double> x) { return base(x) + c; };
    out.sup_norm_bound = p.sup_norm_bound + std::abs(c);
    out.name = p.name + "+c";
    return out;
}

Potential reflect_potential(const Potential& p) {
    if (p.range > 2) throw CapabilityError("reflect_potential: range must be <= 2");
    if (p.range == 1) return p;
    Potential out = p;
    auto base = p.eval;
    out.eval = [base](std::span<const double> x) {
        const double sw[2] = {x[1], x[0]};
        return base(sw);
    };
    out.partials.clear();
    if (p.has_partials()) {
        auto d1 = p.partials[0], d2 = p.partials[1];
        out.partials.push_back([d2](std::span<const double> x) {
            const double sw[2] = {x[1], x[0]};
            return d2(sw);
        });
        out.partials.push_back([d1](std::span<const double> x) {
            const double sw[2] = {x[1], x[0]};
            return d1(sw);
        });
    }
    out.name = p.name + "*";
    return out;
}

Potential potential_by_id(const std::string& id, std::span<const double> params) {
    if (id == "P0") return make_zero_potential();
    if (id == "Pc") return make_constant_potential(params.empty() ? 0.5 : params[0]);
    if (id == "P1") return make_p1();
    if (id == "P2") return make_p2(params.empty() ? 0.8 : params[0]);
    if (id == "P3") return make_p3();
    throw ConfigurationError("unknown potential id: " + id);
}

double ergodic_sum(const Potential& p, std::size_t n, std::span<const double> word) {
    if (n < 1) throw ArgumentError("ergodic_sum: n must be >= 1");
    if (word.size() < n + p.range - 1)
        throw ArgumentError("ergodic_sum: word shorter than n + range - 1");
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += p.eval(word.subspan(k, p.range));
    return s;
}

DecayReport check_decay_condition(const Potential& p, const GridSpec& grid, double z0,
                                  std::size_t sample_budget, double threshold) {
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t r = p.range;

    // Endpoint spins evaluate through the closed form when it extends to
    // +-inf (arctan does); otherwise fall back to the outermost node.
    auto endpoint_value = [&](std::vector<double>& w, std::size_t pos, double sign) {
        w[pos] = sign * inf;
        double v = p.eval(w);
        if (!std::isfinite(v)) {
            w[pos] = sign > 0 ? grid.nodes.back() : grid.nodes.front();
            v = p.eval(w);
        }
        return v;
    };

    // Context values: subsampled nodes plus the compactified endpoints.
    std::vector<double> ctx_vals;
    const std::size_t n_ctx = std::max<std::size_t>(3, sample_budget);
    const std::size_t step = std::max<std::size_t>(1, grid.size / n_ctx);
    for (std::size_t i = 0; i < grid.size; i += step) ctx_vals.push_back(grid.nodes[i]);
    ctx_vals.push_back(-inf);
    ctx_vals.push_back(inf);

    DecayReport rep;
    rep.threshold = threshold;
    rep.worst_margin = std::numeric_limits<double>::infinity();

    std::vector<double> word(r);
    std::vector<std::size_t> ctx_idx(r > 1 ? r - 1 : 0, 0);
    bool done = false;
    while (!done) {
        for (std::size_t pos = 0; pos < r; ++pos) {
            std::size_t c = 0;
            for (std::size_t q = 0; q < r; ++q) {
                if (q == pos) continue;
                double v = ctx_vals[ctx_idx[c++]];
                word[q] = std::isfinite(v) ? v : (v > 0 ? grid.nodes.back() : grid.nodes.front());
            }
            word[pos] = z0;
            const double at_z0 = p.eval(word);
            for (double sign : {-1.0, 1.0}) {
                const double at_end = endpoint_value(word, pos, sign);
                rep.worst_margin = std::min(rep.worst_margin, at_z0 - at_end);
                ++rep.samples;
            }
        }
        if (ctx_idx.empty()) break;
        done = true;
        for (std::size_t d = ctx_idx.size(); d-- > 0;) {
            if (++ctx_idx[d] < ctx_vals.size()) {
                done = false;
                break;
            }
            ctx_idx[d] = 0;
        }
    }
    rep.pass = rep.worst_margin >= threshold;
    return rep;
}

double site_insertion_derivative(const Potential& p, std::size_t n,
                                 std::span<const double> word) {
    if (!p.has_partials()) throw CapabilityError("potential has no partial derivatives");
    const std::size_t r = p.range;
    if (word.size() < n + r) throw ArgumentError("site_insertion_derivative: short word");
    // Windows k = 0..n-1 contain position n+1 (0-based index n) iff k+r > n.
    double s = 0.0;
    const std::size_t k_lo = (n + 1 > r) ? n + 1 - r : 0;
    for (std::size_t k = k_lo; k < n; ++k) {
        const std::size_t coord = n - k;  // 0-based coordinate of t in window k
        s += p.partials[coord](word.subspan(k, r));
    }
    return s;
}

ClassEReport check_class_E(const Potential& p, const GridSpec& grid, std::size_t n,
                           std::size_t sample_budget, std::uint64_t seed) {
    ClassEReport rep;
    if (!p.has_partials())
        throw CapabilityError("check_class_E: potential has no partial derivatives");
    const std::size_t r = p.range;
    const std::size_t len = n + std::max<std::size_t>(r, 1) + 2;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, grid.size - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Boundary tails cycle through extremes and a mid node.
    const double tails[3] = {grid.nodes.front(), grid.nodes[grid.size / 2],
                             grid.nodes.back()};

    rep.worst_margin = std::numeric_limits<double>::infinity();
    std::vector<double> lo_word(len), hi_word(len);
    for (std::size_t s = 0; s < sample_budget; ++s) {
        const double t = grid.nodes[pick(rng)];
        const double tail = tails[s % 3];
        for (std::size_t i = 0; i < len; ++i) {
            if (i < n) {
                const std::size_t base = pick(rng);
                lo_word[i] = grid.nodes[base];
                // componentwise larger coordinate, occasionally equal
                const std::size_t up =
                    std::min(grid.size - 1, base + static_cast<std::size_t>(
                                                       unit(rng) * (grid.size - base)));
                hi_word[i] = grid.nodes[up];
            } else if (i == n) {
                lo_word[i] = hi_word[i] = t;
            } else {
                lo_word[i] = hi_word[i] = tail;
            }
        }
        const double d_lo = site_insertion_derivative(p, n, lo_word);
        const double d_hi = site_insertion_derivative(p, n, hi_word);
        rep.worst_margin = std::min(rep.worst_margin, d_hi - d_lo);
        ++rep.samples;
    }
    rep.pass = rep.worst_margin >= -1e-12;
    return rep;
}

double estimate_holder(const Potential& p, const GridSpec& grid, std::size_t pairs,
                       std::uint64_t seed) {
    if (pairs < 1) throw ArgumentError("estimate_holder: need at least one pair");
    const std::size_t r = p.range;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, grid.size - 1);

    double best = 0.0;
    std::vector<double> x(r), y(r);
    auto consider = [&]() {
        const double d = metric_distance(x, y);
        if (d <= 0.0) return;
        const double ratio =
            std::abs(p.eval(x) - p.eval(y)) / std::pow(d, p.holder_exponent);
        best = std::max(best, ratio);
    };

    // Systematic single-coordinate pairs over node extremes and midpoints.
    const std::size_t probes[] = {0,          1,
                                  grid.size / 4, grid.size / 2,
                                  (3 * grid.size) / 4, grid.size - 2,
                                  grid.size - 1};
    for (std::size_t c = 0; c < r; ++c) {
        for (std::size_t i : probes) {
            for (std::size_t j : probes) {
                if (i == j) continue;
                for (std::size_t q = 0; q < r; ++q) x[q] = y[q] = grid.nodes[probes[0]];
                x[c] = grid.nodes[i];
                y[c] = grid.nodes[j];
                consider();
            }
        }
    }
    // Random pairs (multi-coordinate differences).
    for (std::size_t s = 0; s < pairs; ++s) {
        for (std::size_t q = 0; q < r; ++q) {
            x[q] = grid.nodes[pick(rng)];
            y[q] = grid.nodes[pick(rng)];
        }
        consider();
        // and a random single-coordinate variant
        const std::size_t c = s % r;
        for (std::size_t q = 0; q < r; ++q) y[q] = x[q];
        y[c] = grid.nodes[pick(rng)];
        consider();
    }
    return best;
}

}  // namespace thermolat
