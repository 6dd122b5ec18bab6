#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "thermolat/errors.hpp"
#include "thermolat/markov.hpp"

using namespace thermolat;

namespace {

RpfSolution solve_for(const Potential& p, const GridPtr& grid) {
    return solve_rpf(TransferOperator(grid, p));
}

}  // namespace

TEST_CASE("zero potential gives the product chain") {
    auto grid = testutil::gaussian_grid(100);
    auto m = gibbs_to_markov(solve_for(make_p2(0.0), grid));
    for (std::size_t i = 0; i < grid->size; ++i) {
        CHECK(m.theta[i] == doctest::Approx(1.0).epsilon(1e-10));
        for (std::size_t j = 0; j < grid->size; j += 11)
            CHECK(m.P[i * grid->size + j] == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(markov_entropy(m) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("P2 model satisfies the kernel and stationarity identities") {
    auto grid = testutil::gaussian_grid(100);
    auto sol = solve_for(make_p2(0.8), grid);
    auto m = gibbs_to_markov(sol);

    CHECK(m.max_row_residual() <= 1e-8);
    CHECK(m.max_stationarity_residual() <= 1e-8);
    CHECK(m.theta_mass_residual() <= 1e-8);
    for (double v : m.P) CHECK(v > 0.0);
    for (double v : m.theta) CHECK(v > 0.0);

    // induced pair measure equals the Gibbs pair tensor
    auto pair = m.pair_measure();
    auto tuple = sol.gibbs_tuple();
    double dev = 0.0;
    for (std::size_t t = 0; t < pair.size(); ++t)
        dev = std::max(dev, std::abs(pair[t] - tuple[t]));
    CHECK(dev <= 1e-10);
}

TEST_CASE("second-coordinate potentials make rows identical") {
    auto grid = testutil::gaussian_grid(80);
    Potential p;
    p.range = 2;
    p.eval = [](std::span<const double> x) { return 0.3 * testutil::g_fn(x[1]); };
    p.sup_norm_bound = 0.3;
    p.holder_exponent = 1.0;
    p.holder_constant = 1.2;
    p.name = "u2";

    auto m = gibbs_to_markov(solve_for(p, grid));

    // quadrature oracle: P(x1, x2) = e^{u(x2)} / int e^{u} dnu
    double norm = 0.0;
    for (std::size_t j = 0; j < grid->size; ++j)
        norm += grid->weights[j] * std::exp(0.3 * testutil::g_fn(grid->nodes[j]));
    for (std::size_t j = 0; j < grid->size; j += 7) {
        const double expect = std::exp(0.3 * testutil::g_fn(grid->nodes[j])) / norm;
        for (std::size_t i = 0; i < grid->size; i += 17)
            CHECK(m.P[i * grid->size + j] == doctest::Approx(expect).epsilon(1e-9));
        // rows being equal forces theta(b) = P(., b)
        CHECK(m.theta[j] == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("round trip between Gibbs states and Markov models") {
    auto grid = testutil::gaussian_grid(80);
    auto sol = solve_for(make_p2(0.8), grid);
    auto m = gibbs_to_markov(sol);

    auto [logp, sol2] = markov_to_potential(m);
    CHECK(sol2.lambda == doctest::Approx(1.0).epsilon(1e-10));

    // recovered Gibbs pair measure reproduces the model's stationary measure
    auto pair_direct = m.pair_measure();
    auto pair_rpf = sol2.gibbs_tuple();
    double dev = 0.0;
    for (std::size_t t = 0; t < pair_direct.size(); ++t)
        dev = std::max(dev, std::abs(pair_direct[t] - pair_rpf[t]));
    CHECK(dev <= 1e-8);

    // and mapping back gives the same kernel and stationary density
    auto m2 = gibbs_to_markov(sol2);
    double dP = 0.0, dth = 0.0;
    for (std::size_t t = 0; t < m.P.size(); ++t)
        dP = std::max(dP, std::abs(m.P[t] - m2.P[t]));
    for (std::size_t i = 0; i < grid->size; ++i)
        dth = std::max(dth, std::abs(m.theta[i] - m2.theta[i]));
    CHECK(dP <= 1e-8);
    CHECK(dth <= 1e-8);
}

TEST_CASE("normalized-kernel round trip is the identity on models") {
    auto grid = testutil::gaussian_grid(60);
    // P == 1, theta == 1 maps to A == 0, lambda = 1
    MarkovModel unit;
    unit.grid = grid;
    unit.P.assign(grid->size * grid->size, 1.0);
    unit.theta.assign(grid->size, 1.0);
    unit.pi_norm = 1.0;
    auto [p, sol] = markov_to_potential(unit);
    CHECK(sol.lambda == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.eval(std::vector<double>{0.3, -0.7}) == doctest::Approx(0.0).epsilon(1e-12));

    const std::size_t mid = grid->size / 2;
    MarkovModel bad = unit;
    bad.P[mid * grid->size + mid] = 5.0;  // breaks row normalization in the bulk
    CHECK_THROWS_AS(markov_to_potential(bad), ArgumentError);
    bad = unit;
    bad.P[1] = -1.0;
    CHECK_THROWS_AS(markov_to_potential(bad), ArgumentError);
}

TEST_CASE("markov entropy agrees with the Gibbs entropy and stays nonpositive") {
    auto grid = testutil::gaussian_grid(100);
    auto sol = solve_for(make_p2(0.8), grid);
    auto m = gibbs_to_markov(sol);
    CHECK(markov_entropy(m) == doctest::Approx(gibbs_entropy(sol)).epsilon(1e-7));

    for (const auto& p : {make_p2(0.0), make_p2(0.8), make_p2(-0.5), make_p3()})
        CHECK(markov_entropy(gibbs_to_markov(solve_for(p, grid))) <= 1e-10);
}

TEST_CASE("entropy decreases as the kernel concentrates") {
    auto grid = testutil::gaussian_grid(60);
    double last = 1.0;
    for (double sigma : {1.0, 0.5, 0.25}) {
        Potential p;
        p.range = 2;
        const double s2 = 2.0 * sigma * sigma;
        p.eval = [s2](std::span<const double> x) {
            const double d = std::atan(x[1]) - std::atan(x[0]);
            return -d * d / s2;
        };
        p.sup_norm_bound = std::numbers::pi * std::numbers::pi / s2;
        p.holder_exponent = 1.0;
        p.holder_constant = 8.0 * std::numbers::pi / s2;
        p.name = "gauss-kernel";
        auto m = gibbs_to_markov(solve_for(p, grid));
        const double h = markov_entropy(m);
        CHECK(h < last);
        CHECK(h == doctest::Approx(gibbs_entropy(solve_for(p, grid))).epsilon(1e-7));
        last = h;
    }
}

TEST_CASE("cylinder weights factor through theta and P") {
    auto grid = testutil::gaussian_grid(50);
    auto sol = solve_for(make_p2(0.8), grid);
    auto m = gibbs_to_markov(sol);
    auto tuple = sol.gibbs_tuple();
    const auto& mu1 = sol.gibbs;

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, grid->size - 1);
    const std::size_t M = grid->size;
    for (int t = 0; t < 60; ++t) {
        const std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
        // mu cylinder [a_i, a_j, a_k] = pair_ij * pair_jk / mu1_j
        const double cyl = tuple[i * M + j] * tuple[j * M + k] / mu1[j];
        const double factored = grid->weights[i] * grid->weights[j] * grid->weights[k] *
                                m.theta[i] * m.P[i * M + j] * m.P[j * M + k];
        CHECK(cyl == doctest::Approx(factored).epsilon(1e-9));
    }
}

TEST_CASE("range restriction") {
    auto grid = testutil::gaussian_grid(40);
    CHECK_THROWS_AS(gibbs_to_markov(solve_for(make_p1(), grid)), CapabilityError);
}
