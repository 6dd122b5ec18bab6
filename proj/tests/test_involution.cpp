#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "thermolat/errors.hpp"
#include "thermolat/involution.hpp"

using namespace thermolat;

namespace {

// Term-by-term series oracle: builds tau_{y,n}(x) words explicitly to a fixed
// depth, with both prefixes extended by the reference point.
double series_oracle(const Potential& p, std::span<const double> y,
                     std::span<const double> x, double ref, std::size_t depth) {
    double total = 0.0;
    for (std::size_t n = 1; n <= depth; ++n) {
        std::vector<double> wx(p.range), wr(p.range);
        for (std::size_t t = 0; t < p.range; ++t) {
            if (t < n) {
                const std::size_t yi = n - 1 - t;
                wx[t] = wr[t] = yi < y.size() ? y[yi] : ref;
            } else {
                const std::size_t xi = t - n;
                wx[t] = xi < x.size() ? x[xi] : ref;
                wr[t] = ref;
            }
        }
        total += p.eval(wx) - p.eval(wr);
    }
    return total;
}

std::pair<RpfSolution, RpfSolution> solve_pair(const InvolutionKernel& ik,
                                               const GridPtr& grid) {
    auto sol = solve_rpf(TransferOperator(grid, ik.potential));
    auto sol_star = solve_rpf(TransferOperator(grid, adjoint_as_potential(ik)));
    return {std::move(sol), std::move(sol_star)};
}

}  // namespace

TEST_CASE("involution series: reference point, finite-range forms, oracle") {
    std::mt19937_64 rng(41);
    auto grid = testutil::gaussian_grid(24);

    for (const auto& p : {make_p1(), make_p2(0.8), make_p3()}) {
        auto ik = make_involution_kernel(p);
        CHECK(ik.error_bound() <= p.holder_constant * std::pow(2.0, -40.0));
        for (int t = 0; t < 30; ++t) {
            auto y = testutil::random_word(rng, *grid, 3);
            auto x = testutil::random_word(rng, *grid, 3);
            // vanishes when x is the reference point
            std::vector<double> ref_x{0.0, 0.0, 0.0};
            CHECK(involution_W(ik, y, ref_x) == 0.0);
            // matches the depth-10 enumeration oracle
            CHECK(involution_W(ik, y, x) ==
                  doctest::Approx(series_oracle(p, y, x, 0.0, 10)).epsilon(1e-14));
        }
    }

    // range 1: every term cancels
    auto ik1 = make_involution_kernel(make_p1());
    for (int t = 0; t < 10; ++t) {
        auto y = testutil::random_word(rng, *grid, 2);
        auto x = testutil::random_word(rng, *grid, 2);
        CHECK(involution_W(ik1, y, x) == 0.0);
    }

    // range 2: W(y|x) = A(y1, x1) - A(y1, x'_1)
    auto p2 = make_p2(0.8);
    auto ik2 = make_involution_kernel(p2);
    for (int t = 0; t < 10; ++t) {
        auto y = testutil::random_word(rng, *grid, 2);
        auto x = testutil::random_word(rng, *grid, 2);
        const double expect = p2.eval(std::vector<double>{y[0], x[0]}) -
                              p2.eval(std::vector<double>{y[0], 0.0});
        CHECK(involution_W(ik2, y, x) == doctest::Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("adjoint potential: closed forms and x-independence") {
    std::mt19937_64 rng(42);
    auto grid = testutil::gaussian_grid(24);
    std::vector<std::vector<double>> probes;
    for (int t = 0; t < 6; ++t) probes.push_back(testutil::random_word(rng, *grid, 3));

    auto p2 = make_p2(0.8);
    auto ik2 = make_involution_kernel(p2);
    for (int t = 0; t < 20; ++t) {
        auto y = testutil::random_word(rng, *grid, 3);
        auto av = adjoint_potential(ik2, y, probes);
        CHECK(av.spread <= 1e-12);
        // g(0) = 0 makes the gauge term vanish: A*(y) = A(y2, y1) exactly
        CHECK(av.value ==
              doctest::Approx(p2.eval(std::vector<double>{y[1], y[0]})).epsilon(1e-13));
    }

    auto ikc = make_involution_kernel(make_constant_potential(0.5));
    auto avc = adjoint_potential(ikc, std::vector<double>{1.0, -1.0}, probes);
    CHECK(avc.value == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(avc.spread == 0.0);

    auto ik1 = make_involution_kernel(make_p1());
    for (int t = 0; t < 10; ++t) {
        auto y = testutil::random_word(rng, *grid, 2);
        auto av = adjoint_potential(ik1, y, probes);
        CHECK(av.spread <= 1e-12);
        CHECK(av.value ==
              doctest::Approx(make_p1().eval(std::vector<double>{y[0]})).epsilon(1e-14));
    }

    // P3 carries a genuine gauge term h(v) = A(v, x'); the closed-form adjoint
    // must match the probe construction everywhere.
    auto p3 = make_p3();
    auto ik3 = make_involution_kernel(p3);
    auto astar = adjoint_as_potential(ik3);
    for (int t = 0; t < 20; ++t) {
        auto y = testutil::random_word(rng, *grid, 3);
        auto av = adjoint_potential(ik3, y, probes);
        CHECK(av.spread <= 1e-12);
        CHECK(av.value ==
              doctest::Approx(astar.eval(std::vector<double>{y[0], y[1]})).epsilon(1e-12));
    }
}

TEST_CASE("gauge property: changing the reference moves W by a y-function") {
    std::mt19937_64 rng(43);
    auto grid = testutil::gaussian_grid(24);
    auto p3 = make_p3();
    auto ik_a = make_involution_kernel(p3, {0.0});
    auto ik_b = make_involution_kernel(p3, {0.5});

    for (int t = 0; t < 20; ++t) {
        auto y = testutil::random_word(rng, *grid, 2);
        double first = 0.0;
        bool first_set = false;
        for (int s = 0; s < 8; ++s) {
            auto x = testutil::random_word(rng, *grid, 2);
            const double diff = involution_W(ik_a, y, x) - involution_W(ik_b, y, x);
            if (!first_set) {
                first = diff;
                first_set = true;
            }
            CHECK(diff == doctest::Approx(first).epsilon(1e-13));
        }
        CHECK(std::abs(first) > 1e-6);  // the gauge term is genuinely nonzero
    }
}

TEST_CASE("bilateral kernel: normalization and trivial cases") {
    auto grid = testutil::gaussian_grid(60);

    {
        auto ik = make_involution_kernel(make_p2(0.0));
        auto [sol, sol_star] = solve_pair(ik, grid);
        auto bk = bilateral_normalize(ik, sol, sol_star);
        CHECK(bk.c == doctest::Approx(0.0).epsilon(1e-12));
        for (std::size_t t = 0; t < bk.K.size(); t += 71)
            CHECK(bk.K[t] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(bk.mass() == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        auto ik = make_involution_kernel(make_p1());
        auto [sol, sol_star] = solve_pair(ik, grid);
        auto bk = bilateral_normalize(ik, sol, sol_star);
        CHECK(bk.c == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(bk.mass() == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        auto ik = make_involution_kernel(make_p2(0.8));
        auto [sol, sol_star] = solve_pair(ik, grid);
        auto bk = bilateral_normalize(ik, sol, sol_star);
        CHECK(std::isfinite(bk.c));
        CHECK(bk.mass() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("eigenfunctions from the kernel match the solver") {
    auto grid = testutil::gaussian_grid(100);
    for (const auto& p : {make_p2(0.8), make_p3()}) {
        auto ik = make_involution_kernel(p);
        auto [sol, sol_star] = solve_pair(ik, grid);
        auto bk = bilateral_normalize(ik, sol, sol_star);
        auto [psi, psi_star] = eigenfunction_from_kernel(bk);

        // match up to a positive scalar; compare shapes
        const double s = psi[grid->size / 2] / sol.psi[grid->size / 2];
        const double s2 = psi_star[grid->size / 2] / sol_star.psi[grid->size / 2];
        CHECK(s > 0.0);
        for (std::size_t i = 0; i < grid->size; ++i) {
            CHECK(std::abs(psi[i] / s - sol.psi[i]) / sol.psi[i] <= 1e-6);
            CHECK(std::abs(psi_star[i] / s2 - sol_star.psi[i]) / sol_star.psi[i] <= 1e-6);
        }
    }

    // one-coordinate potential: both eigenfunctions are constant
    auto ik1 = make_involution_kernel(make_p1());
    auto [sol1, sol1s] = solve_pair(ik1, testutil::gaussian_grid(40));
    auto bk1 = bilateral_normalize(ik1, sol1, sol1s);
    auto [psi1, psi1s] = eigenfunction_from_kernel(bk1);
    for (double v : psi1.values()) CHECK(v == doctest::Approx(psi1[0]).epsilon(1e-12));
}

TEST_CASE("bilateral marginals reproduce both Gibbs states") {
    auto grid = testutil::gaussian_grid(100);
    auto p2 = make_p2(0.8);
    auto ik = make_involution_kernel(p2);
    auto [sol, sol_star] = solve_pair(ik, grid);
    auto bk = bilateral_normalize(ik, sol, sol_star);
    const std::size_t M = grid->size;

    // x-marginal against mu_A for phi(x) = g(x1)
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < M; ++i) col += bk.rho_star[i] * bk.K[i * M + j];
        lhs += col * bk.rho[j] * testutil::g_fn(grid->nodes[j]);
        rhs += sol.gibbs[j] * testutil::g_fn(grid->nodes[j]);
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

    // y-marginal against mu_{A*}
    lhs = rhs = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < M; ++j) row += bk.K[i * M + j] * bk.rho[j];
        lhs += bk.rho_star[i] * row * testutil::g_fn(grid->nodes[i]);
        rhs += sol_star.gibbs[i] * testutil::g_fn(grid->nodes[i]);
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("kernel gradients: closed forms and range cancellation") {
    auto grid = testutil::gaussian_grid(24);
    std::mt19937_64 rng(44);
    auto p2 = make_p2(0.8);
    auto ik2 = make_involution_kernel(p2);

    auto ikc = make_involution_kernel(make_constant_potential(0.5));
    for (int t = 0; t < 10; ++t) {
        auto y = testutil::random_word(rng, *grid, 2);
        auto x = testutil::random_word(rng, *grid, 2);
        CHECK(kernel_gradient(ikc, 1, y, x) == 0.0);
        const double expect = p2.partials[1](std::vector<double>{y[0], x[0]});
        CHECK(kernel_gradient(ik2, 1, y, x) == doctest::Approx(expect).epsilon(1e-15));
        CHECK(kernel_gradient(ik2, 2, y, x) == 0.0);  // no term reaches x_2
    }

    Potential no_partials = make_p2(0.8);
    no_partials.partials.clear();
    auto ik_np = make_involution_kernel(no_partials);
    CHECK_THROWS_AS(
        kernel_gradient(ik_np, 1, std::vector<double>{0.1}, std::vector<double>{0.1}),
        CapabilityError);
}

TEST_CASE("eigenfunction gradient matches finite differences") {
    auto grid = testutil::gaussian_grid(100);
    auto p2 = make_p2(0.8);
    auto ik = make_involution_kernel(p2);
    auto [sol, sol_star] = solve_pair(ik, grid);
    auto bk = bilateral_normalize(ik, sol, sol_star);

    auto grad = eigenfunction_gradient(bk, ik, 1);
    const double h = 1e-4;
    for (std::size_t j = 20; j < 80; j += 7) {
        const double x = grid->nodes[j];
        const double fd = (kernel_eigenfunction_at(bk, ik, x + h) -
                           kernel_eigenfunction_at(bk, ik, x - h)) /
                          (2 * h);
        CHECK(std::abs(grad[j] - fd) <= 1e-4);
    }

    // zero potential: gradient vanishes identically
    auto ik0 = make_involution_kernel(make_p2(0.0));
    auto [sol0, sol0s] = solve_pair(ik0, grid);
    auto bk0 = bilateral_normalize(ik0, sol0, sol0s);
    auto grad0 = eigenfunction_gradient(bk0, ik0, 1);
    for (double v : grad0.values()) CHECK(std::abs(v) <= 1e-12);
}
