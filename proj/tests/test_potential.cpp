#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"
#include "thermolat/errors.hpp"
#include "thermolat/potential.hpp"

using namespace thermolat;
constexpr double kPi = std::numbers::pi;

TEST_CASE("ergodic sums") {
    std::vector<double> word{1.0, 1.0, 1.0, 0.5, -2.0, 0.0};

    auto p0 = make_zero_potential();
    CHECK(ergodic_sum(p0, 5, word) == 0.0);

    auto pc = make_constant_potential(0.5);
    CHECK(ergodic_sum(pc, 4, word) == doctest::Approx(2.0).epsilon(1e-15));

    // arctan(1) = pi/4, so g(1) = 1/2 and each window of (1,1,1) gives 0.2
    auto p2 = make_p2(0.8);
    CHECK(ergodic_sum(p2, 2, std::vector<double>{1.0, 1.0, 1.0}) ==
          doctest::Approx(0.4).epsilon(1e-15));

    CHECK_THROWS_AS(ergodic_sum(p2, 3, std::vector<double>{1.0, 1.0}), ArgumentError);
    CHECK_THROWS_AS(ergodic_sum(p2, 0, word), ArgumentError);
}

TEST_CASE("cocycle identity S_{n+m} = S_n + S_m o sigma^n") {
    std::mt19937_64 rng(31);
    auto grid = testutil::gaussian_grid(24);
    for (const auto& p : {make_p1(), make_p2(0.8), make_p3()}) {
        for (int t = 0; t < 40; ++t) {
            const std::size_t n = 1 + (rng() % 3), m = 1 + (rng() % 3);
            auto word = testutil::random_word(rng, *grid, n + m + p.range - 1);
            const double lhs = ergodic_sum(p, n + m, word);
            const double rhs =
                ergodic_sum(p, n, word) +
                ergodic_sum(p, m, std::span<const double>(word).subspan(n));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
        }
    }
}

TEST_CASE("library potentials satisfy their declared bounds") {
    std::mt19937_64 rng(32);
    auto grid = testutil::gaussian_grid(48);
    for (const auto& p : {make_zero_potential(), make_constant_potential(0.5), make_p1(),
                          make_p2(0.8), make_p3()}) {
        for (int t = 0; t < 200; ++t) {
            auto w = testutil::random_word(rng, *grid, p.range);
            CHECK(std::abs(p.eval(w)) <= p.sup_norm_bound + 1e-12);
        }
        const double est = estimate_holder(p, *grid, 400);
        CHECK(est <= p.holder_constant + 1e-9);
    }
}

TEST_CASE("partials match finite differences") {
    std::mt19937_64 rng(33);
    auto grid = testutil::gaussian_grid(32);
    const double h = 1e-6;
    for (const auto& p : {make_p1(), make_p2(0.8), make_p3()}) {
        REQUIRE(p.has_partials());
        for (int t = 0; t < 30; ++t) {
            auto w = testutil::random_word(rng, *grid, p.range);
            // keep away from the huge outer nodes where A is flat
            bool extreme = false;
            for (double v : w) extreme |= std::abs(v) > 50;
            if (extreme) continue;
            for (std::size_t j = 0; j < p.range; ++j) {
                auto wp = w, wm = w;
                wp[j] += h;
                wm[j] -= h;
                const double fd = (p.eval(wp) - p.eval(wm)) / (2 * h);
                CHECK(fd == doctest::Approx(p.partials[j](w)).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("decay condition") {
    auto grid = testutil::gaussian_grid(64);

    auto r1 = check_decay_condition(make_p1(), *grid, 0.0, 8);
    CHECK(r1.pass);  // endpoint value -pi^2/4 < 0
    CHECK(r1.worst_margin == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-12));

    auto r2 = check_decay_condition(make_p2(0.8), *grid, 0.0, 8);
    CHECK_FALSE(r2.pass);  // A(+inf,+inf) = 0.8 is maximal

    auto r0 = check_decay_condition(make_zero_potential(), *grid, 0.0, 8);
    CHECK_FALSE(r0.pass);  // equality, not strict
    CHECK(r0.worst_margin == 0.0);

    // P3 prefers U2 = 2 U1, so at the context U1 = pi/2 the second-coordinate
    // endpoint beats z0 = 0 by 3 pi^2 / 16.
    auto r3 = check_decay_condition(make_p3(), *grid, 0.0, 8);
    CHECK_FALSE(r3.pass);
    CHECK(r3.worst_margin ==
          doctest::Approx(-3.0 * kPi * kPi / 16.0).epsilon(2e-3));

    // A separable well does satisfy the condition with a uniform margin.
    Potential well;
    well.range = 2;
    well.eval = [](std::span<const double> x) {
        const double u = std::atan(x[0]), v = std::atan(x[1]);
        return -u * u - v * v;
    };
    well.sup_norm_bound = kPi * kPi / 2.0;
    well.holder_constant = 4.0 * kPi * kPi;
    auto rw = check_decay_condition(well, *grid, 0.0, 8);
    CHECK(rw.pass);
    CHECK(rw.worst_margin == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-12));
}

TEST_CASE("class E membership") {
    auto grid = testutil::gaussian_grid(48);

    CHECK(check_class_E(make_p2(0.8), *grid, 3, 300).pass);
    CHECK_FALSE(check_class_E(make_p2(-0.8), *grid, 3, 300).pass);
    CHECK(check_class_E(make_constant_potential(0.5), *grid, 2, 100).pass);
    CHECK(check_class_E(make_p1(), *grid, 2, 100).pass);  // derivative vanishes

    Potential no_partials = make_p2(0.8);
    no_partials.partials.clear();
    CHECK_THROWS_AS(check_class_E(no_partials, *grid, 2, 10), CapabilityError);
}

TEST_CASE("site insertion derivative is the windowed partial sum") {
    // range 2, n = 3: only the window (x_3, t) contains the inserted site.
    auto p2 = make_p2(0.8);
    std::vector<double> word{0.5, -1.0, 2.0, 0.7, 0.1, 0.1};
    const double expect = p2.partials[1](std::vector<double>{2.0, 0.7});
    CHECK(site_insertion_derivative(p2, 3, word) ==
          doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("holder estimate: closed form for the scaled arctan potential") {
    // A(x) = (2/pi) arctan(x1): every single-coordinate pair realizes ratio 4.
    Potential p;
    p.range = 1;
    p.eval = [](std::span<const double> x) { return testutil::g_fn(x[0]); };
    p.sup_norm_bound = 1.0;
    p.holder_constant = 4.0;
    auto grid = testutil::gaussian_grid(64);
    const double est = estimate_holder(p, *grid, 200);
    CHECK(est == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("holder estimate: stability and dense-pair oracle for P1") {
    auto grid = testutil::gaussian_grid(40);
    auto p1 = make_p1();

    // Oracle: enumerate every node pair (P1 reads one coordinate).
    double oracle = 0.0;
    for (std::size_t i = 0; i < grid->size; ++i) {
        for (std::size_t j = i + 1; j < grid->size; ++j) {
            std::vector<double> x{grid->nodes[i]}, y{grid->nodes[j]};
            const double d = metric_distance(x, y);
            oracle = std::max(oracle, std::abs(p1.eval(x) - p1.eval(y)) / d);
        }
    }

    const double est500 = estimate_holder(p1, *grid, 500);
    const double est1000 = estimate_holder(p1, *grid, 1000);
    CHECK(std::abs(est1000 - est500) <= 0.05 * est500);
    CHECK(est1000 >= 0.95 * oracle);
    CHECK(est1000 <= oracle + 1e-9);
    CHECK(est1000 <= p1.holder_constant + 1e-9);  // 2 pi^2

    CHECK_THROWS_AS(estimate_holder(p1, *grid, 0), ArgumentError);
}

TEST_CASE("potential registry") {
    CHECK(potential_by_id("P0", {}).range == 1);
    CHECK(potential_by_id("Pc", std::vector<double>{0.7}).eval(std::vector<double>{0.0}) ==
          0.7);
    CHECK(potential_by_id("P2", std::vector<double>{0.5}).sup_norm_bound == 0.5);
    CHECK_THROWS_AS(potential_by_id("nope", {}), ConfigurationError);
}

TEST_CASE("reflection swaps coordinates") {
    auto p2 = make_p2(0.8);
    auto p3 = make_p3();
    std::mt19937_64 rng(7);
    auto grid = testutil::gaussian_grid(16);
    for (int t = 0; t < 20; ++t) {
        auto w = testutil::random_word(rng, *grid, 2);
        std::vector<double> sw{w[1], w[0]};
        for (const auto& p : {p2, p3}) {
            auto r = reflect_potential(p);
            CHECK(r.eval(w) == doctest::Approx(p.eval(sw)).epsilon(1e-15));
            CHECK(r.partials[0](w) == doctest::Approx(p.partials[1](sw)).epsilon(1e-15));
            CHECK(r.partials[1](w) == doctest::Approx(p.partials[0](sw)).epsilon(1e-15));
        }
    }
}
