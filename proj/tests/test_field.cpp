#include <cmath>
#include <random>

#include "doctest.h"
#include "evfx/field.hpp"
#include "test_helpers.hpp"

using namespace evfx;
using namespace evfx::testing;

TEST_CASE("grid invariants are enforced") {
    CHECK_THROWS(Grid({4, 8}, {1.0, 1.0}));      // too small
    CHECK_THROWS(Grid({9, 8}, {1.0, 1.0}));      // odd
    CHECK_THROWS(Grid({8}, {1.0}));              // N < 2
    CHECK_THROWS(Grid({8, 8}, {1.0, -1.0}));     // negative length
    CHECK_NOTHROW(Grid({8, 8, 8}, {1.0, 1.0, 1.0}));
}

TEST_CASE("integrate: constants, odd modes, pure-mode orthogonality") {
    const Grid g = grid2(64);
    const double four_pi2 = 4.0 * M_PI * M_PI;

    CHECK(integrate(ScalarField(g, 1.0)) == doctest::Approx(four_pi2).epsilon(1e-14));

    ScalarField sx = sin_mode(g, {1, 0});
    CHECK(std::abs(integrate(sx)) < 1e-12);

    ScalarField f = sample(g, [](const std::array<double, 3>& x) {
        return 1.0 + 0.3 * std::cos(x[0]) * std::cos(x[1]);
    });
    CHECK(std::abs(integrate(f) - four_pi2) / four_pi2 < 1e-12);
}

TEST_CASE("lp_norm basic values") {
    const Grid g = grid2(32);
    CHECK(lp_norm(ScalarField(g, 2.0), 2.0) == doctest::Approx(4.0 * M_PI).epsilon(1e-13));
    CHECK(lp_norm(cos_mode(g, {1, 0}), 2.0) == doctest::Approx(M_PI * std::sqrt(2.0)).epsilon(1e-13));
    CHECK(lp_norm(ScalarField(g, 0.0), 3.5) == 0.0);
    CHECK_THROWS(lp_norm(ScalarField(g, 1.0), 0.5));
}

TEST_CASE("integrate is linear; lp_norm triangle inequality") {
    const Grid g = grid2(16);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        ScalarField a = random_band_limited(g, 4, rng);
        ScalarField b = random_band_limited(g, 4, rng);
        std::uniform_real_distribution<double> c(-2.0, 2.0);
        const double ca = c(rng), cb = c(rng);
        ScalarField lin = ca * a + cb * b;
        CHECK(std::abs(integrate(lin) - (ca * integrate(a) + cb * integrate(b))) < 1e-10);
        for (double p : {1.0, 2.0, 3.0})
            CHECK(lp_norm(a + b, p) <= lp_norm(a, p) + lp_norm(b, p) + 1e-12);
    }
}

TEST_CASE("coarse_average: constants, whole-domain block, mean preservation") {
    const Grid g = grid2(64);
    ScalarField c(g, 3.25);
    CHECK(max_abs_diff(coarse_average(c, 8), c) == 0.0);

    ScalarField cx = cos_mode(g, {1, 0});
    ScalarField avg = coarse_average(cx, 64);
    CHECK(linf_norm(avg) < 1e-14);

    std::mt19937_64 rng(3);
    ScalarField f = random_band_limited(g, 6, rng);
    for (std::size_t block : {2u, 4u, 8u, 16u}) {
        ScalarField cf = coarse_average(f, block);
        CHECK(std::abs(integrate(cf) - integrate(f)) < 1e-10);
    }
    CHECK_THROWS(coarse_average(f, 5));  // 5 does not divide 64
}

TEST_CASE("discrete Jensen: coarse average of convex image dominates") {
    const Grid g = grid2(32);
    std::mt19937_64 rng(11);
    auto phi = [](double z) { return z * z; };
    for (int trial = 0; trial < 10; ++trial) {
        ScalarField f = random_band_limited(g, 5, rng);
        ScalarField lhs = coarse_average(map(f, phi), 8);
        ScalarField rhs = map(coarse_average(f, 8), phi);
        CHECK(integrate(lhs - rhs) >= -1e-12);
    }
}
