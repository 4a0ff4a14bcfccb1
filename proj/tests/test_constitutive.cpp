#include <cmath>
#include <random>

#include "doctest.h"
#include "evfx/constitutive.hpp"
#include "test_helpers.hpp"

using namespace evfx;
using namespace evfx::testing;

TEST_CASE("mollify: constants exact, integral preserved, single-mode damping") {
    const Grid g = grid2(64);
    SpectralWorkspace ws(g);
    MollifierField eta = make_mollifier(ws, 0.5);

    ScalarField c(g, 3.7);
    CHECK(max_abs_diff(mollify(ws, c, eta), c) < 1e-12);

    std::mt19937_64 rng(3);
    ScalarField f = random_band_limited(g, 8, rng);
    CHECK(std::abs(integrate(mollify(ws, f, eta)) - integrate(f)) < 1e-11);

    // rho = 1 + cos x damps to 1 + c1 cos x; c1 from direct quadrature of the
    // kernel against cos x (the kernel transform at the first mode).
    ScalarField kernel(g);
    const double h = 0.5;
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        double r2 = 0.0;
        for (std::size_t a = 0; a < 2; ++a) {
            double d = g.coord(i, a);
            d = std::min(d, g.lengths[a] - d);
            r2 += d * d;
        }
        const double s2 = r2 / (h * h);
        kernel[i] = (s2 < 1.0) ? std::exp(-1.0 / (1.0 - s2)) : 0.0;
    }
    kernel *= 1.0 / integrate(kernel);
    const double c1 = integrate(multiply(kernel, cos_mode(g, {1, 0})));
    CHECK(c1 > 0.0);
    CHECK(c1 < 1.0);

    ScalarField rho = ScalarField(g, 1.0) + cos_mode(g, {1, 0});
    ScalarField expect = ScalarField(g, 1.0) + c1 * cos_mode(g, {1, 0});
    CHECK(max_abs_diff(mollify(ws, rho, eta), expect) < 1e-12);
}

TEST_CASE("mollify is linear and positivity preserving") {
    const Grid g = grid2(32);
    SpectralWorkspace ws(g);
    MollifierField eta = make_mollifier(ws, 0.0);  // default radius

    std::mt19937_64 rng(5);
    ScalarField a = random_band_limited(g, 6, rng);
    ScalarField b = random_band_limited(g, 6, rng);
    ScalarField lin = mollify(ws, 2.0 * a + (-0.5) * b, eta);
    ScalarField ref = 2.0 * mollify(ws, a, eta) + (-0.5) * mollify(ws, b, eta);
    CHECK(max_abs_diff(lin, ref) < 1e-12);

    ScalarField pos = map(a, [](double z) { return std::abs(z) + 0.1; });
    ScalarField sm = mollify(ws, pos, eta);
    CHECK(sm.min() >= pos.min() - 1e-12);
    CHECK(sm.max() <= pos.max() + 1e-12);

    CHECK_THROWS(make_mollifier(ws, 2.0));  // 2.0 >= 2*pi/4
}

TEST_CASE("viscosity_fields: constants, quadratic law, inadmissible rejection") {
    const Grid g = grid2(16);

    auto [mu_c, lam_c] = viscosity_fields(constant_viscosity(1.0, 0.0), ScalarField(g, 2.0));
    CHECK(linf_norm(mu_c - ScalarField(g, 1.0)) == 0.0);
    CHECK(linf_norm(lam_c) == 0.0);

    ViscosityLaw quad = power_viscosity(1.0, 1.0, 2.0, 0.0);
    auto [mu_q, lam_q] = viscosity_fields(quad, ScalarField(g, 2.0));
    CHECK(mu_q[0] == doctest::Approx(5.0));
    CHECK(lam_q[0] == 0.0);

    // lambda = -2 mu violates lambda + mu >= 0 in 2D
    ViscosityLaw bad = constant_viscosity(1.0, -2.0);
    CHECK_THROWS(viscosity_fields(bad, ScalarField(g, 1.0)));
}

TEST_CASE("pressure values, clipping, monotonicity") {
    const Grid g = grid2(16);
    PressureParams p1{1.0, 1.4, 0.0, 4.5};
    CHECK(linf_norm(pressure(ScalarField(g, 1.0), p1) - ScalarField(g, 1.0)) < 1e-15);

    PressureParams p2{1.0, 2.0, 0.1, 4.0};
    CHECK(pressure(ScalarField(g, 2.0), p2)[0] == doctest::Approx(5.6).epsilon(1e-14));

    std::uint64_t clips = 0;
    ScalarField z(g, 0.0);
    z[3] = -1e-3;
    ScalarField pr = pressure(z, p1, &clips);
    CHECK(pr[3] == 0.0);
    CHECK(clips == 1);
    CHECK(linf_norm(pressure(ScalarField(g, 0.0), p2)) == 0.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(0.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double a = d(rng), b = d(rng);
        ScalarField fa(g, std::min(a, b)), fb(g, std::max(a, b));
        CHECK(pressure(fa, p2)[0] <= pressure(fb, p2)[0] + 1e-15);
    }
}

TEST_CASE("coeff_F values and failure") {
    const Grid g = grid2(16);
    ScalarField half = coeff_F(ScalarField(g, 1.0), ScalarField(g, 0.0));
    CHECK(linf_norm(half - ScalarField(g, 0.5)) < 1e-15);
    ScalarField fifth = coeff_F(ScalarField(g, 2.0), ScalarField(g, 1.0));
    CHECK(fifth[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK_THROWS(coeff_F(ScalarField(g, 1.0), ScalarField(g, -2.0)));
}

TEST_CASE("stress: shear case, zero velocity, trace identity") {
    const Grid g = grid2(32);
    SpectralWorkspace ws(g);

    VectorField shear(g);
    shear[0] = sin_mode(g, {0, 1});
    TensorField s = stress(ws, shear, ScalarField(g, 1.0), ScalarField(g, 0.0));
    CHECK(max_abs_diff(s.at(0, 1), cos_mode(g, {0, 1})) < 1e-12);
    CHECK(max_abs_diff(s.at(1, 0), cos_mode(g, {0, 1})) < 1e-12);
    CHECK(linf_norm(s.at(0, 0)) < 1e-13);
    CHECK(linf_norm(s.at(1, 1)) < 1e-13);

    TensorField sz = stress(ws, VectorField(g), ScalarField(g, 2.0), ScalarField(g, 1.0));
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(linf_norm(sz.at(i, j)) < 1e-14);

    std::mt19937_64 rng(11);
    VectorField u(g);
    u[0] = random_band_limited(g, 5, rng);
    u[1] = random_band_limited(g, 5, rng);
    const double mu0 = 1.3, lam0 = 0.4;
    TensorField su = stress(ws, u, ScalarField(g, mu0), ScalarField(g, lam0));
    ScalarField trace = su.at(0, 0) + su.at(1, 1);
    ScalarField expect = (2.0 * lam0 + 2.0 * mu0) * divergence(ws, u);
    CHECK(max_abs_diff(trace, expect) < 1e-11);
}

TEST_CASE("truncate: exact branches, pinned blend value, concavity, slope bound") {
    const Grid g = grid2(16);

    CHECK(truncate(ScalarField(g, 5.0), 10.0)[0] == 5.0);
    CHECK(truncate(ScalarField(g, 40.0), 10.0)[0] == 20.0);

    // blend at z/M = 2: t = 1/2, T = 1 + 2(1/2 - 1/8 + 1/32) = 29/16
    const double mid = truncate_value(20.0, 10.0);
    CHECK(mid == doctest::Approx(10.0 * 29.0 / 16.0).epsilon(1e-15));
    CHECK(mid > 10.0);
    CHECK(mid < 20.0);

    for (double M : {1.0, 10.0, 100.0}) {
        double prev_val = -1e300;
        const int samples = 2000;
        const double dz = 4.0 * M / double(samples);
        for (int k = 0; k <= samples; ++k) {
            const double z = dz * double(k);
            const double v = truncate_value(z, M);
            CHECK(v >= prev_val - 1e-12);  // monotone
            prev_val = v;
            const double slope = TruncationFamily::base_derivative(z / M);
            CHECK(slope <= 1.0 + 1e-15);
            CHECK(slope >= 0.0);
        }
        for (int k = 1; k < samples; ++k) {
            const double z = dz * double(k);
            const double dd = truncate_value(z + dz, M) - 2.0 * truncate_value(z, M) +
                              truncate_value(z - dz, M);
            CHECK(dd <= 1e-12 * std::max(1.0, M));
        }
    }
    CHECK_THROWS(truncate(ScalarField(g, 1.0), 0.0));
}

TEST_CASE("truncation error bound against the L^gamma mass") {
    const Grid g = grid2(32);
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double gamma = 2.0;

    for (int trial = 0; trial < 5; ++trial) {
        ScalarField rho(g);
        for (auto& v : rho.data) v = std::exp(0.8 * gauss(rng));  // lognormal
        const double mass_gamma = std::pow(lp_norm(rho, gamma), gamma);
        for (double M : {2.0, 8.0, 32.0})
            for (double p : {1.0, gamma / 2.0 + 0.5}) {
                ScalarField diff = truncate(rho, M) - rho;
                const double lhs = std::pow(lp_norm(diff, p), p);
                const double bound = mass_gamma / std::pow(M, gamma - p);
                CHECK(lhs <= bound * (1.0 + 1e-12));
            }
    }
}
