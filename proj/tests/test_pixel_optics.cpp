#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rislink/errors.hpp"
#include "rislink/pixel_optics.hpp"

using namespace rislink;

namespace {

// Reference optics: 2 mm square pixel at 1550 nm.
PixelOpticsSpec table_optics(double strehl = 1.0, double rho = 1.0) {
    return PixelOpticsSpec::from_pixel(2e-3, 2e-3, 1550e-9, strehl, rho);
}

QuadratureSpec tight_quad() {
    QuadratureSpec q;
    q.relative_tolerance = 1e-12;
    return q;
}

} // namespace

TEST_CASE("sinc: exact at zero, series branch consistent with sin(u)/u") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(std::numbers::pi) == doctest::Approx(0.0).scale(1.0));
    // continuity across the series/libm boundary
    for (double u : {1e-5, 9.9e-5, 1.01e-4, 1e-3}) {
        CHECK(sinc(u) == doctest::Approx(std::sin(u) / u).epsilon(1e-14));
        CHECK(sinc(-u) == sinc(u));
    }
}

TEST_CASE("ideal pixel gain: boresight peak, first null, reference value") {
    const PixelOpticsSpec spec = table_optics();
    CHECK(spec.k_x == doctest::Approx(4053.667940115862).epsilon(1e-13));
    CHECK(ideal_pixel_gain({0, 0}, spec) == 1.0);
    const double mu_null = 1550e-9 / 2e-3; // k_x * mu = pi
    CHECK(ideal_pixel_gain({mu_null, 0}, spec) == doctest::Approx(0.0).scale(1.0));
    // independent high-precision evaluation of the formula
    CHECK(ideal_pixel_gain({1.2e-4, 1.2e-4}, spec) ==
          doctest::Approx(0.8529855921506857).epsilon(1e-12));
}

TEST_CASE("long-exposure gain: zero-jitter limit is exact") {
    const PixelOpticsSpec spec = table_optics(0.9, 0.8);
    const JitterSpec none{};
    const QuadratureSpec quad;
    for (double mux : {0.0, 1e-4, 5e-4}) {
        const Vec2 mu{mux, 0.5e-4};
        CHECK(long_exposure_gain(mu, spec, none, quad) ==
              0.9 * 0.8 * ideal_pixel_gain(mu, spec));
    }
}

TEST_CASE("long-exposure gain via the numeric 2-D rule reproduces sinc^2 at zero jitter") {
    const PixelOpticsSpec spec = table_optics();
    const JitterSpec none{};
    for (double mux : {0.0, 1e-4, 3e-4, 6e-4}) {
        const Vec2 mu{mux, 0.4e-4};
        const double want = ideal_pixel_gain(mu, spec);
        const double got = long_exposure_gain_quad2d(mu, spec, none, tight_quad());
        if (want > 1e-3) CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("boresight long-exposure gain at 0.2 mrad matches the frozen oracle value") {
    const PixelOpticsSpec spec = table_optics();
    const JitterSpec jit = JitterSpec::isotropic(0.2e-3);
    const double gain = long_exposure_gain({0, 0}, spec, jit, tight_quad());
    CHECK(gain == doctest::Approx(0.6844642889874590).epsilon(1e-9));
    CHECK(blur_kernel_1d(0.0, spec.k_x, 0.2e-3, tight_quad()) ==
          doctest::Approx(0.8273235697038125).epsilon(1e-9));
}

TEST_CASE("huge jitter kills the gain") {
    const PixelOpticsSpec spec = table_optics();
    const JitterSpec jit = JitterSpec::isotropic(1.0); // 1 rad
    CHECK(long_exposure_gain({0, 0}, spec, jit, QuadratureSpec{}) < 1e-6);
}

TEST_CASE("Monte Carlo oracle: exact at zero jitter, deterministic, agrees with quadrature") {
    const PixelOpticsSpec spec = table_optics();
    const JitterSpec none{};
    const McGain g0 = long_exposure_gain_mc({1e-4, 0}, spec, none, 2000, 7);
    CHECK(g0.mean == ideal_pixel_gain({1e-4, 0}, spec));
    CHECK(g0.std_error == 0.0);

    const JitterSpec jit = JitterSpec::isotropic(0.2e-3);
    const McGain a = long_exposure_gain_mc({0, 0}, spec, jit, 200000, 123);
    const McGain b = long_exposure_gain_mc({0, 0}, spec, jit, 200000, 123);
    CHECK(a.mean == b.mean); // bit-identical under the same seed
    CHECK(a.std_error == b.std_error);

    const double quad = long_exposure_gain({0, 0}, spec, jit, tight_quad());
    CHECK(std::abs(a.mean - quad) <= 3.0 * a.std_error);

    CHECK_THROWS_AS(long_exposure_gain_mc({0, 0}, spec, jit, 10, 1), ConfigError);
}

TEST_CASE("boresight oracle at 1e6 draws pins the quadrature to 1e-3 relative") {
    const PixelOpticsSpec spec = table_optics();
    const JitterSpec jit = JitterSpec::isotropic(0.2e-3);
    const McGain mc = long_exposure_gain_mc({0, 0}, spec, jit, 1000000, 20240809);
    const double quad = long_exposure_gain({0, 0}, spec, jit, QuadratureSpec{});
    CHECK(std::abs(quad - mc.mean) / quad < 1e-3);
}

TEST_CASE("blur kernel: zero-sigma limit and separable equivalence") {
    const PixelOpticsSpec spec = table_optics();
    const QuadratureSpec quad = tight_quad();
    CHECK(blur_kernel_1d(2e-4, spec.k_x, 0.0, quad) ==
          doctest::Approx(std::pow(sinc(spec.k_x * 2e-4), 2)));

    // diagonal-covariance 2-D rule equals the 1-D kernel product
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> umu(-6e-4, 6e-4);
    std::uniform_real_distribution<double> usig(0.0, 6e-4);
    for (int i = 0; i < 8; ++i) {
        const Vec2 mu{umu(rng), umu(rng)};
        const double sx = usig(rng), sy = usig(rng);
        const JitterSpec jit = JitterSpec::anisotropic(sx, sy);
        const double two_d = long_exposure_gain_quad2d(mu, spec, jit, quad);
        const double product =
            blur_kernel_1d(mu.x, spec.k_x, sx, quad) * blur_kernel_1d(mu.y, spec.k_y, sy, quad);
        if (two_d > 1e-9) CHECK(two_d == doctest::Approx(product).epsilon(1e-6));
    }
    CHECK(blur_kernel_1d(0.0, spec.k_x, 0.5, quad) < 1e-3); // sigma -> infinity limit
}

TEST_CASE("bounds, symmetry and boresight monotonicity") {
    const PixelOpticsSpec spec = table_optics(0.85, 0.9);
    const QuadratureSpec quad;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> umu(-8e-4, 8e-4);
    std::uniform_real_distribution<double> usig(0.0, 1e-3);
    std::uniform_real_distribution<double> ucorr(-0.9, 0.9);
    for (int i = 0; i < 20; ++i) {
        const Vec2 mu{umu(rng), umu(rng)};
        const JitterSpec jit = JitterSpec::anisotropic(usig(rng), usig(rng), ucorr(rng));
        const double g = long_exposure_gain(mu, spec, jit, quad);
        CHECK(g >= 0.0);
        CHECK(g <= spec.strehl * spec.obliquity + 1e-12);
        const double gm = long_exposure_gain({-mu.x, -mu.y}, spec, jit, quad);
        CHECK(g == doctest::Approx(gm).epsilon(1e-9).scale(1e-12));
    }

    double prev = 2.0;
    for (double sig : {0.0, 0.1e-3, 0.2e-3, 0.5e-3}) {
        const double g = long_exposure_gain({0, 0}, spec, JitterSpec::isotropic(sig), quad);
        CHECK(g < prev);
        prev = g;
    }
}

TEST_CASE("null filling: strictly positive gain at the ideal null under jitter") {
    const PixelOpticsSpec spec = table_optics();
    const double mu_null = 1550e-9 / 2e-3;
    for (double sig : {0.1e-3, 0.2e-3, 0.5e-3}) {
        const double g =
            long_exposure_gain({mu_null, 0}, spec, JitterSpec::isotropic(sig), QuadratureSpec{});
        CHECK(g > 1e-9);
    }
    // frozen oracle: 1-D kernel at the null, sigma = 0.2 mrad
    CHECK(blur_kernel_1d(mu_null, spec.k_x, 0.2e-3, tight_quad()) ==
          doctest::Approx(0.06114443417170708).epsilon(1e-8));
}

TEST_CASE("quadrature agrees with the Monte Carlo oracle at random (mu, Sigma) points") {
    const PixelOpticsSpec spec = table_optics();
    const QuadratureSpec quad;
    std::mt19937_64 rng(2025);
    std::uniform_real_distribution<double> umu(-7e-4, 7e-4);
    std::uniform_real_distribution<double> usig(0.05e-3, 0.8e-3);
    std::uniform_real_distribution<double> ucorr(-0.8, 0.8);
    for (int i = 0; i < 20; ++i) {
        const Vec2 mu{umu(rng), umu(rng)};
        const JitterSpec jit = JitterSpec::anisotropic(usig(rng), usig(rng), ucorr(rng));
        const double q = long_exposure_gain(mu, spec, jit, quad);
        const McGain mc = long_exposure_gain_mc(mu, spec, jit, 400000, 1000 + i);
        const double tolerance = 3.0 * (mc.std_error + quad.relative_tolerance * q) + 1e-12;
        CHECK(std::abs(q - mc.mean) <= tolerance);
    }
}

TEST_CASE("deviation surface: zero at zero jitter, attenuation at peak, filling at null") {
    const PixelOpticsSpec spec = table_optics(0.8, 0.9); // forced to S=rho=1 internally
    const double mu_null = 1550e-9 / 2e-3;
    const std::vector<Vec2> grid{{0, 0}, {mu_null, 0}};
    const auto flat = deviation_surface(grid, spec, JitterSpec{}, QuadratureSpec{});
    CHECK(flat[0] == 0.0);
    CHECK(flat[1] == doctest::Approx(0.0).scale(1.0));
    const auto dev = deviation_surface(grid, spec, JitterSpec::isotropic(0.2e-3), QuadratureSpec{});
    CHECK(dev[0] > 0.0);  // boresight attenuation
    CHECK(dev[1] < 0.0);  // null filling
}

TEST_CASE("sigma solver hits a requested boresight attenuation") {
    const PixelOpticsSpec spec = table_optics();
    const QuadratureSpec quad;
    for (double target : {0.1, 0.2, 0.4}) {
        const double sigma = solve_sigma_for_boresight_attenuation(target, spec, quad);
        const double gain = long_exposure_gain({0, 0}, spec, JitterSpec::isotropic(sigma), quad);
        CHECK(gain == doctest::Approx(1.0 - target).epsilon(1e-6));
    }
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(PixelOpticsSpec::from_pixel(2e-3, 2e-3, 1550e-9, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(PixelOpticsSpec::from_pixel(2e-3, 2e-3, 1550e-9, 1.0, 1.5), ConfigError);
    JitterSpec bad{1e-8, 5e-7, 1e-8}; // off-diagonal breaks PSD
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    QuadratureSpec q;
    q.nodes_per_axis = 4;
    CHECK_THROWS_AS(q.validate(), ConfigError);
}

TEST_CASE("non-convergent quadrature raises NumericalError with diagnostics") {
    const PixelOpticsSpec spec = table_optics();
    QuadratureSpec q;
    q.nodes_per_axis = 16;
    q.max_nodes_per_axis = 32;
    q.relative_tolerance = 1e-16;
    try {
        blur_kernel_1d(1e-4, spec.k_x, 0.2e-3, q);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.estimate > 0.0);
        CHECK(std::isfinite(e.error_bound));
    }
}

TEST_CASE("detailed evaluation reports refinement diagnostics and the clamp flag") {
    const PixelOpticsSpec spec = table_optics();
    const GainEvaluation exact =
        long_exposure_gain_detailed({1e-4, 0}, spec, JitterSpec{}, QuadratureSpec{});
    CHECK(exact.nodes_per_axis == 0);
    CHECK_FALSE(exact.clamped_negative);
    CHECK(exact.refinement_error == 0.0);

    const GainEvaluation blurred = long_exposure_gain_detailed(
        {1e-4, 0}, spec, JitterSpec::isotropic(0.2e-3), QuadratureSpec{});
    CHECK(blurred.nodes_per_axis >= 16);
    CHECK(blurred.refinement_error >= 0.0);
    CHECK(blurred.refinement_error < 1e-6 * blurred.value + 1e-12);
    CHECK(blurred.value == long_exposure_gain({1e-4, 0}, spec, JitterSpec::isotropic(0.2e-3),
                                              QuadratureSpec{}));
    CHECK(blurred.value >= 0.0);
}

TEST_CASE("two-hop gain: product form and bounds") {
    CHECK(two_hop_gain(1.0, 0.5) == 0.5);
    CHECK(two_hop_gain(0.0, 0.73) == 0.0);
    const PixelOpticsSpec spec = table_optics(0.9, 0.8);
    const JitterSpec jit = JitterSpec::isotropic(0.2e-3);
    const QuadratureSpec quad;
    const double g_tr = long_exposure_gain({1e-4, 0}, spec, jit, quad);
    const double g_rr = long_exposure_gain({0, -2e-4}, spec, jit, quad);
    const double combined = two_hop_gain(g_tr, g_rr);
    CHECK(combined == g_tr * g_rr);
    const double cap = spec.strehl * spec.obliquity;
    CHECK(combined <= cap * cap);
    CHECK_THROWS_AS(two_hop_gain(-0.1, 0.5), ConfigError);
}
