#include "rislink/errors.hpp"
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rislink/feedback.hpp"
#include "rislink/kernels.hpp"
#include "rislink/phase_control.hpp"

using namespace rislink;

namespace {

std::vector<cplx> random_channel(int n, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::vector<cplx> g(n);
    for (auto& v : g) v = circular_gaussian(rng, 1.0);
    return g;
}

std::vector<cplx> weights_of(const std::vector<double>& phases) {
    std::vector<cplx> w(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i) w[i] = std::polar(1.0, phases[i]);
    return w;
}

} // namespace

TEST_CASE("optimal phases: aligned objective equals sum of magnitudes") {
    // real positive channel -> all-ones weights
    const std::vector<cplx> pos{{1, 0}, {2, 0}, {0.5, 0}};
    const auto ph = optimal_phases(pos);
    for (double p : ph) CHECK(p == 0.0);
    CHECK(std::abs(combined_amplitude(pos, weights_of(ph))) == doctest::Approx(3.5));

    // N=1 purely imaginary: objective magnitude is |g|
    const std::vector<cplx> imag{{0, 1}};
    const auto phi = optimal_phases(imag);
    CHECK(std::abs(combined_amplitude(imag, weights_of(phi))) == doctest::Approx(1.0));

    // random channels: identity |g^H theta*| = sum |g_n| to machine precision
    for (int rep = 0; rep < 10; ++rep) {
        const auto g = random_channel(64, 10 + rep);
        const auto w = weights_of(optimal_phases(g));
        const double got = std::abs(combined_amplitude(g, w));
        const double want = kernels::sum_abs(g.data(), g.size());
        CHECK(got == doctest::Approx(want).epsilon(1e-14));
    }

    // zero entries keep phase 0
    const std::vector<cplx> withzero{{0, 0}, {1, 1}};
    CHECK(optimal_phases(withzero)[0] == 0.0);
}

TEST_CASE("adapt: scalar channel converges immediately at the optimum") {
    const std::vector<cplx> g{{0.3, -0.4}};
    AdaptConfig cfg;
    cfg.bits = 0;
    const ControlState st = adapt_phases(g, cfg);
    CHECK(st.converged);
    CHECK(st.phases[0] == doctest::Approx(std::fmod(std::arg(g[0]) + 2 * std::numbers::pi,
                                                    2 * std::numbers::pi)));
    CHECK(st.objective_trace.back() == doctest::Approx(0.5));
}

TEST_CASE("adapt: unquantized reaches >= 0.999 of the optimum on random channels") {
    AdaptConfig cfg;
    cfg.bits = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto g = random_channel(64, 500 + rep);
        const ControlState st = adapt_phases(g, cfg);
        const double opt = kernels::sum_abs(g.data(), g.size());
        CHECK(st.objective_trace.back() >= 0.999 * opt);
    }
}

TEST_CASE("adapt: monotone trace within tolerance on random instances (unquantized)") {
    AdaptConfig cfg;
    cfg.bits = 0;
    int steps = 0, good = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto g = random_channel(64, 900 + rep);
        const ControlState st = adapt_phases(g, cfg);
        const double tol = 1e-9 * kernels::sum_abs(g.data(), g.size());
        for (std::size_t t = 1; t < st.objective_trace.size(); ++t) {
            ++steps;
            if (st.objective_trace[t] >= st.objective_trace[t - 1] - tol) ++good;
        }
    }
    CHECK(static_cast<double>(good) >= 0.99 * steps);
}

TEST_CASE("adapt: quantized phases always live in the codebook") {
    for (int b : {1, 3, 6}) {
        AdaptConfig cfg;
        cfg.bits = b;
        const auto g = random_channel(32, 42 + b);
        const ControlState st = adapt_phases(g, cfg);
        const double step = 2.0 * std::numbers::pi / std::ldexp(1.0, b);
        for (double p : st.phases) {
            const double idx = p / step;
            CHECK(std::abs(idx - std::round(idx)) < 1e-9);
        }
    }
}

TEST_CASE("quantized-alignment floor: adapt meets or exceeds cos(step/2) * optimum") {
    for (int b : {2, 4, 6}) {
        const double step = 2.0 * std::numbers::pi / std::ldexp(1.0, b);
        const double floor_factor = std::cos(step / 2.0);
        for (int rep = 0; rep < 20; ++rep) {
            const auto g = random_channel(64, 7000 + 31 * b + rep);
            const double opt = kernels::sum_abs(g.data(), g.size());

            // snapping the optimal phases cannot lose more than cos(step/2)
            auto snapped = optimal_phases(g);
            for (double& p : snapped) p = phase_quantize(p, b);
            const double snapped_obj = std::abs(combined_amplitude(g, weights_of(snapped)));
            CHECK(snapped_obj >= floor_factor * opt - 1e-12);

            AdaptConfig cfg;
            cfg.bits = b;
            const ControlState st = adapt_phases(g, cfg);
            CHECK(st.objective_trace.back() >= floor_factor * opt - 1e-12);
        }
    }
}

TEST_CASE("six-bit adaptation stays within 0.5 dB of the continuous result") {
    AdaptConfig fine;
    fine.bits = 0;
    AdaptConfig coarse;
    coarse.bits = 6;
    for (int rep = 0; rep < 50; ++rep) {
        const auto g = random_channel(64, 333 + rep);
        const double o_fine = adapt_phases(g, fine).objective_trace.back();
        const double o_coarse = adapt_phases(g, coarse).objective_trace.back();
        const double loss_db = 20.0 * std::log10(o_fine / o_coarse);
        CHECK(loss_db < 0.5);
        CHECK(loss_db >= 0.0);
    }
}

TEST_CASE("global-phase invariance of the converged objective (unquantized)") {
    AdaptConfig cfg;
    cfg.bits = 0;
    const auto g = random_channel(48, 77);
    std::vector<cplx> rotated(g.size());
    const cplx rot = std::polar(1.0, 1.2345);
    for (std::size_t i = 0; i < g.size(); ++i) rotated[i] = g[i] * rot;
    const double a = adapt_phases(g, cfg).objective_trace.back();
    const double b = adapt_phases(rotated, cfg).objective_trace.back();
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("emit-only quantization variant") {
    AdaptConfig cfg;
    cfg.bits = 6;
    cfg.quantize_each_iteration = false;
    const auto g = random_channel(32, 4);
    const ControlState st = adapt_phases(g, cfg);
    const double step = 2.0 * std::numbers::pi / 64.0;
    for (double p : st.phases) {
        const double idx = p / step;
        CHECK(std::abs(idx - std::round(idx)) < 1e-9);
    }
    const double opt = kernels::sum_abs(g.data(), g.size());
    CHECK(st.objective_trace.back() >= std::cos(step / 2.0) * opt - 1e-12);
}

TEST_CASE("zero entries and zero channels are handled") {
    std::vector<cplx> g{{0, 0}, {1, 0}};
    AdaptConfig cfg;
    cfg.bits = 0;
    const ControlState st = adapt_phases(g, cfg);
    CHECK(st.phases[0] == 0.0);
    const std::vector<cplx> zero(4, cplx{0, 0});
    const ControlState zs = adapt_phases(zero, cfg);
    CHECK(zs.converged);
    CHECK(zs.objective_trace.back() == 0.0);
}

TEST_CASE("effective SNR and capacity loss formulas") {
    CHECK(effective_snr(100.0, 0.0) == 100.0);
    CHECK(effective_snr(100.0, 0.005) == doctest::Approx(99.5));

    const CapacityLoss zero = capacity_loss(100.0, 0.0);
    CHECK(zero.bound == 0.0);
    CHECK(zero.first_order == 0.0);

    const CapacityLoss cl = capacity_loss(100.0, 0.005);
    CHECK(cl.first_order == doctest::Approx(0.0071420546578661555).epsilon(1e-12));
    CHECK(cl.bound == doctest::Approx(0.007159791572866123).epsilon(1e-12));

    // concavity: bound >= first_order >= bound * (1 - eps) on a grid
    for (double gamma : {1.0, 10.0, 100.0, 1000.0})
        for (double eps : {0.001, 0.01, 0.05, 0.1}) {
            const CapacityLoss c = capacity_loss(gamma, eps);
            CHECK(c.bound >= c.first_order);
            CHECK(c.first_order >= c.bound * (1.0 - eps) - 1e-15);
        }

    CHECK_THROWS_AS(effective_snr(10.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(capacity_loss(-1.0, 0.1), std::invalid_argument);
}

TEST_CASE("step-size guard enforces the stability range") {
    AdaptConfig cfg;
    cfg.step_scale = 2.5;
    CHECK_THROWS_AS(adapt_phases(random_channel(4, 1), cfg), ConfigError);
}
