#include <doctest.h>

#include <random>
#include <vector>

#include "rislink/kernels.hpp"

using namespace rislink;
using kernels::cplx;

namespace {

std::vector<double> random_reals(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

std::vector<cplx> random_cplx(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& x : v) x = {d(rng), d(rng)};
    return v;
}

} // namespace

TEST_CASE("scalar kernels: known values") {
    const cplx a[] = {{1, 2}, {3, -1}};
    const cplx b[] = {{2, 0}, {0, 1}};
    const cplx d = kernels::scalar::cdotc(a, b, 2);
    // conj(1+2i)*2 + conj(3-i)*i = (2-4i) + (-1+3i) = 1-i
    CHECK(d.real() == doctest::Approx(1.0));
    CHECK(d.imag() == doctest::Approx(-1.0));
    CHECK(kernels::scalar::sum_abs2(a, 2) == doctest::Approx(5.0 + 10.0));
    CHECK(kernels::scalar::sum_abs(a, 2) == doctest::Approx(std::sqrt(5.0) + std::sqrt(10.0)));

    cplx y[] = {{1, 0}, {0, 0}};
    kernels::scalar::caxpy({0, 1}, b, y, 2); // y += i*b
    CHECK(y[0].real() == doctest::Approx(1.0));
    CHECK(y[0].imag() == doctest::Approx(2.0));
    CHECK(y[1].real() == doctest::Approx(-1.0));
    CHECK(y[1].imag() == doctest::Approx(0.0));
}

TEST_CASE("dispatched lane matches the scalar reference") {
    INFO("active lane: ", kernels::active_isa());
    std::mt19937_64 rng(42);
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{2}, std::size_t{3},
                          std::size_t{5}, std::size_t{8}, std::size_t{17}, std::size_t{64},
                          std::size_t{255}, std::size_t{1000}}) {
        const auto ar = random_reals(rng, n);
        const auto br = random_reals(rng, n);
        const auto az = random_cplx(rng, n);
        const auto bz = random_cplx(rng, n);

        const double dref = kernels::scalar::dot(ar.data(), br.data(), n);
        CHECK(kernels::dot(ar.data(), br.data(), n) ==
              doctest::Approx(dref).epsilon(1e-12).scale(1.0));

        const double aref = kernels::scalar::sum_abs(az.data(), n);
        CHECK(kernels::sum_abs(az.data(), n) == doctest::Approx(aref).epsilon(1e-12).scale(1.0));

        const double a2ref = kernels::scalar::sum_abs2(az.data(), n);
        CHECK(kernels::sum_abs2(az.data(), n) == doctest::Approx(a2ref).epsilon(1e-12).scale(1.0));

        const cplx cref = kernels::scalar::cdotc(az.data(), bz.data(), n);
        const cplx cgot = kernels::cdotc(az.data(), bz.data(), n);
        CHECK(std::abs(cgot - cref) <= 1e-12 * (1.0 + std::abs(cref)) * (1.0 + n));

        std::vector<cplx> y1 = bz, y2 = bz;
        const cplx alpha{0.7, -1.3};
        kernels::scalar::caxpy(alpha, az.data(), y1.data(), n);
        kernels::caxpy(alpha, az.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-13);
    }
}

TEST_CASE("force_scalar switches the lane") {
    kernels::force_scalar(true);
    CHECK(kernels::active_isa() == "scalar");
    kernels::force_scalar(false);
}
