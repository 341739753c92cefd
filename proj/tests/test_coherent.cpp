#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "decolab/coherent.hpp"

using namespace decolab;
using coherent::OverlapNormalization;

namespace {

// Upper Poisson tail sum_{k>N} y^k/k! e^{-y}, summed stably in log space.
double poisson_tail(double y, std::size_t n) {
    if (y == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t k = n + 1; k < n + 2000; ++k) {
        const double lt = static_cast<double>(k) * std::log(y) -
                          std::lgamma(static_cast<double>(k) + 1.0) - y;
        const double term = std::exp(lt);
        s += term;
        if (term < 1e-300 || term < s * 1e-18) break;
    }
    return s;
}

}  // namespace

TEST_CASE("quasi-coherent state construction") {
    const auto vac = coherent::build_quasi_coherent(0.0, 12);
    CHECK(vac.coeffs[0] == Complex{1.0, 0.0});
    for (std::size_t n = 1; n < vac.coeffs.size(); ++n) {
        CHECK(std::abs(vac.coeffs[n]) == 0.0);
    }

    const auto single = coherent::build_quasi_coherent(1.0, 0);
    REQUIRE(single.coeffs.size() == 1);
    CHECK(std::abs(single.coeffs[0]) == doctest::Approx(1.0).epsilon(1e-15));

    const auto s = coherent::build_quasi_coherent(2.0, 40);
    double norm2 = 0.0;
    std::size_t argmax = 0;
    for (std::size_t n = 0; n < s.coeffs.size(); ++n) {
        norm2 += std::norm(s.coeffs[n]);
        if (std::abs(s.coeffs[n]) > std::abs(s.coeffs[argmax])) argmax = n;
    }
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
    // Poisson weights at integer alpha^2 = 4 tie on {3, 4}.
    CHECK(argmax >= 3);
    CHECK(argmax <= 4);
    CHECK(std::abs(s.coeffs[4]) ==
          doctest::Approx(std::abs(s.coeffs[3])).epsilon(1e-12));

    const auto s22 = coherent::build_quasi_coherent(2.2, 40);
    std::size_t argmax22 = 0;
    for (std::size_t n = 0; n < s22.coeffs.size(); ++n) {
        if (std::abs(s22.coeffs[n]) > std::abs(s22.coeffs[argmax22])) argmax22 = n;
    }
    CHECK(argmax22 == 4);  // floor(alpha^2)

    CHECK_THROWS_AS(coherent::build_quasi_coherent(-0.5, 10), config_error);
    CHECK_THROWS_AS(coherent::build_quasi_coherent(1.0, 501), config_error);
}

TEST_CASE("unit norm across the supported parameter range") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> alpha(0.0, 12.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double a = alpha(rng);
        const std::size_t n = 5 + rng() % 400;
        const auto s = coherent::build_quasi_coherent(a, n);
        double norm2 = 0.0;
        for (const auto& c : s.coeffs) norm2 += std::norm(c);
        CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("direct overlap") {
    const auto s = coherent::build_quasi_coherent(1.7, 30);
    CHECK(coherent::overlap_direct(s, s) == doctest::Approx(1.0).epsilon(1e-14));

    const auto v1 = coherent::build_quasi_coherent(0.0, 25);
    const auto v2 = coherent::build_quasi_coherent(0.0, 25);
    CHECK(coherent::overlap_direct(v1, v2) == doctest::Approx(1.0));

    const auto a = coherent::build_quasi_coherent(0.0, 40);
    const auto b = coherent::build_quasi_coherent(3.0, 40);
    CHECK(coherent::overlap_direct(a, b) ==
          doctest::Approx(std::exp(-4.5)).epsilon(1e-10));

    const auto shorter = coherent::build_quasi_coherent(3.0, 39);
    CHECK_THROWS_AS(coherent::overlap_direct(a, shorter), config_error);
}

TEST_CASE("series overlap values") {
    for (std::size_t n : {0u, 3u, 17u, 80u}) {
        CHECK(coherent::overlap_series(1.3, 1.3, n) == 1.0);
    }
    CHECK(coherent::overlap_series(0.0, 2.0, 400) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    // Four-term hand sum at delta = 1, N = 3.
    CHECK(coherent::overlap_series(0.0, 1.0, 3) ==
          doctest::Approx(1.0 - 0.5 + 0.125 - 1.0 / 48.0).epsilon(1e-15));
}

TEST_CASE("series overlap obeys the Lagrange remainder bound") {
    for (int alpha = 1; alpha <= 6; ++alpha) {
        for (std::size_t n : {10u, 20u, 40u, 80u, 200u}) {
            const double series =
                coherent::overlap_series(0.0, static_cast<double>(alpha), n);
            const double target = std::exp(-0.5 * alpha * alpha);
            const double rb =
                coherent::remainder_bound(0.0, static_cast<double>(alpha), n);
            CHECK(std::abs(series - target) <= rb);
        }
    }
}

TEST_CASE("remainder bound values and monotonicity") {
    CHECK(coherent::remainder_bound(1.0, 1.0, 7) == 0.0);
    CHECK(coherent::remainder_bound(0.0, 2.0, 10) ==
          doctest::Approx(2048.0 / 39916800.0).epsilon(1e-13));
    // Decreasing in N once N + 1 exceeds (delta alpha)^2 / 2.
    double prev = coherent::remainder_bound(0.0, 3.0, 5);
    for (std::size_t n = 6; n < 40; ++n) {
        const double cur = coherent::remainder_bound(0.0, 3.0, n);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("direct and series overlaps differ only by truncation tails") {
    // The two routes truncate different series: the series route carries the
    // Lagrange remainder at (da^2/2), the direct route the Poisson tails of
    // its normalizations at alpha_i^2 and of the cross sum at a1 a2. The
    // envelope below combines both with a safety factor.
    for (double a1 : {0.0, 1.0, 2.5}) {
        for (double a2 : {1.0, 3.0, 6.0}) {
            for (std::size_t n : {20u, 40u, 80u, 160u}) {
                const auto s1 = coherent::build_quasi_coherent(a1, n);
                const auto s2 = coherent::build_quasi_coherent(a2, n);
                const double direct = coherent::overlap_direct(s1, s2);
                const double series = coherent::overlap_series(a1, a2, n);
                const double rb = coherent::remainder_bound(a1, a2, n);
                const double q1 = poisson_tail(a1 * a1, n);
                const double q2 = poisson_tail(a2 * a2, n);
                const double qc = poisson_tail(a1 * a2, n);
                if (q1 > 0.4 || q2 > 0.4 || qc > 0.4) continue;
                const double da = a1 - a2;
                const double env =
                    rb + 4.0 * std::exp(-0.5 * da * da) * (q1 + q2 + qc);
                const double fp_noise =
                    8e-16 * std::max({1.0, std::abs(direct), std::abs(series)});
                CHECK(std::abs(direct - series) <= 3.0 * env + fp_noise);
            }
        }
    }
}

TEST_CASE("macroscopicity window") {
    const auto good = coherent::macroscopicity_check(0.0, 10.0, 200);
    CHECK(good.lower_ok);
    CHECK(good.upper_ok);
    CHECK(good.macroscopic);
    CHECK(good.upper_limit == doctest::Approx(std::sqrt(402.0)));

    CHECK_FALSE(coherent::macroscopicity_check(0.0, 1.0, 200).macroscopic);
    const auto shallow = coherent::macroscopicity_check(0.0, 10.0, 10);
    CHECK(shallow.lower_ok);
    CHECK_FALSE(shallow.upper_ok);
    CHECK_FALSE(shallow.macroscopic);

    CHECK_THROWS_AS(coherent::macroscopicity_check(0.0, 1.0, 10, -1.0),
                    config_error);
}

TEST_CASE("evolved overlap limits") {
    const Complex z0{1.0, -0.05};

    // Self overlap at t = 0 with a deep cutoff is 1 under the exponential
    // normalization.
    CHECK(std::abs(coherent::evolved_overlap(2.0, 2.0, z0, 0.0, 60) -
                   Complex{1.0, 0.0}) < 1e-12);

    // Vacuum bra: only the n = 0 term survives, time independent.
    const Complex a = coherent::evolved_overlap(0.0, 3.0, z0, 0.0, 50);
    const Complex b = coherent::evolved_overlap(0.0, 3.0, z0, 7.0, 50);
    CHECK(std::abs(a - b) < 1e-15);
    CHECK(a.real() == doctest::Approx(std::exp(-4.5)).epsilon(1e-13));

    // Closed form for the self overlap: exp(-a^2 (1 - e^{-i z0 t})).
    const double alpha = 3.0;
    for (double t : {0.3, 1.0, 4.0, 20.0}) {
        const Complex u = std::exp(Complex{0.0, -1.0} * z0 * t);
        const Complex closed = std::exp(-alpha * alpha * (1.0 - u));
        const Complex sum = coherent::evolved_overlap(alpha, alpha, z0, t, 120);
        CHECK(std::abs(sum - closed) / std::abs(closed) < 1e-10);
    }
}

TEST_CASE("evolved overlap modulus properties") {
    // Hermitian ladder (gamma0 = 0): the modulus is periodic with the ladder
    // period 2 pi hbar / w0, and exactly constant for z0 = 0.
    const Complex real_z{0.8, 0.0};
    const double period = 2.0 * std::numbers::pi / 0.8;
    for (double t : {0.9, 3.3, 12.0}) {
        const double m1 = std::abs(coherent::evolved_overlap(1.5, 2.5, real_z, t, 80));
        const double m2 = std::abs(
            coherent::evolved_overlap(1.5, 2.5, real_z, t + period, 80));
        CHECK(m1 == doctest::Approx(m2).epsilon(1e-10));
    }
    const Complex zero_z{0.0, 0.0};
    const double m0 = std::abs(coherent::evolved_overlap(1.5, 2.5, zero_z, 0.0, 80));
    for (double t : {0.9, 3.3, 12.0}) {
        CHECK(std::abs(coherent::evolved_overlap(1.5, 2.5, zero_z, t, 80)) ==
              doctest::Approx(m0).epsilon(1e-12));
    }

    // Macroscopic-valid parameters keep the modulus below 1 + slack.
    const Complex z0{0.4, -0.02};
    for (double t : {0.0, 1.0, 10.0, 60.0}) {
        CHECK(std::abs(coherent::evolved_overlap(0.0, 6.0, z0, t, 100)) <=
              1.0 + 1e-8);
        CHECK(std::abs(coherent::evolved_overlap(6.0, 6.0, z0, t, 100)) <=
              1.0 + 1e-8);
    }
}

TEST_CASE("survival amplitude") {
    const auto bra = coherent::build_quasi_coherent(1.2, 25);
    const auto ket = coherent::build_quasi_coherent(2.1, 25);
    const Complex z0{0.9, -0.03};

    // t = 0 reduces to the plain inner product.
    const Complex a0 =
        coherent::survival_amplitude(bra.coeffs, ket.coeffs, z0, 0.0);
    CHECK(a0.real() ==
          doctest::Approx(coherent::overlap_direct(bra, ket)).epsilon(1e-13));
    CHECK(a0.imag() == doctest::Approx(0.0));

    // Real pole: |A| is periodic with period 2 pi hbar / z0.
    const Complex real_z{1.3, 0.0};
    const double period = 2.0 * std::numbers::pi / 1.3;
    for (double t : {0.4, 2.0, 5.5}) {
        const double m1 = std::abs(
            coherent::survival_amplitude(bra.coeffs, ket.coeffs, real_z, t));
        const double m2 = std::abs(coherent::survival_amplitude(
            bra.coeffs, ket.coeffs, real_z, t + period));
        CHECK(m1 == doctest::Approx(m2).epsilon(1e-12));
    }

    // Conjugate symmetry for real poles.
    for (double t : {0.7, 1.9}) {
        const Complex fwd =
            coherent::survival_amplitude(bra.coeffs, ket.coeffs, real_z, t);
        const Complex rev =
            coherent::survival_amplitude(ket.coeffs, bra.coeffs, real_z, -t);
        CHECK(std::abs(fwd - std::conj(rev)) < 1e-13);
    }

    std::vector<Complex> shorter(bra.coeffs.begin(), bra.coeffs.end() - 1);
    CHECK_THROWS_AS(
        coherent::survival_amplitude(shorter, ket.coeffs, z0, 1.0),
        config_error);
}

TEST_CASE("state JSON round trip") {
    const auto s = coherent::build_quasi_coherent(1.9, 22);
    const auto back = coherent::state_from_json_string(coherent::to_json_string(s));
    CHECK(back.alpha == s.alpha);
    CHECK(back.cutoff_n == s.cutoff_n);
    REQUIRE(back.coeffs.size() == s.coeffs.size());
    for (std::size_t n = 0; n < s.coeffs.size(); ++n) {
        CHECK(back.coeffs[n] == s.coeffs[n]);
    }
    CHECK_THROWS_AS(coherent::state_from_json_string("{\"alpha\": 1}"),
                    config_error);
}

TEST_CASE("evolved overlap reproduces the coefficient-level amplitude") {
    const double a_bra = 1.4;
    const double a_ket = 2.2;
    const std::size_t n = 35;
    const auto bra = coherent::build_quasi_coherent(a_bra, n);
    const auto ket = coherent::build_quasi_coherent(a_ket, n);
    const Complex z0{0.6, -0.04};
    for (double t : {0.0, 0.8, 3.5, 9.0}) {
        const Complex via_states =
            coherent::survival_amplitude(bra.coeffs, ket.coeffs, z0, t);
        const Complex via_formula = coherent::evolved_overlap(
            a_bra, a_ket, z0, t, n, 1.0, OverlapNormalization::truncated);
        CHECK(std::abs(via_states - via_formula) < 1e-13);
    }
}
