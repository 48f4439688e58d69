#include "doctest.h"

#include "sudler/kernel.hpp"
#include "sudler/limitfn.hpp"
#include "sudler/parallel.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sudler;

namespace {

bool close_rel(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::fabs(b); }

// Direct product with x_r = r beta mod 1 taken in 50-digit floating point.
double direct_product(long b, std::uint64_t N) {
    auto s = make_surd(b);
    long double prod = 1.0L;
    for (std::uint64_t r = 1; r <= N; ++r) {
        HighFloat x = s.value * r;
        x -= floor(x);
        double xd = x.convert_to<double>();
        prod *= 2.0L * std::fabs(std::sin(std::numbers::pi_v<long double> * xd));
    }
    return static_cast<double>(prod);
}

}  // namespace

TEST_CASE("signed fractional part") {
    CHECK(signed_frac(0.75) == doctest::Approx(-0.25));
    CHECK(signed_frac(0.5) == doctest::Approx(0.5));
    CHECK(signed_frac(3.25) == doctest::Approx(0.25));
    CHECK(signed_frac(kFracHalf) == 0.5);
    CHECK(signed_frac(Frac128{3} << 126) == -0.25);
    CHECK(dist_to_int(Frac128{3} << 126) == 0.25);
}

TEST_CASE("rational products") {
    auto p = sudler_product_rational(1, 7, 6);
    CHECK(p.value == doctest::Approx(7.0).epsilon(1e-12));
    for (std::int64_t n = 2; n <= 500; ++n) {
        auto v = sudler_product_rational(1, n, n - 1);
        REQUIRE(close_rel(v.value, double(n), 1e-10));
        REQUIRE(std::fabs(v.value - n) <= v.abs_err + 1e-12 * n);
    }
    auto z = sudler_product_rational(1, 7, 7);
    CHECK(z.zero);
    CHECK(z.value == 0.0);
}

TEST_CASE("golden product at N = 1") {
    auto p = sudler_product(1, 1);
    CHECK(std::fabs(p.value - 1.86406484762645524) < 1e-14);
}

TEST_CASE("products against the mpmath oracle") {
    CHECK(close_rel(sudler_product(5, 31).value, 1.2934739713713271553, 1e-12));
    CHECK(close_rel(sudler_product(5, 83).value, 4.0744134986063259601, 1e-12));
    CHECK(close_rel(sudler_product(6, 1677).value, 0.74132174355917096285, 1e-12));
    CHECK(std::fabs(sudler_product(6, 7).value - 0.907) < 1e-3);
}

TEST_CASE("log-sum evaluation matches direct multiplication") {
    for (long b : {1L, 2L, 5L, 6L})
        for (std::uint64_t N : {1u, 2u, 10u, 77u, 250u, 999u, 1000u}) {
            auto p = sudler_product(b, N);
            CHECK(close_rel(p.value, direct_product(b, N), 1e-12));
            CHECK(p.value > 0);
            CHECK(p.abs_err <= 1e-12 * p.value);
        }
}

TEST_CASE("fixed-point stream tracks the exact fractional part") {
    for (long b : {1L, 3L, 6L, 10L}) {
        auto s = make_surd(b);
        FracState st{s.frac, 0, 0};
        std::uint64_t next = 1;
        for (std::uint64_t r = 1; r <= 10000000; ++r) {
            st.advance();
            if (r == next || r == 10000000) {
                Frac128 ex = exact_frac(s, r);
                Frac128 diff = ex - st.frac;  // stream rounds down, so the gap is in [0, r]
                REQUIRE(diff <= Frac128(r));
                auto again = frac_state(s, r);
                REQUIRE(again.frac == st.frac);
                next = next * 3 + 1;
            }
        }
    }
}

TEST_CASE("thread count does not change the result") {
    set_thread_count(1);
    auto seq = sudler_product(6, 1000000);
    set_thread_count(0);
    auto par = sudler_product(6, 1000000);
    set_thread_count(4);
    auto four = sudler_product(6, 1000000);
    set_thread_count(0);
    CHECK(seq.value == par.value);
    CHECK(seq.value == four.value);
    CHECK(seq.abs_err == par.abs_err);
}

TEST_CASE("perturbed products") {
    CHECK(std::fabs(perturbed_product(1, 2, 0.0).value - 1.86406484762645524) < 1e-12);
    auto C1 = C_const(1, 1e-10).value;
    CHECK(std::fabs(perturbed_product(1, 30, 0.0).value - C1) < 1e-5);
    auto C6 = C_const(6, 1e-10).value;
    CHECK(std::fabs(perturbed_product(6, 8, 0.0).value - C6) < 1e-6);
    CHECK(convergent_index(1, 5) == 4);
    CHECK(convergent_index(6, 5) == 5);
}

TEST_CASE("A_n tends to 2 pi |sqrt(5) eps + 1| / sqrt(5)") {
    auto f = factor_triple(1, 24, 0.0);
    CHECK(std::fabs(f.A - 2.80992589241629055726) < 1e-6);
    auto g = factor_triple(1, 24, 0.1);
    CHECK(std::fabs(g.A - 2.80992589241629055726 * (std::sqrt(5.0) * 0.1 + 1)) < 1e-6);
}

TEST_CASE("factorization identity") {
    for (long b : {1L, 2L, 5L, 6L}) {
        auto q = convergents(b, 40).q;
        for (int n = 1; n <= 25; ++n) {
            int m = convergent_index(b, n);
            if (m < 1 || q[m] > 2000000) continue;
            for (double eps : {-0.1, 0.0, 0.3}) {
                auto f = factor_triple(b, n, eps);
                auto p = perturbed_product(b, n, eps);
                INFO("b=" << b << " n=" << n << " eps=" << eps);
                CHECK(close_rel(f.product(), p.value, 1e-10));
            }
        }
    }
    auto f = factor_triple(1, 20, 0.1);
    CHECK(close_rel(f.product(), perturbed_product(1, 20, 0.1).value, 1e-10));
}

TEST_CASE("factorization rejects a non-positive factor") {
    CHECK_THROWS_AS(factor_triple(1, 10, 5.0), FactorizationError);
}
