#include "doctest.h"

#include "sudler/kernel.hpp"
#include "sudler/limitfn.hpp"

#include <cmath>

using namespace sudler;

namespace {
const double kPhi = (1 + std::sqrt(5.0)) / 2;
}

TEST_CASE("u sequence") {
    CHECK(std::fabs(u_seq(1, 1) - 4.23606797749978969641) < 1e-12);
    CHECK(std::fabs(u_seq(5, 1) - 11.3851648071345040313) < 1e-12);
    CHECK(std::fabs(u_seq(6, 1) - 13.3245553203367586640) < 1e-12);
    for (long b : {1L, 2L, 6L}) {
        double sd = std::sqrt(double(b * b + 4));
        for (std::uint64_t r = 1; r <= 10000; ++r) {
            double u = u_seq(b, r);
            REQUIRE(u > 2 * sd * (r - 0.5));
            REQUIRE(u < 2 * sd * (r + 0.5));
        }
    }
}

TEST_CASE("G at -1/phi^2-type anchor equals one") {
    auto g = G_eval(1, -kPhi / std::sqrt(5.0), 1e-9);
    CHECK(std::fabs(g.value - 1.0) < 1e-7);
    CHECK(g.abs_err < 1e-7);
}

TEST_CASE("G at zero is C_b") {
    for (long b = 1; b <= 10; ++b) {
        auto g = G_eval(b, 0.0, 1e-9);
        auto c = C_const(b, 1e-9);
        CHECK(std::fabs(g.value - c.value) <= g.abs_err + c.abs_err + 1e-12);
    }
}

TEST_CASE("C_b against long convergent products") {
    for (long b = 1; b <= 10; ++b) {
        auto q = convergents(b, 80).q;
        int m = 0;
        while (q[m + 1] <= 5000000) ++m;
        double P = sudler_product(b, to_u64(q[m])).value;
        double C = C_const(b, 1e-10).value;
        INFO("b=" << b << " q=" << q[m]);
        CHECK(std::fabs(P - C) < 1e-6);
    }
}

TEST_CASE("C_b exceeds one exactly for b <= 6") {
    for (long b = 1; b <= 20; ++b) {
        auto c = C_const(b);
        if (b <= 6)
            CHECK(c.lo() > 1.0);
        else
            CHECK(c.hi() < 1.0);
    }
}

TEST_CASE("zeros next to the origin") {
    auto [l1, r1] = roots_near_zero(1);
    CHECK(std::fabs(l1 + 0.447213595499957939) < 1e-14);
    CHECK(std::fabs(r1 - 0.723606797749978970) < 1e-14);
    auto [l6, r6] = roots_near_zero(6);
    CHECK(std::fabs(l6 + 1 / std::sqrt(40.0)) < 1e-14);
    CHECK(std::fabs(r6 - 0.974341649025256900) < 1e-14);
    for (long b : {1L, 5L, 6L}) {
        auto [l, r] = roots_near_zero(b);
        auto gl = G_eval(b, l);
        auto gr = G_eval(b, r);
        CHECK(gl.zero);
        CHECK(gr.zero);
        CHECK_THROWS_AS(log_G(b, l), RootError);
    }
    auto roots = roots_in(1, -1.0, 1.0);
    REQUIRE(roots.size() >= 2);
    bool has_l = false, has_r = false;
    for (double x : roots) {
        has_l |= std::fabs(x - l1) < 1e-12;
        has_r |= std::fabs(x - r1) < 1e-12;
    }
    CHECK(has_l);
    CHECK(has_r);
}

TEST_CASE("second derivative of log G") {
    for (long b : {1L, 5L, 6L}) {
        auto [l, r] = roots_near_zero(b);
        for (int i = 1; i < 20; ++i) {
            double e = l + (r - l) * i / 20.0;
            double h = 1e-4 * (r - l);
            double fd = (log_G(b, e + h, 1e-12).value - 2 * log_G(b, e, 1e-12).value +
                         log_G(b, e - h, 1e-12).value) /
                        (h * h);
            double d2 = d2_log_G(b, e).value;
            INFO("b=" << b << " eps=" << e);
            CHECK(d2 < 0);
            CHECK(std::fabs(d2 - fd) <= 1e-4 * std::fabs(d2));
        }
    }
}

TEST_CASE("first derivative against a central difference") {
    for (long b : {1L, 6L}) {
        double e = 0.05;
        double h = 1e-5;
        double fd = (log_G(b, e + h, 1e-12).value - log_G(b, e - h, 1e-12).value) / (2 * h);
        CHECK(std::fabs(d1_log_G(b, e).value - fd) < 1e-6 * (1 + std::fabs(fd)));
    }
}

TEST_CASE("truncation bound shrinks with the radius") {
    for (long b : {1L, 5L})
        for (double e : {-0.2, 0.0, 0.3}) {
            if (b == 5 && e == -0.2) continue;  // beyond the left zero
            double prev = 0;
            for (std::uint64_t R = 1000; R <= 16000; R *= 2) {
                auto v = G_eval_radius(b, e, R, TailMode::Plain);
                if (prev > 0) CHECK(prev / v.eval.abs_err >= 1.9);
                prev = v.eval.abs_err;
            }
            auto plain = G_eval_radius(b, e, 16000, TailMode::Plain);
            auto corr = G_eval_radius(b, e, 16000, TailMode::Corrected);
            CHECK(std::fabs(plain.eval.value - corr.eval.value) <= plain.eval.abs_err + corr.eval.abs_err);
        }
}

TEST_CASE("perturbed products converge to G") {
    for (double e : {-0.2, 0.0, 0.3}) {
        double G = G_eval(1, e, 1e-11).value;
        double prev = 1e9;
        for (int n = 10; n <= 24; ++n) {
            double d = std::fabs(perturbed_product(1, n, e).value - G);
            CHECK(d < prev);
            prev = d;
        }
        CHECK(prev < 1e-3);
    }
    for (double e : {-0.2, 0.0, 0.3}) {
        double G = G_eval(6, e, 1e-11).value;
        double prev = 1e9;
        for (int n = 1; n <= 8; ++n) {
            double d = std::fabs(perturbed_product(6, n, e).value - G);
            CHECK(d < prev);
            prev = d;
        }
        CHECK(prev < 1e-6);
    }
}

TEST_CASE("b = 5 anchor values") {
    CHECK(std::fabs(G_eval(5, -0.107).value - 0.54) < 0.01);
    CHECK(std::fabs(G_eval(5, 0.19).value - 2.27) < 0.01);
    CHECK(std::fabs(G_eval(5, 0.04).value - 1.50) < 0.01);
}

TEST_CASE("certificates") {
    auto c = certify_above(1, -0.26, 0.58, 1.01);
    CHECK(c.ok());
    CHECK(c.bound > 1.01);
    CHECK(std::fabs(c.at_lo.value - 1.10) <= 0.01);
    CHECK(std::fabs(c.at_hi.value - 1.11) <= 0.01);
    CHECK(certify_above(5, -0.01, 0.04, 1.1).ok());
    CHECK(certify_below(6, -0.0257, -0.02, 0.96).ok());
    CHECK_THROWS_AS(certify_above(1, -0.5, 0.0, 0.5), RootError);
    CHECK_FALSE(certify_above(1, -0.26, 0.58, 1.2).ok());
    CHECK_FALSE(certify_below(1, -0.26, 0.58, 1.2).ok());
    CHECK(to_string(CertStatus::Certified) == "certified");
}

TEST_CASE("limit_B is consistent with C_b") {
    for (long b : {1L, 6L}) {
        auto B = limit_B(b);
        CHECK(B.value > 0);
        double prod = 1.0;
        for (std::uint64_t r = 1; r <= 200000; ++r) {
            double u = u_seq(b, r);
            prod *= 1 - 1 / (u * u);
        }
        double D = double(b * b + 4);
        double C = 2 * M_PI / std::sqrt(D) * B.value * prod;
        CHECK(std::fabs(C - C_const(b).value) < 1e-6);
    }
}
