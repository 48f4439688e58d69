#include "doctest.h"

#include "sudler/qcf.hpp"

#include <cmath>
#include <set>
#include <string>

using namespace sudler;

namespace {

bool valid_digits(const std::vector<int>& d, int b) {
    if (d.empty()) return true;
    if (d[0] < 0 || d[0] >= b) return false;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i] < 0 || d[i] > b) return false;
        if (d[i] == b && d[i - 1] != 0) return false;
    }
    return true;
}

// All digit vectors of length L with entries 0..b, as values, when valid.
std::vector<BigInt> all_valid_values(int b, int L) {
    std::vector<BigInt> out;
    auto q = convergents(b, L).q;
    std::vector<int> d(L, 0);
    for (;;) {
        if (valid_digits(d, b)) {
            BigInt v = 0;
            for (int i = 0; i < L; ++i) v += BigInt(d[i]) * q[i];
            out.push_back(v);
        }
        int i = 0;
        while (i < L && d[i] == b) d[i++] = 0;
        if (i == L) break;
        ++d[i];
    }
    return out;
}

}  // namespace

TEST_CASE("surd value") {
    CHECK(make_surd(1).value_d() == doctest::Approx(0.6180339887498949).epsilon(1e-15));
    CHECK(make_surd(2).value_d() == doctest::Approx(0.41421356237309505).epsilon(1e-15));
    CHECK(make_surd(5).value_d() == doctest::Approx(0.19258240356725201).epsilon(1e-15));
    CHECK(make_surd(6).value_d() == doctest::Approx(0.16227766016837933).epsilon(1e-15));
    auto s6 = make_surd(6);
    CHECK(s6.disc == 40);
}

TEST_CASE("surd solves beta^2 + b beta - 1 = 0") {
    for (long b = 1; b <= 50; ++b) {
        auto s = make_surd(b);
        HighFloat r = s.value * s.value + b * s.value - 1;
        CHECK(abs(r) < HighFloat(1e-45));
        CHECK(s.value > 0);
        CHECK(s.value < 1);
        double f = std::ldexp(static_cast<double>(s.frac), -128);
        CHECK(std::fabs(f - s.value_d()) < 1e-15);
    }
}

TEST_CASE("surd rejects b < 1") {
    CHECK_THROWS_AS(make_surd(0), DomainError);
    CHECK_THROWS_AS(make_surd(-3), DomainError);
}

TEST_CASE("convergent denominators") {
    auto c6 = convergents(6, 6);
    std::vector<BigInt> want6 = {1, 6, 37, 228, 1405, 8658, 53353};
    CHECK(c6.q == want6);
    auto c1 = convergents(1, 9);
    std::vector<BigInt> want1 = {1, 1, 2, 3, 5, 8, 13, 21, 34, 55};
    CHECK(c1.q == want1);
    auto c5 = convergents(5, 3);
    CHECK(c5.q[3] == 135);
}

TEST_CASE("convergent recurrence and closed form") {
    for (long b = 1; b <= 10; ++b) {
        auto c = convergents(b, 60);
        CHECK(c.q[0] == 1);
        CHECK(c.q[1] == b);
        for (int n = 2; n <= 60; ++n) CHECK(c.q[n] == b * c.q[n - 1] + c.q[n - 2]);
        for (int n = 0; n <= 60; ++n) {
            HighFloat cf = c.closed_form(n);
            HighFloat q = HighFloat(c.q[n]);
            CHECK(abs(cf - q) / q < HighFloat(std::ldexp(1.0, -64)));
        }
    }
}

TEST_CASE("convergents_above stops past the limit") {
    auto c = convergents_above(6, BigInt(10000));
    CHECK(c.q.back() > 10000);
    CHECK(c.q[c.q.size() - 2] <= 10000);
}

TEST_CASE("ostrowski examples") {
    auto d = ostrowski_expand(BigInt(272), 6);
    CHECK(d.digits == std::vector<int>{1, 1, 1, 1});
    auto d83 = ostrowski_expand(BigInt(83), 5);
    CHECK(d83.digits == std::vector<int>{0, 1, 3});
    CHECK(ostrowski_value(d83) == 83);
    auto d31 = ostrowski_expand(BigInt(31), 5);
    CHECK(d31.digits == std::vector<int>{0, 1, 1});
}

TEST_CASE("ostrowski round trip") {
    for (long b = 1; b <= 8; ++b) {
        for (int N = 1; N <= 100000; N += (b == 1 ? 1 : 7)) {
            auto d = ostrowski_expand(BigInt(N), b);
            REQUIRE(ostrowski_value(d.digits, b) == N);
            REQUIRE_NOTHROW(validate_ostrowski(d.digits, b));
            REQUIRE(d.digits.back() != 0);
        }
    }
}

TEST_CASE("ostrowski uniqueness is exhaustive below q_L") {
    for (auto [b, L] : {std::pair{2, 11}, std::pair{5, 6}, std::pair{6, 6}}) {
        auto q = convergents(b, L).q;
        auto values = all_valid_values(b, L);
        std::set<BigInt> distinct(values.begin(), values.end());
        CHECK(distinct.size() == values.size());
        CHECK(BigInt(values.size()) == q[L]);
        CHECK(*distinct.rbegin() == q[L] - 1);
        CHECK(q[L] > 10000);
    }
}

TEST_CASE("digit rules match a direct predicate") {
    const int b = 5;
    int valid = 0;
    for (int x = 0; x <= 5; ++x)
        for (int y = 0; y <= 5; ++y)
            for (int z = 0; z <= 5; ++z) {
                std::vector<int> d = {x, y, z};
                bool want = valid_digits(d, b);
                bool got = true;
                try {
                    validate_ostrowski(d, b);
                } catch (const DigitRuleError&) {
                    got = false;
                }
                CHECK(want == got);
                valid += want;
            }
    CHECK(valid == 135);
}

TEST_CASE("digit rule violations") {
    auto rule_of = [](std::vector<int> d, long b) {
        try {
            validate_ostrowski(d, b);
        } catch (const DigitRuleError& e) {
            return e.rule();
        }
        return 0;
    };
    CHECK(rule_of({5, 1}, 5) == 1);
    CHECK(rule_of({0, 6}, 5) == 2);
    CHECK(rule_of({1, 5}, 5) == 3);
    CHECK(rule_of({0, 5, 1}, 5) == 0);
    CHECK(ostrowski_value(std::vector<int>{0, 5, 1}, 5) == 51);
    CHECK_THROWS_AS(ostrowski_value(std::vector<int>{1, 5}, 5), DigitRuleError);
}

TEST_CASE("zeckendorff examples") {
    CHECK(zeckendorff_expand(BigInt(100)).indices == std::vector<int>{4, 6, 11});
    CHECK(zeckendorff_expand(BigInt(4)).indices == std::vector<int>{2, 4});
    for (int n = 2; n <= 40; ++n) CHECK(zeckendorff_expand(fibonacci(n)).indices == std::vector<int>{n});
    CHECK(fibonacci(0) == 0);
    CHECK(fibonacci(1) == 1);
    CHECK(fibonacci(24) == 46368);
}

TEST_CASE("zeckendorff agrees with the b = 1 ostrowski expansion") {
    for (int N = 1; N <= 10000; ++N) {
        auto z = zeckendorff_expand(BigInt(N));
        REQUIRE(z.value == N);
        BigInt sum = 0;
        for (std::size_t i = 0; i < z.indices.size(); ++i) {
            if (i > 0) REQUIRE(z.indices[i] - z.indices[i - 1] >= 2);
            REQUIRE(z.indices[i] >= 2);
            sum += fibonacci(z.indices[i]);
        }
        REQUIRE(sum == N);
        // digit i multiplies q_i = F_{i+1}; digit 0 is always zero for b = 1
        auto d = ostrowski_expand(BigInt(N), 1);
        std::vector<int> from_digits;
        for (std::size_t i = 0; i < d.digits.size(); ++i) {
            REQUIRE(d.digits[i] <= 1);
            if (d.digits[i]) from_digits.push_back(static_cast<int>(i) + 1);
        }
        CHECK(from_digits == z.indices);
    }
}

TEST_CASE("to_u64 range") {
    CHECK(to_u64(BigInt(12345)) == 12345u);
    CHECK_THROWS(to_u64(BigInt(1) << 70));
}
