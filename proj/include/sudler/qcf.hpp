#pragma once

#include "sudler/fixed.hpp"
#include "sudler/types.hpp"

#include <cstdint>
#include <vector>

namespace sudler {

// beta = (num_rational + num_sqrt * sqrt(disc)) / denominator, i.e.
// (-b + sqrt(b^2 + 4)) / 2 = [0; b, b, b, ...].
struct QuadraticSurd {
    int b = 1;
    std::int64_t num_rational = -1;
    std::int64_t num_sqrt = 1;
    std::int64_t denominator = 2;
    std::int64_t disc = 5;

    Frac128 frac = 0;       // floor(beta * 2^128)
    HighFloat value;        // beta
    HighFloat sqrt_disc;    // sqrt(b^2 + 4)

    double value_d() const { return value.convert_to<double>(); }
    double sqrt_disc_d() const { return sqrt_disc.convert_to<double>(); }
};

QuadraticSurd make_surd(long b);

// Exact floor({r beta} * 2^128) from an integer square root, independent of
// the stored fixed-point image.
Frac128 exact_frac(const QuadraticSurd& s, std::uint64_t r);

struct ConvergentTable {
    int b = 1;
    std::vector<BigInt> q;

    // (beta^-(n+1) - (-beta)^(n+1)) / sqrt(b^2+4)
    HighFloat closed_form(int n) const;
};

ConvergentTable convergents(long b, int n_max);

// Smallest table whose last entry exceeds `limit`.
ConvergentTable convergents_above(long b, const BigInt& limit);

std::uint64_t to_u64(const BigInt& v);

// digits[i] is the coefficient c_{i+1} of q_i. The top digit is nonzero
// (empty for N = 0).
struct OstrowskiDigits {
    int b = 1;
    std::vector<int> digits;
    BigInt value;
};

OstrowskiDigits ostrowski_expand(const BigInt& N, long b);

// Rule 1: 0 <= c_1 < b. Rule 2: 0 <= c_{i+1} <= b. Rule 3: c_i = 0 whenever
// c_{i+1} = b. Throws DigitRuleError naming the first violated rule.
void validate_ostrowski(const std::vector<int>& digits, long b);
BigInt ostrowski_value(const std::vector<int>& digits, long b);
BigInt ostrowski_value(const OstrowskiDigits& d);

// Fibonacci indices with F_0 = 0, F_1 = 1; representation uses n_1 >= 2.
struct ZeckendorffIndices {
    std::vector<int> indices;  // ascending, gaps >= 2
    BigInt value;
};

ZeckendorffIndices zeckendorff_expand(const BigInt& N);
BigInt fibonacci(int n);

}  // namespace sudler
