#pragma once

#include "sudler/fixed.hpp"
#include "sudler/qcf.hpp"
#include "sudler/types.hpp"

#include <cstdint>
#include <vector>

namespace sudler {

// Running fractional part {r beta} as a 128-bit fixed-point value.
struct FracState {
    Frac128 beta = 0;
    std::uint64_t r = 0;
    Frac128 frac = 0;

    void advance() {
        ++r;
        frac += beta;
    }
};

FracState frac_state(const QuadraticSurd& s, std::uint64_t r);

// Sum of log(2|sin(pi x_r)|) with a bound on its absolute error.
struct LogProduct {
    double log_sum = 0.0;
    double log_err = 0.0;
    std::uint64_t count = 0;
    std::uint64_t zeros = 0;

    EvalWithBound to_value() const;
};

// x_r = r * beta + shift (mod 1) for r in [first, last].
LogProduct log_product_fixed(Frac128 beta, Frac128 shift, std::uint64_t first, std::uint64_t last);

// Cumulative log products at each of the (ascending) end points, starting at r = 1.
std::vector<LogProduct> log_product_prefixes(Frac128 beta, Frac128 shift,
                                             const std::vector<std::uint64_t>& ends);

EvalWithBound sudler_product(const QuadraticSurd& alpha, std::uint64_t N);
EvalWithBound sudler_product(long b, std::uint64_t N);
// alpha = m / n exactly.
EvalWithBound sudler_product_rational(std::int64_t m, std::int64_t n, std::uint64_t N);

// Index convention: for b = 1 the index n is the Fibonacci index (F_n = q_{n-1})
// and the shift is (-1)^(n+1) eps / F_n; for b >= 2 it is the convergent index
// with shift (-1)^n eps / q_n. Both amount to (-1)^m eps / q_m with m the
// convergent index.
int convergent_index(long b, int n);

EvalWithBound perturbed_product(long b, int n, double eps);

// Convergent-index form taking an exact perturbation.
EvalWithBound perturbed_product_q(long b, int m, const HighFloat& eps);

// Product over r = 1..q_m of 2|sin(pi(r beta + shift))|.
EvalWithBound shifted_product_q(long b, int m, Frac128 shift);

struct FactorTriple {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    int n = 0;
    double s0 = 0.0;

    double product() const { return A * B * C; }
};

// A_n = 2 q |sin(pi(q beta + (-1)^n eps / q))|
// s_n(0, eps) = 2 sin(pi(eps / q + beta^(n+1) / 2))
// s_n(r) = 2 sin(pi(r / q - beta^(n+1) ([q_{n-1} r] / q - 1/2)))
// B_n = prod |s_n(r)| / (2 sin(pi r / q)),  C_n = prod |1 - s_n(0,eps)^2 / s_n(r)^2|^(1/2)
// over r = 1..q-1, with q = q_n and [.] the residue mod q.
FactorTriple factor_triple(long b, int n, double eps);

}  // namespace sudler
