#pragma once

#include "sudler/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sudler {

// How the r > R tail of the infinite products is handled.
//   Corrected: add -c^2 psi'(R+1) / (4D) and bound the O(1/R^2) remainder.
//   Plain:     drop the tail and bound it by c^2 / (4 D kappa^2 (1 - x) R).
enum class TailMode { Corrected, Plain };

inline constexpr double kDefaultTol = 1e-7;

// u_b(r) = 2 sqrt(D) r + 1 - 2 {r beta}, D = b^2 + 4.
double u_seq(long b, std::uint64_t r);

// Result of a truncated evaluation, with the radius actually used.
struct SeriesEval {
    EvalWithBound eval;
    std::uint64_t R = 0;
};

// G_beta(eps) (the golden-ratio G when b = 1):
//   log G = log|sqrt(D) eps + 1| + S(2 sqrt(D) eps + 1) + log K_b,
//   S(c) = sum_r log|1 - c^2 / u_b(r)^2|,
//   log K_b = -(1/b) [ sum_{j<b} log(beta + j) + sum_{j=1..b} S(2b - 2j + 2 beta + 1) ].
EvalWithBound G_eval(long b, double eps, double tol = kDefaultTol, TailMode mode = TailMode::Corrected);
SeriesEval G_eval_radius(long b, double eps, std::uint64_t R, TailMode mode = TailMode::Corrected);

// log G with its bound; throws RootError at a root.
EvalWithBound log_G(long b, double eps, double tol = kDefaultTol);

// C_b = G_beta(0), evaluated through the separate grouping
// b log C_b = -sum log(beta + j) + sum_r sum_j [log(1 - 1/u^2) - log(1 - c_j^2/u^2)].
EvalWithBound C_const(long b, double tol = kDefaultTol);

// B_b from C_b = (2 pi / sqrt(D)) B_b prod (1 - 1/u_b(r)^2).
EvalWithBound limit_B(long b, double tol = kDefaultTol);

// (-1/sqrt(D), (u_b(1) - 1) / (2 sqrt(D))), the zeros adjacent to 0.
std::pair<double, double> roots_near_zero(long b);

// All zeros of G_beta in [lo, hi], ascending.
std::vector<double> roots_in(long b, double lo, double hi);

// First and second derivatives of log G_beta. Throw RootError at a root.
EvalWithBound d1_log_G(long b, double eps, double tol = 1e-9);
EvalWithBound d2_log_G(long b, double eps, double tol = 1e-9);

enum class CertStatus { Certified, Refuted, Inconclusive };
std::string to_string(CertStatus s);

struct Certificate {
    CertStatus status = CertStatus::Inconclusive;
    long b = 1;
    double lo = 0.0;
    double hi = 0.0;
    double threshold = 0.0;
    EvalWithBound at_lo;
    EvalWithBound at_hi;
    // certify_above: rigorous lower bound of G on [lo, hi];
    // certify_below: rigorous upper bound.
    double bound = 0.0;
    int pieces = 1;

    bool ok() const { return status == CertStatus::Certified; }
};

// G > threshold on [lo, hi] from the two endpoint values (log-concavity
// between consecutive zeros). Throws RootError if a zero lies in [lo, hi].
Certificate certify_above(long b, double lo, double hi, double threshold, double tol = 1e-9);

// G < threshold on [lo, hi] using the tangent lines of the concave log G at
// the endpoints, bisecting up to max_depth times.
Certificate certify_below(long b, double lo, double hi, double threshold, double tol = 1e-9,
                          int max_depth = 12);

}  // namespace sudler
