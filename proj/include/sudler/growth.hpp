#pragma once

#include "sudler/kernel.hpp"
#include "sudler/limitfn.hpp"
#include "sudler/qcf.hpp"
#include "sudler/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sudler {

// One sub-product prod_{r=1}^{q_level} 2|sin(pi (offset + r) beta)|, written as
// the perturbed product P_{q_level}(beta, eps) (shift (-1)^level eps / q_level).
struct Block {
    int level = 0;   // convergent index m (for b = 1 the Fibonacci index is m + 1)
    int repeat = 0;  // a: this is the (a+1)-th copy of q_level
    BigInt offset;   // number of factors before this block
    HighFloat eps_exact;
    double eps = 0.0;
    bool inverse = false;  // divides the product (reflected mode)
    LogProduct log;
    EvalWithBound value;
};

struct Decomposition {
    BigInt N;
    int b = 1;
    bool reflected = false;
    // reflected mode: P_N = P_{q_top - 1} / prod(blocks of q_top - N - 1)
    int top = -1;
    std::vector<int> digits;  // Ostrowski digits of N (or of q_top - N - 1)
    LogProduct numerator;
    std::vector<Block> blocks;
    bool evaluated = false;

    // Product of block values (and numerator), with a propagated bound.
    EvalWithBound product() const;
};

Decomposition decompose(const BigInt& N, long b, bool reflected, bool evaluate = true);

enum class RangeContext { Forward, Reflected, Case1 };

struct PerturbationRange {
    int b = 1;
    double lo = 0.0;
    double hi = 0.0;
    RangeContext context = RangeContext::Forward;
};

// Forward / reflected: [-((b-1) beta + beta^2), (b-1) + beta] / sqrt(D).
// Case1 (digit 0 followed by a nonzero digit): [-beta^2, beta] / sqrt(D).
PerturbationRange perturbation_range(long b, RangeContext context = RangeContext::Forward);

enum class WitnessKind { ConvergentSums, Doubling };

struct WitnessPoint {
    BigInt N;
    EvalWithBound P;
    double ratio = 0.0;  // P / N
};

struct WitnessSequence {
    int b = 1;
    bool limsup = false;
    WitnessKind kind = WitnessKind::ConvergentSums;
    std::vector<BigInt> m;  // Doubling: convergent denominators with m_k >= 2 m_{k-1}
    double eta = 0.0;       // Doubling: certified half-width
    std::vector<WitnessPoint> points;
    bool truncated = false;  // budget stopped the sequence before k_max
};

inline constexpr std::uint64_t kDefaultBudget = 10000000;

// liminf: N_k = q_0 + ... + q_k for k = 0..k_max (ConvergentSums), or
// m_1 + ... + m_k for k = 1..k_max (Doubling, m_1 = 1).
WitnessSequence liminf_witness(long b, int k_max, std::uint64_t budget = kDefaultBudget,
                               WitnessKind kind = WitnessKind::ConvergentSums);
// limsup: N_k = q_{k+1} - 1 - (q_k + ... + q_1), or m_{k+1} - 1 - (m_k + ... + m_1),
// for k = 1..k_max.
WitnessSequence limsup_witness(long b, int k_max, std::uint64_t budget = kDefaultBudget,
                               WitnessKind kind = WitnessKind::ConvergentSums);

// One interval of a case analysis: G > threshold on [lo, hi] (or below it).
struct IntervalCheck {
    std::string label;
    double lo = 0.0;
    double hi = 0.0;
    double threshold = 0.0;
    bool below = false;
    Certificate cert;
    // range implied by the digit rules (b = 5 table only; otherwise lo, hi)
    double derived_lo = 0.0;
    double derived_hi = 0.0;
    bool contains_derived() const { return lo <= derived_lo && derived_hi <= hi; }
};

struct CaseCheck {
    std::string name;
    std::vector<IntervalCheck> intervals;
    double product_lower = 0.0;      // product of the interval thresholds
    double product_certified = 0.0;  // product of the certified lower bounds
    double required = 0.0;           // both products must exceed this
    std::string note;
    bool pass = false;
};

struct CaseReport {
    int b = 1;
    std::vector<CaseCheck> cases;
    bool all_pass() const;
};

// Digit-pattern case analysis with ranges derived from the geometric tail
// bounds; meaningful for b <= 5 (fails for b >= 6, as it must).
CaseReport certify_cases(long b);

// The b = 5 case table with the published ranges, thresholds and anchor values.
CaseReport certify_case_b5();

struct RatioRow {
    int n = 0;  // Fibonacci index for b = 1, convergent index otherwise
    BigInt q;
    double ratio = 0.0;
    double abs_err = 0.0;
    double target = 0.0;
    double deviation = 0.0;
};

// P_{q_n - 1}(beta) / q_n against C_b sqrt(D) / (2 pi), for n up to n_max
// (stopping at the budget).
std::vector<RatioRow> ratio_limit_check(long b, int n_max, double c_b, std::uint64_t budget = kDefaultBudget);

struct DecadeExtremes {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;  // inclusive
    double min_P = 0.0;
    std::uint64_t argmin = 0;
    double max_ratio = 0.0;
    std::uint64_t argmax = 0;
};

// Minimum of P_N and maximum of P_N / N on [1, 10], (10, 100], ... up to N_max.
std::vector<DecadeExtremes> scan_extremes(long b, std::uint64_t N_max);

struct GrowthVerdict {
    int b = 1;
    bool conclusive = false;
    bool liminf_positive = false;
    bool limsup_over_N_finite = false;
    std::string route;
    EvalWithBound C_b;
    std::optional<CaseReport> cases;
    std::optional<Certificate> below;
};

GrowthVerdict growth_verdict(long b);

}  // namespace sudler
