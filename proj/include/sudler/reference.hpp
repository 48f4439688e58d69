#pragma once

#include <array>
#include <cstdint>

// Published numeric tables that the computed values are compared against.
namespace sudler::reference {

// C_b for b = 1..10.
inline constexpr std::array<double, 10> kCb = {2.406152, 2.159658, 1.800517, 1.499350, 1.267273,
                                               1.089429, 0.951175, 0.841663, 0.753296, 0.680773};

// b = 6: small values of P_N along N = q_0 + ... + q_k.
inline constexpr std::array<std::uint64_t, 6> kB6MinN = {1, 7, 44, 272, 1677, 10335};
inline constexpr std::array<double, 6> kB6MinP = {0.977, 0.907, 0.849, 0.794, 0.742, 0.693};

// b = 6: large values along N = q_{k+1} - 1 - (q_k + ... + q_1). The row is
// labelled P_N but the values fit P_N / N.
inline constexpr std::array<std::uint64_t, 4> kB6MaxN = {30, 184, 1133, 6981};
inline constexpr std::array<double, 4> kB6MaxValue = {1.061, 1.213, 1.286, 1.378};

// b = 5 anchor values of G_beta (each quoted to about two decimals).
struct Anchor {
    double eps;
    double G;
};
inline constexpr std::array<Anchor, 7> kB5Anchors = {{{0.04, 1.50},
                                                      {-0.01, 1.19},
                                                      {-0.0387, 1.002},
                                                      {-0.043, 0.973},
                                                      {-0.107, 0.54},
                                                      {0.19, 2.27},
                                                      {0.37, 2.67}}};

}  // namespace sudler::reference
