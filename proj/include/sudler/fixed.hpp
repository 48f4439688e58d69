#pragma once

#include "sudler/types.hpp"

#include <cmath>
#include <cstdint>

namespace sudler {

// Fractional part in [0,1) scaled by 2^128, wrapping arithmetic mod 1.
using Frac128 = unsigned __int128;

inline constexpr Frac128 kFracHalf = Frac128{1} << 127;

inline double frac_to_double(Frac128 x) { return std::ldexp(static_cast<double>(x), -128); }

// ((x)) in (-1/2, 1/2].
inline double signed_frac(Frac128 x) {
    if (x == kFracHalf) return 0.5;
    return std::ldexp(static_cast<double>(static_cast<__int128>(x)), -128);
}

inline double signed_frac(double x) { return x - std::ceil(x - 0.5); }

// |((x))|, the distance to the nearest integer.
inline double dist_to_int(Frac128 x) { return std::fabs(signed_frac(x)); }

BigInt frac_to_big(Frac128 x);
Frac128 frac_from_big(const BigInt& v);  // v mod 2^128, v may be negative

// round(x * 2^128) reduced mod 2^128.
Frac128 frac_from_real(const HighFloat& x);

}  // namespace sudler
