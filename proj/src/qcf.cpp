#include "sudler/qcf.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace sudler {

namespace mp = boost::multiprecision;

namespace {

const BigInt& two_pow_128() {
    static const BigInt v = BigInt(1) << 128;
    return v;
}

}  // namespace

BigInt frac_to_big(Frac128 x) {
    auto hi = static_cast<std::uint64_t>(x >> 64);
    auto lo = static_cast<std::uint64_t>(x);
    return (BigInt(hi) << 64) | BigInt(lo);
}

Frac128 frac_from_big(const BigInt& v) {
    BigInt r = v % two_pow_128();
    if (r < 0) r += two_pow_128();
    auto lo = static_cast<std::uint64_t>(r & BigInt(std::numeric_limits<std::uint64_t>::max()));
    auto hi = static_cast<std::uint64_t>(r >> 64);
    return (static_cast<Frac128>(hi) << 64) | lo;
}

Frac128 frac_from_real(const HighFloat& x) {
    HighFloat y = mp::ldexp(x, 128);
    BigInt k = mp::round(y).convert_to<BigInt>();
    return frac_from_big(k);
}

QuadraticSurd make_surd(long b) {
    if (b < 1) throw DomainError("make_surd: b must be a positive integer, got " + std::to_string(b));
    if (b > 1000000) throw DomainError("make_surd: b too large");
    QuadraticSurd s;
    s.b = static_cast<int>(b);
    s.num_rational = -b;
    s.num_sqrt = 1;
    s.denominator = 2;
    s.disc = b * b + 4;
    BigInt scaled = BigInt(s.disc) << 256;
    BigInt root = mp::sqrt(scaled);
    BigInt fixed = (root - (BigInt(b) << 128)) >> 1;
    s.frac = frac_from_big(fixed);
    s.sqrt_disc = mp::sqrt(HighFloat(s.disc));
    s.value = (s.sqrt_disc - HighFloat(b)) / 2;
    return s;
}

Frac128 exact_frac(const QuadraticSurd& s, std::uint64_t r) {
    BigInt R(r);
    BigInt root = mp::sqrt((BigInt(s.disc) * R * R) << 256);
    BigInt fixed = (root - ((BigInt(s.b) * R) << 128)) >> 1;
    return frac_from_big(fixed);
}

HighFloat ConvergentTable::closed_form(int n) const {
    QuadraticSurd s = make_surd(b);
    HighFloat bp = mp::pow(s.value, n + 1);
    HighFloat sign = (n + 1) % 2 == 0 ? HighFloat(1) : HighFloat(-1);
    return (1 / bp - sign * bp) / s.sqrt_disc;
}

ConvergentTable convergents(long b, int n_max) {
    if (b < 1) throw DomainError("convergents: b must be positive");
    if (n_max < 1) throw DomainError("convergents: n_max must be >= 1");
    ConvergentTable t;
    t.b = static_cast<int>(b);
    t.q.reserve(n_max + 1);
    t.q.push_back(1);
    t.q.push_back(BigInt(b));
    for (int n = 2; n <= n_max; ++n) t.q.push_back(b * t.q[n - 1] + t.q[n - 2]);
    return t;
}

ConvergentTable convergents_above(long b, const BigInt& limit) {
    ConvergentTable t = convergents(b, 1);
    while (t.q.back() <= limit) {
        std::size_t n = t.q.size();
        t.q.push_back(b * t.q[n - 1] + t.q[n - 2]);
    }
    return t;
}

std::uint64_t to_u64(const BigInt& v) {
    if (v < 0 || v > BigInt(std::numeric_limits<std::uint64_t>::max()))
        throw DomainError("integer does not fit in 64 bits");
    return static_cast<std::uint64_t>(v);
}

OstrowskiDigits ostrowski_expand(const BigInt& N, long b) {
    if (N < 0) throw DomainError("ostrowski_expand: N must be nonnegative");
    if (b < 1) throw DomainError("ostrowski_expand: b must be positive");
    OstrowskiDigits out;
    out.b = static_cast<int>(b);
    out.value = N;
    if (N == 0) return out;
    ConvergentTable t = convergents_above(b, N);
    out.digits.assign(t.q.size(), 0);
    BigInt rest = N;
    for (std::size_t i = t.q.size(); i-- > 0;) {
        BigInt c = rest / t.q[i];
        out.digits[i] = static_cast<int>(c);
        rest -= c * t.q[i];
    }
    while (!out.digits.empty() && out.digits.back() == 0) out.digits.pop_back();
    validate_ostrowski(out.digits, b);
    return out;
}

void validate_ostrowski(const std::vector<int>& digits, long b) {
    if (b < 1) throw DomainError("ostrowski: b must be positive");
    for (std::size_t i = 0; i < digits.size(); ++i) {
        int c = digits[i];
        if (i == 0 && (c < 0 || c >= b))
            throw DigitRuleError(1, "rule 1 violated: c_1 = " + std::to_string(c) +
                                        " must satisfy 0 <= c_1 < " + std::to_string(b));
        if (i > 0 && (c < 0 || c > b))
            throw DigitRuleError(2, "rule 2 violated: c_" + std::to_string(i + 1) + " = " +
                                        std::to_string(c) + " must satisfy 0 <= c <= " +
                                        std::to_string(b));
        if (i > 0 && c == b && digits[i - 1] != 0)
            throw DigitRuleError(3, "rule 3 violated: c_" + std::to_string(i + 1) + " = " +
                                        std::to_string(b) + " requires c_" + std::to_string(i) +
                                        " = 0, got " + std::to_string(digits[i - 1]));
    }
}

BigInt ostrowski_value(const std::vector<int>& digits, long b) {
    validate_ostrowski(digits, b);
    BigInt sum = 0;
    BigInt q_prev = 1;  // q_{i-1}, seeded so that q_1 = b * q_0 + 0
    BigInt q = 1;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        sum += digits[i] * q;
        BigInt next = (i == 0) ? BigInt(b) : b * q + q_prev;
        q_prev = q;
        q = next;
    }
    return sum;
}

BigInt ostrowski_value(const OstrowskiDigits& d) { return ostrowski_value(d.digits, d.b); }

BigInt fibonacci(int n) {
    if (n < 0) throw DomainError("fibonacci: negative index");
    BigInt a = 0, b = 1;
    for (int i = 0; i < n; ++i) {
        BigInt t = a + b;
        a = b;
        b = t;
    }
    return a;
}

ZeckendorffIndices zeckendorff_expand(const BigInt& N) {
    if (N < 0) throw DomainError("zeckendorff_expand: N must be nonnegative");
    ZeckendorffIndices out;
    out.value = N;
    std::vector<BigInt> fib{0, 1};
    while (fib.back() <= N) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
    BigInt rest = N;
    for (int i = static_cast<int>(fib.size()) - 1; i >= 2 && rest > 0; --i) {
        if (fib[i] <= rest) {
            out.indices.push_back(i);
            rest -= fib[i];
            --i;
        }
    }
    std::reverse(out.indices.begin(), out.indices.end());
    return out;
}

}  // namespace sudler
