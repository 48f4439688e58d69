#include "sudler/kernel.hpp"

#include "sudler/accum.hpp"
#include "sudler/parallel.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace sudler {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;

struct Partial {
    CompensatedSum sum;
    double abs_sum = 0.0;
    double inv_dist_sum = 0.0;
    std::uint64_t count = 0;
    std::uint64_t zeros = 0;

    void merge(const Partial& o) {
        sum.add(o.sum);
        abs_sum += o.abs_sum;
        inv_dist_sum += o.inv_dist_sum;
        count += o.count;
        zeros += o.zeros;
    }
};

Partial chunk_fixed(Frac128 beta, Frac128 shift, std::uint64_t lo, std::uint64_t hi) {
    Partial p;
    Frac128 x = beta * static_cast<Frac128>(lo) + shift;
    for (std::uint64_t r = lo; r < hi; ++r, x += beta) {
        ++p.count;
        if (x == 0) {
            ++p.zeros;
            continue;
        }
        double d = dist_to_int(x);
        double t = std::log(2.0 * std::sin(kPi * d));
        p.sum.add(t);
        p.abs_sum += std::fabs(t);
        p.inv_dist_sum += 1.0 / d;
    }
    return p;
}

LogProduct finish(const Partial& p, std::uint64_t r_max) {
    LogProduct out;
    out.log_sum = p.sum.value();
    out.count = p.count;
    out.zeros = p.zeros;
    // per-term rounding of (frac -> double, multiply, sin, log), drift of the
    // fixed-point stream through |d/dx log sin(pi x)| <= 1/||x||, and the final
    // compensated-sum rounding
    out.log_err = kUnit * (6.0 * static_cast<double>(p.count) + 2.0 * p.abs_sum) +
                  std::ldexp(static_cast<double>(r_max) + 1.0, -128) * p.inv_dist_sum +
                  4.0 * kUnit * std::fabs(out.log_sum);
    return out;
}

Partial reduce_fixed(Frac128 beta, Frac128 shift, std::uint64_t first, std::uint64_t last_excl) {
    auto parts = map_chunks(first, last_excl, [&](std::uint64_t lo, std::uint64_t hi) {
        return chunk_fixed(beta, shift, lo, hi);
    });
    Partial total;
    for (const auto& p : parts) total.merge(p);
    return total;
}

}  // namespace

FracState frac_state(const QuadraticSurd& s, std::uint64_t r) {
    FracState st;
    st.beta = s.frac;
    st.r = r;
    st.frac = s.frac * static_cast<Frac128>(r);
    return st;
}

EvalWithBound LogProduct::to_value() const {
    EvalWithBound out;
    if (zeros > 0) {
        out.zero = true;
        return out;
    }
    out.value = std::exp(log_sum);
    out.abs_err = out.value * std::expm1(log_err);
    return out;
}

LogProduct log_product_fixed(Frac128 beta, Frac128 shift, std::uint64_t first, std::uint64_t last) {
    if (last < first) return {};
    return finish(reduce_fixed(beta, shift, first, last + 1), last);
}

std::vector<LogProduct> log_product_prefixes(Frac128 beta, Frac128 shift,
                                             const std::vector<std::uint64_t>& ends) {
    std::vector<LogProduct> out;
    if (ends.empty()) return out;
    std::uint64_t max_end = 0;
    for (std::size_t i = 0; i < ends.size(); ++i) {
        if (i > 0 && ends[i] < ends[i - 1]) throw DomainError("log_product_prefixes: ends must ascend");
        max_end = std::max(max_end, ends[i]);
    }
    // whole chunks aligned at 1; each end point adds the tail of its last chunk
    std::uint64_t full_chunks = max_end / kChunkSize;
    auto chunks = map_indices(full_chunks, [&](std::uint64_t c) {
        return chunk_fixed(beta, shift, 1 + c * kChunkSize, 1 + (c + 1) * kChunkSize);
    });

    Partial running;
    std::uint64_t done = 0;  // chunks folded into `running`
    for (std::uint64_t end : ends) {
        std::uint64_t whole = end / kChunkSize;
        while (done < whole) running.merge(chunks[done++]);
        Partial here = running;
        here.merge(chunk_fixed(beta, shift, 1 + whole * kChunkSize, end + 1));
        out.push_back(finish(here, end));
    }
    return out;
}

EvalWithBound sudler_product(const QuadraticSurd& alpha, std::uint64_t N) {
    if (N < 1) throw DomainError("sudler_product: N must be >= 1");
    return log_product_fixed(alpha.frac, 0, 1, N).to_value();
}

EvalWithBound sudler_product(long b, std::uint64_t N) { return sudler_product(make_surd(b), N); }

EvalWithBound sudler_product_rational(std::int64_t m, std::int64_t n, std::uint64_t N) {
    if (N < 1) throw DomainError("sudler_product: N must be >= 1");
    if (n == 0) throw DomainError("sudler_product: zero denominator");
    if (n < 0) {
        n = -n;
        m = -m;
    }
    std::int64_t m_red = m % n;
    if (m_red < 0) m_red += n;
    const auto un = static_cast<unsigned __int128>(n);
    auto parts = map_chunks(1, N + 1, [&](std::uint64_t lo, std::uint64_t hi) {
        Partial p;
        for (std::uint64_t r = lo; r < hi; ++r) {
            ++p.count;
            auto res = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * m_red) % un);
            std::uint64_t near = std::min<std::uint64_t>(res, static_cast<std::uint64_t>(n) - res);
            double d = static_cast<double>(near) / static_cast<double>(n);
            if (near == 0 || d < 1e-15) {
                ++p.zeros;
                continue;
            }
            double t = std::log(2.0 * std::sin(kPi * d));
            p.sum.add(t);
            p.abs_sum += std::fabs(t);
        }
        return p;
    });
    Partial total;
    for (const auto& p : parts) total.merge(p);
    return finish(total, 0).to_value();
}

int convergent_index(long b, int n) {
    int m = (b == 1) ? n - 1 : n;
    if (m < 0) throw DomainError("index out of range for b = " + std::to_string(b));
    return m;
}

EvalWithBound shifted_product_q(long b, int m, Frac128 shift) {
    ConvergentTable t = convergents(b, std::max(m, 1));
    std::uint64_t q = to_u64(t.q[m]);
    QuadraticSurd s = make_surd(b);
    return log_product_fixed(s.frac, shift, 1, q).to_value();
}

EvalWithBound perturbed_product_q(long b, int m, const HighFloat& eps) {
    if (m < 0) throw DomainError("perturbed_product: negative index");
    ConvergentTable t = convergents(b, std::max(m, 1));
    HighFloat shift = eps / HighFloat(t.q[m]);
    if (m % 2 == 1) shift = -shift;
    return shifted_product_q(b, m, frac_from_real(shift));
}

EvalWithBound perturbed_product(long b, int n, double eps) {
    if (n < 1) throw DomainError("perturbed_product: n must be >= 1");
    return perturbed_product_q(b, convergent_index(b, n), HighFloat(eps));
}

FactorTriple factor_triple(long b, int n, double eps) {
    if (n < 1) throw DomainError("factor_triple: n must be >= 1");
    const int m = convergent_index(b, n);
    if (m < 1) throw DomainError("factor_triple: index too small");
    QuadraticSurd s = make_surd(b);
    ConvergentTable t = convergents(b, m);
    const std::uint64_t q = to_u64(t.q[m]);
    const std::uint64_t p = to_u64(t.q[m - 1] % t.q[m]);
    const double qd = static_cast<double>(q);
    const double bp = boost::multiprecision::pow(s.value, m + 1).convert_to<double>();

    FactorTriple out;
    out.n = n;
    out.A = 2.0 * qd * std::fabs(std::sin(kPi * (bp + eps / qd)));
    out.s0 = 2.0 * std::sin(kPi * (eps / qd + bp / 2.0));
    const double s0sq = out.s0 * out.s0;

    struct Terms {
        CompensatedSum logB;
        CompensatedSum logC;
    };
    auto term = [&](std::uint64_t r, double weight, Terms& acc) {
        auto res = static_cast<std::uint64_t>((static_cast<unsigned __int128>(p) * r) % q);
        double a = kPi * static_cast<double>(r) / qd;
        double delta = kPi * bp * (static_cast<double>(res) / qd - 0.5);
        double sh = std::sin(delta / 2.0);
        // sin(a - delta) / sin(a) - 1
        double ratio_m1 = -2.0 * sh * sh - std::sin(delta) / std::tan(a);
        acc.logB.add(weight * std::log1p(ratio_m1));
        double st = 2.0 * std::sin(a - delta);
        double x = s0sq / (st * st);
        if (x >= 1.0)
            throw FactorizationError("factor_triple: s_n(r)^2 <= s_n(0,eps)^2 at r = " + std::to_string(r) +
                                     "; eps outside the factorization's range");
        acc.logC.add(weight * 0.5 * std::log1p(-x));
    };

    const std::uint64_t half = (q - 1) / 2;
    auto parts = map_chunks(1, half + 1, [&](std::uint64_t lo, std::uint64_t hi) {
        Terms acc;
        for (std::uint64_t r = lo; r < hi; ++r) term(r, 2.0, acc);
        return acc;
    });
    Terms total;
    for (const auto& pt : parts) {
        total.logB.add(pt.logB);
        total.logC.add(pt.logC);
    }
    if (q % 2 == 0) term(q / 2, 1.0, total);
    out.B = std::exp(total.logB.value());
    out.C = std::exp(total.logC.value());
    return out;
}

}  // namespace sudler
