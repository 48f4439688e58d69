#include "sudler/limitfn.hpp"

#include "sudler/accum.hpp"
#include "sudler/fixed.hpp"
#include "sudler/parallel.hpp"
#include "sudler/qcf.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace sudler {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;
constexpr std::uint64_t kMinRadius = 64;
constexpr std::uint64_t kMaxRadius = std::uint64_t{1} << 30;

struct Params {
    long b;
    double D;
    double sD;
    double beta;
    double h;  // 1 / (2 sqrt(D)): |u_b(r) / (2 sqrt(D)) - r| <= h
    Frac128 beta_fixed;
};

Params params(long b) {
    QuadraticSurd s = make_surd(b);
    Params p;
    p.b = b;
    p.D = static_cast<double>(s.disc);
    p.sD = s.sqrt_disc_d();
    p.beta = s.value_d();
    p.h = 1.0 / (2.0 * p.sD);
    p.beta_fixed = s.frac;
    return p;
}

inline double u_of(const Params& p, std::uint64_t r, Frac128 fr) {
    return 2.0 * p.sD * static_cast<double>(r) + 1.0 - 2.0 * frac_to_double(fr);
}

// A term w * log|1 - c^2/u^2| of a series.
struct Weighted {
    double c;
    double w;
};

struct SeriesSum {
    double value = 0.0;
    double err = 0.0;  // rounding + tail
    std::uint64_t zeros = 0;
    std::uint64_t R = 0;
};

// Smallest radius for which every r > R satisfies u_b(r) > |c| with room.
std::uint64_t min_radius(const Params& p, const std::vector<Weighted>& cs) {
    double cmax = 0.0;
    for (const auto& t : cs) cmax = std::max(cmax, std::fabs(t.c));
    return std::max<std::uint64_t>(kMinRadius, static_cast<std::uint64_t>(cmax / (2.0 * p.sD) + p.h) + 4);
}

// Tail of sum_{r>R} log|1 - c^2/u^2| for one c: approximation and bound.
void tail_one(const Params& p, double c, std::uint64_t R, TailMode mode, double& approx, double& bound) {
    const double Rd = static_cast<double>(R);
    const double a = c * c / (4.0 * p.D);
    const double kappa = 1.0 - p.h / (Rd + 1.0);
    const double x_max = a / ((Rd + 1.0 - p.h) * (Rd + 1.0 - p.h));
    if (mode == TailMode::Corrected) {
        approx = -a * boost::math::trigamma(Rd + 1.0);
        bound = a * (p.h / (Rd * Rd) + p.h * p.h / (3.0 * Rd * Rd * Rd)) / (kappa * kappa) +
                a * a / (std::pow(kappa, 4) * 3.0 * Rd * Rd * Rd) / (2.0 * (1.0 - x_max));
    } else {
        approx = 0.0;
        bound = a / (kappa * kappa * (1.0 - x_max) * Rd);
    }
}

double tail_bound(const Params& p, const std::vector<Weighted>& cs, std::uint64_t R, TailMode mode) {
    double total = 0.0;
    for (const auto& t : cs) {
        double ap, bd;
        tail_one(p, t.c, R, mode, ap, bd);
        total += std::fabs(t.w) * bd;
    }
    return total;
}

std::uint64_t pick_radius(const Params& p, const std::vector<Weighted>& cs, double target, TailMode mode) {
    std::uint64_t R = min_radius(p, cs);
    if (!(target > 0.0)) return kMaxRadius;
    // leading coefficient of the bound, A / R^2 (corrected) or A / R (plain)
    double A = 0.0;
    for (const auto& t : cs) {
        double a = t.c * t.c / (4.0 * p.D);
        A += std::fabs(t.w) * (mode == TailMode::Corrected ? a * p.h : a);
    }
    double guess = mode == TailMode::Corrected ? std::sqrt(A / target) : A / target;
    if (guess > static_cast<double>(kMaxRadius)) return kMaxRadius;
    R = std::max(R, static_cast<std::uint64_t>(guess) + 1);
    while (R < kMaxRadius && tail_bound(p, cs, R, mode) > target) R += R / 4 + 1;
    return std::min(R, kMaxRadius);
}

struct LogPartial {
    CompensatedSum sum;
    double err = 0.0;
    std::uint64_t zeros = 0;
};

SeriesSum log_series(const Params& p, const std::vector<Weighted>& cs, std::uint64_t R, TailMode mode) {
    R = std::max(R, min_radius(p, cs));
    auto parts = map_chunks(1, R + 1, [&](std::uint64_t lo, std::uint64_t hi) {
        LogPartial part;
        Frac128 fr = p.beta_fixed * static_cast<Frac128>(lo);
        for (std::uint64_t r = lo; r < hi; ++r, fr += p.beta_fixed) {
            const double u = u_of(p, r, fr);
            const double u2 = u * u;
            for (const auto& t : cs) {
                const double c = t.c;
                if (std::fabs(c) == u) {
                    ++part.zeros;
                    continue;
                }
                const double x = c * c / u2;
                double term;
                double extra;
                if (std::fabs(c) < 0.5 * u) {
                    term = std::log1p(-x);
                    extra = 0.0;
                } else {
                    term = std::log(std::fabs((u - c) * (u + c)) / u2);
                    extra = 6.0;
                }
                const double w = c * c / std::fabs(u2 - c * c);
                part.sum.add(t.w * term);
                part.err += std::fabs(t.w) * kUnit * (2.0 * std::fabs(term) + 8.0 * w + extra);
            }
        }
        return part;
    });
    LogPartial total;
    for (const auto& pt : parts) {
        total.sum.add(pt.sum);
        total.err += pt.err;
        total.zeros += pt.zeros;
    }
    SeriesSum out;
    out.R = R;
    out.zeros = total.zeros;
    double tail_val = 0.0;
    double tail_err = 0.0;
    for (const auto& t : cs) {
        double ap, bd;
        tail_one(p, t.c, R, mode, ap, bd);
        tail_val += t.w * ap;
        tail_err += std::fabs(t.w) * bd;
    }
    out.value = total.sum.value() + tail_val;
    out.err = total.err + tail_err + 4.0 * kUnit * std::fabs(out.value);
    return out;
}

std::vector<Weighted> k_terms(const Params& p) {
    std::vector<Weighted> cs;
    for (long j = 1; j <= p.b; ++j) cs.push_back({static_cast<double>(2 * p.b - 2 * j + 1) + 2.0 * p.beta, 1.0});
    return cs;
}

double log_pochhammer(const Params& p, double& err) {
    double s = 0.0;
    for (long j = 0; j < p.b; ++j) s += std::log(p.beta + static_cast<double>(j));
    err = kUnit * (4.0 * static_cast<double>(p.b) + 2.0 * std::fabs(s));
    return s;
}

// log K_b with its error, cached by (b, mode); recomputed when a tighter
// target is requested.
struct KEntry {
    double target;
    EvalWithBound logK;
};

EvalWithBound log_K_radius(const Params& p, std::uint64_t R, TailMode mode) {
    auto cs = k_terms(p);
    const double bd = static_cast<double>(p.b);
    SeriesSum s = log_series(p, cs, R, mode);
    double poch_err;
    double poch = log_pochhammer(p, poch_err);
    EvalWithBound out;
    out.value = -(poch + s.value) / bd;
    out.abs_err = (poch_err + s.err) / bd + kUnit * std::fabs(out.value);
    return out;
}

EvalWithBound log_K(const Params& p, double target, TailMode mode) {
    static std::mutex mu;
    static std::map<std::pair<long, int>, KEntry> cache;
    const auto key = std::make_pair(p.b, static_cast<int>(mode));
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end() && it->second.target <= target) return it->second.logK;
    }
    const double bd = static_cast<double>(p.b);
    EvalWithBound out = log_K_radius(p, pick_radius(p, k_terms(p), 0.5 * target * bd, mode), mode);
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = KEntry{target, out};
    return out;
}

struct LogGResult {
    double value = 0.0;
    double err = 0.0;
    bool zero = false;
    std::uint64_t R = 0;
};

LogGResult log_G_radius(const Params& p, double eps, std::uint64_t R, TailMode mode, const EvalWithBound& K) {
    LogGResult out;
    const double lin = p.sD * eps + 1.0;
    if (lin == 0.0) {
        out.zero = true;
        return out;
    }
    const double c = 2.0 * p.sD * eps + 1.0;
    SeriesSum s = log_series(p, {{c, 1.0}}, R, mode);
    out.R = s.R;
    if (s.zeros > 0) {
        out.zero = true;
        return out;
    }
    const double lf = std::log(std::fabs(lin));
    const double lf_err = kUnit * (2.0 * std::fabs(lf) + 2.0 + 2.0 * std::fabs(p.sD * eps) / std::fabs(lin));
    out.value = lf + s.value + K.value;
    out.err = lf_err + s.err + K.abs_err + 4.0 * kUnit * std::fabs(out.value);
    return out;
}

EvalWithBound to_eval(const LogGResult& lg) {
    EvalWithBound out;
    if (lg.zero) {
        out.zero = true;
        return out;
    }
    out.value = std::exp(lg.value);
    out.abs_err = out.value * std::expm1(lg.err);
    if (out.value <= out.abs_err) {
        out.abs_err += out.value;
        out.value = 0.0;
        out.zero = true;
    }
    return out;
}

constexpr double kKTarget = 1e-12;

LogGResult log_G_adaptive(const Params& p, double eps, double tol, TailMode mode) {
    if (!(tol > 0.0)) throw DomainError("target_abs_err must be positive");
    const double c = 2.0 * p.sD * eps + 1.0;
    std::vector<Weighted> cs{{c, 1.0}};
    const double k_target = mode == TailMode::Corrected ? std::min(kKTarget, 0.05 * tol) : 0.05 * tol;
    const EvalWithBound K = log_K(p, k_target, mode);
    // a cheap pass to learn the size of G, then a radius for the tail
    LogGResult rough = log_G_radius(p, eps, min_radius(p, cs), mode, K);
    if (rough.zero) return rough;
    double g_hi = std::exp(rough.value + rough.err);
    double target = 0.4 * tol / std::max(g_hi, 1e-300);
    target = std::min(target, 1.0);
    std::uint64_t R = pick_radius(p, cs, target, mode);
    LogGResult res = log_G_radius(p, eps, R, mode, K);
    while (!res.zero && R < kMaxRadius) {
        double g = std::exp(res.value);
        if (g * std::expm1(res.err) <= tol) break;
        R = std::min(kMaxRadius, R * 2);
        LogGResult next = log_G_radius(p, eps, R, mode, K);
        // rounding- or K-limited: a larger radius no longer helps
        bool stalled = next.err > 0.9 * res.err;
        res = next;
        if (stalled) break;
    }
    return res;
}

}  // namespace

double u_seq(long b, std::uint64_t r) {
    if (r < 1) throw DomainError("u_seq: r must be >= 1");
    Params p = params(b);
    return u_of(p, r, p.beta_fixed * static_cast<Frac128>(r));
}

EvalWithBound G_eval(long b, double eps, double tol, TailMode mode) {
    Params p = params(b);
    return to_eval(log_G_adaptive(p, eps, tol, mode));
}

SeriesEval G_eval_radius(long b, double eps, std::uint64_t R, TailMode mode) {
    Params p = params(b);
    LogGResult lg = log_G_radius(p, eps, R, mode, log_K_radius(p, R, mode));
    return {to_eval(lg), lg.R};
}

EvalWithBound log_G(long b, double eps, double tol) {
    Params p = params(b);
    LogGResult lg = log_G_adaptive(p, eps, tol, TailMode::Corrected);
    if (lg.zero || lg.err > 1.0) throw RootError("log_G: eps = " + std::to_string(eps) + " is at a root");
    EvalWithBound out;
    out.value = lg.value;
    out.abs_err = lg.err;
    return out;
}

EvalWithBound C_const(long b, double tol) {
    if (!(tol > 0.0)) throw DomainError("target_abs_err must be positive");
    Params p = params(b);
    const double bd = static_cast<double>(b);
    std::vector<Weighted> cs{{1.0, bd}};
    for (const auto& t : k_terms(p)) cs.push_back({t.c, -1.0});
    double poch_err;
    const double poch = log_pochhammer(p, poch_err);
    auto eval_at = [&](std::uint64_t R, double& err) {
        SeriesSum s = log_series(p, cs, R, TailMode::Corrected);
        err = (s.err + poch_err) / bd;
        return (s.value - poch) / bd;
    };
    double err0;
    double l0 = eval_at(min_radius(p, cs), err0);
    double target = 0.4 * tol * bd / std::exp(l0 + err0);
    std::uint64_t R = pick_radius(p, cs, target, TailMode::Corrected);
    double err;
    double l = eval_at(R, err);
    while (std::exp(l) * std::expm1(err) > tol && R < kMaxRadius) {
        R = std::min(kMaxRadius, R * 2);
        l = eval_at(R, err);
    }
    EvalWithBound out;
    out.value = std::exp(l);
    out.abs_err = out.value * std::expm1(err);
    return out;
}

EvalWithBound limit_B(long b, double tol) {
    Params p = params(b);
    EvalWithBound C = C_const(b, tol);
    std::vector<Weighted> cs{{1.0, 1.0}};
    SeriesSum s = log_series(p, cs, pick_radius(p, cs, 0.1 * tol, TailMode::Corrected), TailMode::Corrected);
    const double scale = 2.0 * kPi / p.sD * std::exp(s.value);
    EvalWithBound out;
    out.value = C.value / scale;
    out.abs_err = C.abs_err / scale + out.value * std::expm1(s.err + 4.0 * kUnit);
    return out;
}

std::pair<double, double> roots_near_zero(long b) {
    Params p = params(b);
    const double u1 = u_of(p, 1, p.beta_fixed);
    return {-1.0 / p.sD, (u1 - 1.0) / (2.0 * p.sD)};
}

std::vector<double> roots_in(long b, double lo, double hi) {
    Params p = params(b);
    std::vector<double> out;
    if (hi < lo) return out;
    const double lin_root = -1.0 / p.sD;
    if (lin_root >= lo && lin_root <= hi) out.push_back(lin_root);
    const double reach = std::max(std::fabs(lo), std::fabs(hi));
    const auto r_max = static_cast<std::uint64_t>((2.0 * p.sD * reach + 1.0) / (2.0 * p.sD - 2.0)) + 2;
    Frac128 fr = 0;
    for (std::uint64_t r = 1; r <= r_max; ++r) {
        fr += p.beta_fixed;
        const double u = u_of(p, r, fr);
        const double pos = (u - 1.0) / (2.0 * p.sD);
        const double neg = (-u - 1.0) / (2.0 * p.sD);
        if (pos >= lo && pos <= hi) out.push_back(pos);
        if (neg >= lo && neg <= hi) out.push_back(neg);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct DerivPartial {
    CompensatedSum sum;
    double err = 0.0;
    bool root = false;
};

// order 1: sum 1/(u^2 - c^2); order 2: sum [1/(u-c)^2 + 1/(u+c)^2]
DerivPartial deriv_series(const Params& p, double c, std::uint64_t R, int order) {
    auto parts = map_chunks(1, R + 1, [&](std::uint64_t lo, std::uint64_t hi) {
        DerivPartial part;
        Frac128 fr = p.beta_fixed * static_cast<Frac128>(lo);
        for (std::uint64_t r = lo; r < hi; ++r, fr += p.beta_fixed) {
            const double u = u_of(p, r, fr);
            const double dm = u - c;
            const double dp = u + c;
            if (dm == 0.0 || dp == 0.0) {
                part.root = true;
                continue;
            }
            if (order == 1) {
                const double t = 1.0 / (dm * dp);
                part.sum.add(t);
                part.err += std::fabs(t) * kUnit * (4.0 + 6.0 * u * u * std::fabs(t));
            } else {
                const double t1 = 1.0 / (dm * dm);
                const double t2 = 1.0 / (dp * dp);
                part.sum.add(t1 + t2);
                part.err += kUnit * (t1 * (5.0 + 6.0 * u / std::fabs(dm)) + t2 * (5.0 + 6.0 * u / std::fabs(dp)) +
                                     (t1 + t2));
            }
        }
        return part;
    });
    DerivPartial total;
    for (const auto& pt : parts) {
        total.sum.add(pt.sum);
        total.err += pt.err;
        total.root = total.root || pt.root;
    }
    return total;
}

// Bounds on |sum_{r>R} term - psi'(R+1) approximation| for the derivative series.
double d1_tail_bound(const Params& p, double c, std::uint64_t R) {
    const double Rd = static_cast<double>(R);
    const double a = c * c / (4.0 * p.D);
    const double lambda = ((Rd + 1.0 - p.h) * (Rd + 1.0 - p.h) - a) / ((Rd + 1.0) * (Rd + 1.0));
    if (lambda <= 0.0) return std::numeric_limits<double>::infinity();
    return std::fabs(c) * (p.h / (Rd * Rd) + (p.h * p.h + a) / (3.0 * Rd * Rd * Rd)) / (p.sD * lambda);
}

double d2_tail_bound(const Params& p, double c, std::uint64_t R) {
    const double Rd = static_cast<double>(R);
    const double dmax = p.h + std::fabs(c) / (2.0 * p.sD);
    const double kappa = 1.0 - dmax / (Rd + 1.0);
    if (kappa <= 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * (dmax / (Rd * Rd) + dmax * dmax / (3.0 * Rd * Rd * Rd)) / (kappa * kappa);
}

EvalWithBound derivative(long b, double eps, double tol, int order) {
    if (!(tol > 0.0)) throw DomainError("target_abs_err must be positive");
    Params p = params(b);
    const double lin = p.sD * eps + 1.0;
    if (lin == 0.0) throw RootError("eps is at the root -1/sqrt(b^2+4)");
    const double c = 2.0 * p.sD * eps + 1.0;
    auto bound = [&](std::uint64_t R) { return order == 1 ? d1_tail_bound(p, c, R) : d2_tail_bound(p, c, R); };
    std::uint64_t R = std::max<std::uint64_t>(kMinRadius, static_cast<std::uint64_t>(std::fabs(c) / (2.0 * p.sD)) + 8);
    const double dmax = p.h + std::fabs(c) / (2.0 * p.sD);
    R = std::max(R, static_cast<std::uint64_t>(std::sqrt(2.0 * (std::fabs(c) + dmax) / (0.5 * tol))) / 2);
    while (bound(R) > 0.5 * tol && R < kMaxRadius) R += R / 4 + 1;
    DerivPartial s = deriv_series(p, c, R, order);
    if (s.root) throw RootError("eps = " + std::to_string(eps) + " is at a root");
    const double trig = boost::math::trigamma(static_cast<double>(R) + 1.0);
    EvalWithBound out;
    if (order == 1) {
        const double first = p.sD / lin;
        const double scale = 4.0 * p.sD * c;
        const double series = s.sum.value() + trig / (4.0 * p.D);
        out.value = first - scale * series;
        out.abs_err = std::fabs(first) * 2.0 * kUnit * (1.0 + std::fabs(p.sD * eps / lin)) +
                      std::fabs(scale) * (s.err + 4.0 * kUnit * std::fabs(series)) + bound(R) +
                      4.0 * kUnit * std::fabs(out.value);
    } else {
        const double first = -p.D / (lin * lin);
        const double series = s.sum.value() + 2.0 * trig / (4.0 * p.D);
        out.value = first - 4.0 * p.D * series;
        out.abs_err = std::fabs(first) * 4.0 * kUnit * (1.0 + std::fabs(p.sD * eps / lin)) +
                      4.0 * p.D * (s.err + 4.0 * kUnit * std::fabs(series)) + bound(R) +
                      4.0 * kUnit * std::fabs(out.value);
    }
    return out;
}

}  // namespace

EvalWithBound d1_log_G(long b, double eps, double tol) { return derivative(b, eps, tol, 1); }
EvalWithBound d2_log_G(long b, double eps, double tol) { return derivative(b, eps, tol, 2); }

std::string to_string(CertStatus s) {
    switch (s) {
        case CertStatus::Certified:
            return "certified";
        case CertStatus::Refuted:
            return "refuted";
        case CertStatus::Inconclusive:
            return "inconclusive";
    }
    return "inconclusive";
}

namespace {

void check_interval(long b, double lo, double hi) {
    if (!(lo <= hi)) throw DomainError("certificate interval must satisfy lo <= hi");
    auto roots = roots_in(b, lo, hi);
    if (!roots.empty())
        throw RootError("interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "] contains a zero at " +
                        std::to_string(roots.front()));
}

}  // namespace

Certificate certify_above(long b, double lo, double hi, double threshold, double tol) {
    check_interval(b, lo, hi);
    Certificate cert;
    cert.b = b;
    cert.lo = lo;
    cert.hi = hi;
    cert.threshold = threshold;
    cert.at_lo = G_eval(b, lo, tol);
    cert.at_hi = G_eval(b, hi, tol);
    cert.bound = std::min(cert.at_lo.lo(), cert.at_hi.lo());
    if (cert.bound > threshold)
        cert.status = CertStatus::Certified;
    else if (cert.at_lo.hi() < threshold || cert.at_hi.hi() < threshold)
        cert.status = CertStatus::Refuted;
    else
        cert.status = CertStatus::Inconclusive;
    return cert;
}

namespace {

struct Side {
    EvalWithBound logg;
    EvalWithBound slope;
};

Side side_at(long b, double x, double tol) { return {log_G(b, x, tol), d1_log_G(b, x, tol)}; }

// Upper bound of log G on [l, h] from the two tangent lines.
double tangent_upper(double l, double h, const Side& L, const Side& H) {
    const double L1 = L.logg.value + L.logg.abs_err;
    const double s1 = L.slope.value + L.slope.abs_err;  // steepest rise from l
    const double L2 = H.logg.value + H.logg.abs_err;
    const double s2 = H.slope.value - H.slope.abs_err;  // steepest rise towards h from the right
    const double w = h - l;
    double best = std::min(L1 + std::max(s1, 0.0) * w, L2 + std::max(-s2, 0.0) * w);
    if (s1 > 0.0 && s2 < 0.0) {
        double x = (L2 - L1 + s1 * l - s2 * h) / (s1 - s2);
        x = std::clamp(x, l, h);
        best = std::min(best, std::max(L1 + s1 * (x - l), L2 + s2 * (x - h)));
    }
    return best;
}

void below_piece(long b, double l, double h, const Side& L, const Side& H, double log_thr, double tol,
                 int depth, Certificate& cert, bool& refuted, bool& open) {
    if (L.logg.value - L.logg.abs_err >= log_thr || H.logg.value - H.logg.abs_err >= log_thr) {
        refuted = true;
        return;
    }
    const double up = tangent_upper(l, h, L, H);
    if (up < log_thr) {
        cert.bound = std::max(cert.bound, std::exp(up));
        return;
    }
    if (depth <= 0) {
        open = true;
        cert.bound = std::max(cert.bound, std::exp(up));
        return;
    }
    const double mid = 0.5 * (l + h);
    Side M = side_at(b, mid, tol);
    ++cert.pieces;
    below_piece(b, l, mid, L, M, log_thr, tol, depth - 1, cert, refuted, open);
    if (refuted) return;
    below_piece(b, mid, h, M, H, log_thr, tol, depth - 1, cert, refuted, open);
}

}  // namespace

Certificate certify_below(long b, double lo, double hi, double threshold, double tol, int max_depth) {
    check_interval(b, lo, hi);
    if (!(threshold > 0.0)) throw DomainError("certify_below: threshold must be positive");
    Certificate cert;
    cert.b = b;
    cert.lo = lo;
    cert.hi = hi;
    cert.threshold = threshold;
    cert.at_lo = G_eval(b, lo, tol);
    cert.at_hi = G_eval(b, hi, tol);
    cert.bound = 0.0;
    Side L = side_at(b, lo, tol);
    Side H = side_at(b, hi, tol);
    bool refuted = false;
    bool open = false;
    below_piece(b, lo, hi, L, H, std::log(threshold), tol, max_depth, cert, refuted, open);
    if (refuted)
        cert.status = CertStatus::Refuted;
    else if (open)
        cert.status = CertStatus::Inconclusive;
    else
        cert.status = CertStatus::Certified;
    return cert;
}

}  // namespace sudler
