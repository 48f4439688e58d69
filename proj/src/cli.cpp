#include "sudler/cli.hpp"

#include "sudler/growth.hpp"
#include "sudler/kernel.hpp"
#include "sudler/limitfn.hpp"
#include "sudler/parallel.hpp"
#include "sudler/qcf.hpp"
#include "sudler/reference.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

namespace sudler {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public DomainError {
public:
    using DomainError::DomainError;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", x == 0.0 ? 0.0 : x);
    return buf;
}

std::string flag(bool x) { return x ? "true" : "false"; }

// One output record. Every field is already a string, so the JSON, CSV and
// text forms carry the same payload.
struct Record {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, std::string>> values;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void param(std::string k, std::string v) { params.emplace_back(std::move(k), std::move(v)); }
    void value(std::string k, std::string v) { values.emplace_back(std::move(k), std::move(v)); }
};

enum class Format { Text, Json, Csv };

void emit(const Record& r, Format f, std::ostream& out) {
    if (f == Format::Json) {
        Json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = r.command;
        j["params"] = Json::object();
        for (const auto& [k, v] : r.params) j["params"][k] = v;
        j["values"] = Json::object();
        for (const auto& [k, v] : r.values) j["values"][k] = v;
        if (!r.columns.empty()) {
            j["columns"] = r.columns;
            j["rows"] = r.rows;
        }
        out << j.dump(2) << '\n';
        return;
    }
    if (f == Format::Csv) {
        if (r.columns.empty()) {
            for (std::size_t i = 0; i < r.values.size(); ++i) out << (i ? "," : "") << r.values[i].first;
            out << '\n';
            for (std::size_t i = 0; i < r.values.size(); ++i) out << (i ? "," : "") << r.values[i].second;
            out << '\n';
            return;
        }
        for (const auto& [k, v] : r.values) out << "# " << k << '=' << v << '\n';
        for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
        out << '\n';
        for (const auto& row : r.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
            out << '\n';
        }
        return;
    }
    out << r.command;
    for (const auto& [k, v] : r.params) out << ' ' << k << '=' << v;
    out << '\n';
    for (const auto& [k, v] : r.values) out << "  " << k << " = " << v << '\n';
    if (!r.columns.empty()) {
        std::vector<std::size_t> w(r.columns.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = r.columns[i].size();
        for (const auto& row : r.rows)
            for (std::size_t i = 0; i < row.size() && i < w.size(); ++i) w[i] = std::max(w[i], row[i].size());
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                out << (i ? "  " : "") << cells[i];
                if (i + 1 < cells.size()) out << std::string(w[i] - cells[i].size(), ' ');
            }
            out << '\n';
        };
        line(r.columns);
        for (const auto& row : r.rows) line(row);
    }
}

struct Globals {
    double tol = kDefaultTol;
    bool json = false;
    bool csv = false;
    std::uint64_t budget = kDefaultBudget;
    int threads = 0;
    bool timing = false;
};

struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
};

Grid parse_grid(const std::string& text) {
    Grid g;
    char c1 = 0;
    char c2 = 0;
    std::istringstream is(text);
    if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.step) || c1 != ':' || c2 != ':' || !is.eof())
        throw UsageError("--grid expects lo:hi:step, got '" + text + "'");
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || !std::isfinite(g.step) || g.step <= 0.0 || g.hi < g.lo)
        throw UsageError("--grid needs finite lo <= hi and step > 0");
    if ((g.hi - g.lo) / g.step > 1e6) throw UsageError("--grid has more than 10^6 points");
    return g;
}

std::pair<std::int64_t, std::int64_t> parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) throw UsageError("--rational expects m/n, got '" + text + "'");
    try {
        std::size_t used = 0;
        std::int64_t m = std::stoll(text.substr(0, slash), &used);
        if (used != slash) throw UsageError("bad numerator");
        std::string den = text.substr(slash + 1);
        std::int64_t n = std::stoll(den, &used);
        if (used != den.size()) throw UsageError("bad denominator");
        if (n == 0) throw UsageError("--rational: zero denominator");
        return {m, n};
    } catch (const std::logic_error&) {
        throw UsageError("--rational expects m/n, got '" + text + "'");
    }
}

BigInt parse_big(const std::string& text, const char* what) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        throw UsageError(std::string(what) + " must be a positive integer, got '" + text + "'");
    BigInt v(text);
    if (v < 1) throw UsageError(std::string(what) + " must be >= 1");
    return v;
}

void check_b(long b, long max_b = 1000000) {
    if (b < 1 || b > max_b)
        throw UsageError("--b must be in 1.." + std::to_string(max_b) + ", got " + std::to_string(b));
}

std::string join_digits(const std::vector<int>& digits) {
    std::string s;
    for (std::size_t i = 0; i < digits.size(); ++i) s += (i ? " " : "") + std::to_string(digits[i]);
    return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sudler products, limit functions and growth certificates", "sudler"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--tol", g.tol, "Target absolute error for limit-function evaluations");
    app.add_flag("--json", g.json, "Emit JSON");
    app.add_flag("--csv", g.csv, "Emit CSV");
    app.add_option("--budget", g.budget, "Largest number of sine factors a command may evaluate");
    app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)");
    app.add_flag("--timing", g.timing, "Add runtime_ms to the output");

    // eval
    auto* eval = app.add_subcommand("eval", "P_N(alpha) with an error bound");
    std::optional<long> eval_b;
    std::string eval_rational;
    bool eval_golden = false;
    std::uint64_t eval_N = 0;
    eval->add_option("--b", eval_b, "alpha = [0; b, b, b, ...]");
    eval->add_option("--rational", eval_rational, "alpha = m/n");
    eval->add_flag("--golden", eval_golden, "alpha = (sqrt(5) - 1) / 2");
    eval->add_option("-N", eval_N, "Number of factors")->required();

    // limit
    auto* limit = app.add_subcommand("limit", "G_beta(eps) at a point or on a grid");
    long limit_b = 1;
    std::optional<double> limit_eps;
    std::string limit_grid;
    bool limit_plain = false;
    limit->add_option("--b", limit_b, "Partial quotient b");
    limit->add_option("--eps", limit_eps, "Perturbation");
    limit->add_option("--grid", limit_grid, "lo:hi:step");
    limit->add_flag("--plain", limit_plain, "Drop the tail instead of correcting it");

    // constant
    auto* constant = app.add_subcommand("constant", "C_b");
    std::vector<long> constant_b;
    constant->add_option("--b", constant_b, "Partial quotients (default 1..10)");

    // table
    auto* table = app.add_subcommand("table", "Computed values next to the published tables");
    std::string table_which;
    table->add_option("which", table_which, "cb | b6-min | b6-max")
        ->required()
        ->check(CLI::IsMember({"cb", "b6-min", "b6-max"}));

    // certify
    auto* certify = app.add_subcommand("certify", "Growth verdict with its certificates");
    long certify_b = 1;
    certify->add_option("--b", certify_b, "Partial quotient b (1..20)")->required();

    // ostrowski
    auto* ostrowski = app.add_subcommand("ostrowski", "Digits and block decomposition of P_N");
    std::string ostrowski_N;
    long ostrowski_b = 1;
    bool ostrowski_reflected = false;
    ostrowski->add_option("-N", ostrowski_N, "Integer to expand")->required();
    ostrowski->add_option("--b", ostrowski_b, "Partial quotient b");
    ostrowski->add_flag("--reflected", ostrowski_reflected, "Decompose q_n - N - 1 and divide");

    // witness
    auto* witness = app.add_subcommand("witness", "Witness sequences for small P_N or large P_N / N");
    long witness_b = 6;
    std::string witness_kind = "liminf";
    std::string witness_method = "sums";
    int witness_k = 6;
    witness->add_option("--b", witness_b, "Partial quotient b");
    witness->add_option("--kind", witness_kind, "liminf | limsup")->check(CLI::IsMember({"liminf", "limsup"}));
    witness->add_option("--method", witness_method, "sums | doubling")->check(CLI::IsMember({"sums", "doubling"}));
    witness->add_option("--k", witness_k, "Largest index k");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    const Format fmt = g.json ? Format::Json : (g.csv ? Format::Csv : Format::Text);
    const auto t0 = std::chrono::steady_clock::now();
    Record rec;
    int code = kExitOk;
    try {
        if (g.json && g.csv) throw UsageError("--json and --csv are exclusive");
        if (!(g.tol > 0.0) || !std::isfinite(g.tol)) throw UsageError("--tol must be positive");
        if (g.threads < 0) throw UsageError("--threads must be >= 0");
        set_thread_count(g.threads);
        rec.param("tol", num(g.tol));

        if (*eval) {
            rec.command = "eval";
            const int specs = (eval_b ? 1 : 0) + (!eval_rational.empty() ? 1 : 0) + (eval_golden ? 1 : 0);
            if (specs != 1) throw UsageError("eval needs exactly one of --b, --rational, --golden");
            if (eval_N < 1) throw UsageError("-N must be >= 1");
            if (eval_N > g.budget)
                throw BudgetError("N = " + std::to_string(eval_N) + " exceeds the budget " + std::to_string(g.budget));
            EvalWithBound p;
            if (!eval_rational.empty()) {
                auto [m, n] = parse_rational(eval_rational);
                rec.param("alpha", std::to_string(m) + "/" + std::to_string(n));
                p = sudler_product_rational(m, n, eval_N);
            } else {
                const long b = eval_golden ? 1 : *eval_b;
                check_b(b);
                rec.param("alpha", "b=" + std::to_string(b));
                p = sudler_product(b, eval_N);
            }
            rec.param("N", std::to_string(eval_N));
            rec.value("value", num(p.value));
            rec.value("abs_err", num(p.abs_err));
            rec.value("zero", flag(p.zero));
        } else if (*limit) {
            rec.command = "limit";
            check_b(limit_b);
            const TailMode mode = limit_plain ? TailMode::Plain : TailMode::Corrected;
            rec.param("b", std::to_string(limit_b));
            rec.param("tail", limit_plain ? "plain" : "corrected");
            if (limit_eps.has_value() == !limit_grid.empty()) throw UsageError("limit needs exactly one of --eps, --grid");
            if (limit_eps) {
                if (!std::isfinite(*limit_eps)) throw UsageError("--eps must be finite");
                rec.param("eps", num(*limit_eps));
                EvalWithBound v = G_eval(limit_b, *limit_eps, g.tol, mode);
                rec.value("G", num(v.value));
                rec.value("abs_err", num(v.abs_err));
                rec.value("root", flag(v.zero));
            } else {
                Grid grid = parse_grid(limit_grid);
                rec.param("grid", limit_grid);
                const auto n = static_cast<std::uint64_t>(std::floor((grid.hi - grid.lo) / grid.step + 1e-9)) + 1;
                std::vector<double> roots = roots_in(limit_b, grid.lo - grid.step / 2, grid.hi + grid.step / 2);
                std::string listed;
                for (double r : roots) listed += (listed.empty() ? "" : ";") + num(r);
                rec.value("roots", listed);
                rec.columns = {"eps", "G", "abs_err", "root"};
                for (std::uint64_t i = 0; i < n; ++i) {
                    const double eps = grid.lo + static_cast<double>(i) * grid.step;
                    EvalWithBound v = G_eval(limit_b, eps, g.tol, mode);
                    bool near_root = v.zero;
                    for (double r : roots)
                        if (r >= eps - grid.step / 2 && r < eps + grid.step / 2) near_root = true;
                    rec.rows.push_back({num(eps), num(v.value), num(v.abs_err), near_root ? "1" : "0"});
                }
            }
        } else if (*constant) {
            rec.command = "constant";
            if (constant_b.empty())
                for (long b = 1; b <= 10; ++b) constant_b.push_back(b);
            rec.columns = {"b", "C_b", "abs_err"};
            for (long b : constant_b) {
                check_b(b);
                EvalWithBound c = C_const(b, g.tol);
                rec.rows.push_back({std::to_string(b), num(c.value), num(c.abs_err)});
            }
        } else if (*table) {
            rec.command = "table";
            rec.param("which", table_which);
            if (table_which == "cb") {
                rec.columns = {"b", "computed", "abs_err", "published", "delta"};
                for (long b = 1; b <= 10; ++b) {
                    EvalWithBound c = C_const(b, g.tol);
                    const double pub = reference::kCb[b - 1];
                    rec.rows.push_back({std::to_string(b), num(c.value), num(c.abs_err), num(pub), num(c.value - pub)});
                }
            } else if (table_which == "b6-min") {
                std::vector<std::uint64_t> ends(reference::kB6MinN.begin(), reference::kB6MinN.end());
                auto logs = log_product_prefixes(make_surd(6).frac, 0, ends);
                rec.columns = {"N", "P_N", "abs_err", "published", "delta"};
                for (std::size_t i = 0; i < ends.size(); ++i) {
                    EvalWithBound p = logs[i].to_value();
                    const double pub = reference::kB6MinP[i];
                    rec.rows.push_back({std::to_string(ends[i]), num(p.value), num(p.abs_err), num(pub), num(p.value - pub)});
                }
            } else {
                std::vector<std::uint64_t> ends(reference::kB6MaxN.begin(), reference::kB6MaxN.end());
                auto logs = log_product_prefixes(make_surd(6).frac, 0, ends);
                rec.columns = {"N", "P_N", "P_N_over_N", "published", "delta_value", "delta_ratio"};
                bool value_fits = true;
                bool ratio_fits = true;
                for (std::size_t i = 0; i < ends.size(); ++i) {
                    EvalWithBound p = logs[i].to_value();
                    const double ratio = p.value / static_cast<double>(ends[i]);
                    const double pub = reference::kB6MaxValue[i];
                    value_fits = value_fits && std::fabs(p.value - pub) <= 1e-3;
                    ratio_fits = ratio_fits && std::fabs(ratio - pub) <= 1e-3;
                    rec.rows.push_back({std::to_string(ends[i]), num(p.value), num(ratio), num(pub), num(p.value - pub),
                                        num(ratio - pub)});
                }
                rec.value("reading", ratio_fits ? (value_fits ? "both" : "ratio") : (value_fits ? "value" : "neither"));
            }
        } else if (*certify) {
            rec.command = "certify";
            check_b(certify_b, 20);
            rec.param("b", std::to_string(certify_b));
            GrowthVerdict v = growth_verdict(certify_b);
            rec.value("C_b", num(v.C_b.value));
            rec.value("C_b_abs_err", num(v.C_b.abs_err));
            rec.value("route", v.route);
            rec.value("conclusive", flag(v.conclusive));
            rec.value("liminf_positive", flag(v.liminf_positive));
            rec.value("limsup_over_N_finite", flag(v.limsup_over_N_finite));
            rec.columns = {"set", "case", "case_pass", "interval", "lo", "hi", "threshold", "status", "bound",
                           "G_lo", "G_lo_err", "G_hi", "G_hi_err"};
            bool open = !v.conclusive;
            auto add_cert = [&](const std::string& set, const std::string& name, bool pass, const std::string& label,
                                const Certificate& c) {
                if (c.status == CertStatus::Inconclusive) open = true;
                rec.rows.push_back({set, name, flag(pass), label, num(c.lo), num(c.hi), num(c.threshold),
                                    to_string(c.status), num(c.bound), num(c.at_lo.value), num(c.at_lo.abs_err),
                                    num(c.at_hi.value), num(c.at_hi.abs_err)});
            };
            auto add_report = [&](const std::string& set, const CaseReport& rep) {
                for (const auto& c : rep.cases) {
                    if (c.intervals.empty()) {
                        rec.rows.push_back({set, c.name, flag(c.pass), "", "", "", num(c.required), "", num(c.product_lower),
                                            "", "", "", ""});
                        continue;
                    }
                    for (const auto& ic : c.intervals) add_cert(set, c.name, c.pass, ic.label, ic.cert);
                }
            };
            if (v.cases) add_report("generic", *v.cases);
            if (v.below) add_cert("convergent-sums", "G below 0.96", v.below->ok(), "eps", *v.below);
            if (certify_b == 5) {
                CaseReport b5 = certify_case_b5();
                add_report("b5-table", b5);
                rec.value("b5_table_pass", flag(b5.all_pass()));
                if (!b5.all_pass()) open = true;
            }
            if (rec.rows.empty()) rec.columns.clear();
            if (open) code = kExitInconclusive;
        } else if (*ostrowski) {
            rec.command = "ostrowski";
            check_b(ostrowski_b);
            BigInt N = parse_big(ostrowski_N, "-N");
            rec.param("N", N.str());
            rec.param("b", std::to_string(ostrowski_b));
            rec.param("reflected", flag(ostrowski_reflected));
            Decomposition plan = decompose(N, ostrowski_b, ostrowski_reflected, false);
            BigInt cost = N;
            ConvergentTable t = convergents(ostrowski_b, std::max<int>(std::max<int>(plan.top, plan.digits.size()), 1));
            if (ostrowski_reflected) cost = t.q[plan.top] - 1 + (t.q[plan.top] - N - 1);
            const bool evaluate = cost <= g.budget;
            Decomposition d = evaluate ? decompose(N, ostrowski_b, ostrowski_reflected, true) : plan;
            rec.value("digits", join_digits(d.digits));
            std::string terms;
            for (const auto& blk : d.blocks) terms += (terms.empty() ? "" : " + ") + t.q[blk.level].str();
            rec.value("expansion", terms);
            if (ostrowski_reflected) rec.value("q_top", t.q[d.top].str());
            rec.value("evaluated", flag(evaluate));
            if (evaluate) {
                EvalWithBound prod = d.product();
                EvalWithBound direct = sudler_product(ostrowski_b, to_u64(N));
                rec.value("product", num(prod.value));
                rec.value("product_abs_err", num(prod.abs_err));
                rec.value("direct", num(direct.value));
                rec.value("rel_diff", num(std::fabs(prod.value / direct.value - 1.0)));
            }
            rec.columns = {"level", "q", "repeat", "offset", "eps", "inverse", "value", "abs_err"};
            for (const auto& blk : d.blocks)
                rec.rows.push_back({std::to_string(blk.level), t.q[blk.level].str(), std::to_string(blk.repeat),
                                    blk.offset.str(), num(blk.eps), flag(blk.inverse),
                                    evaluate ? num(blk.value.value) : "", evaluate ? num(blk.value.abs_err) : ""});
        } else if (*witness) {
            rec.command = "witness";
            check_b(witness_b);
            rec.param("b", std::to_string(witness_b));
            rec.param("kind", witness_kind);
            rec.param("method", witness_method);
            rec.param("k", std::to_string(witness_k));
            rec.param("budget", std::to_string(g.budget));
            const WitnessKind kind = witness_method == "sums" ? WitnessKind::ConvergentSums : WitnessKind::Doubling;
            WitnessSequence w = witness_kind == "liminf" ? liminf_witness(witness_b, witness_k, g.budget, kind)
                                                          : limsup_witness(witness_b, witness_k, g.budget, kind);
            if (kind == WitnessKind::Doubling) {
                rec.value("eta", num(w.eta));
                std::string ms;
                for (const auto& m : w.m) ms += (ms.empty() ? "" : " ") + m.str();
                rec.value("m", ms);
            }
            rec.value("truncated", flag(w.truncated));
            rec.columns = {"N", "P_N", "abs_err", "P_N_over_N"};
            for (const auto& p : w.points)
                rec.rows.push_back({p.N.str(), num(p.P.value), num(p.P.abs_err), num(p.ratio)});
            if (w.truncated) {
                err << "warning: budget " << g.budget << " stopped the sequence after " << w.points.size()
                    << " terms\n";
                code = kExitBudget;
            }
        }
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBudget;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    if (g.timing) {
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        rec.value("runtime_ms", num(ms));
    }
    emit(rec, fmt, out);
    return code;
}

}  // namespace sudler
