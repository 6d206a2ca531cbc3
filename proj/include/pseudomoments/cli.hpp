#pragma once

// Command-line front end. Every subcommand produces one JSON record
// {command, value, metadata}; --json prints it, otherwise the
// value is printed in plain text.

#include "counting.hpp"
#include "ehrhart.hpp"
#include "euler.hpp"
#include "genfun.hpp"
#include "rmt.hpp"
#include "zeta.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace pseudomoments::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { ok = 0, failure = 1, usage = 2, budget = 3 };

/// Float rounded to 15 significant digits; non-finite values become null.
inline Json json_float(double x)
{
    if (!std::isfinite(x)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

inline Json json_rational(const Rational& r) { return to_string(r); }
inline Json json_integer(const BigInt& n) { return n.str(); }

inline Json json_complex(rmt::Complex z) { return Json::array({json_float(z.real()), json_float(z.imag())}); }

inline Json json_polynomial(const ehrhart::CountingPolynomial& p)
{
    Json coeffs = Json::array();
    for (const auto& c : p.coefficients()) coeffs.push_back(json_rational(c));
    return coeffs;
}

inline Json json_estimate(const rmt::MomentEstimate& e)
{
    Json out;
    out["mean"] = {{"re", json_float(e.mean.real())}, {"im", json_float(e.mean.imag())}};
    out["stderr"] = json_float(e.std_error);
    out["samples"] = e.samples;
    out["target"] = e.target ? Json(e.target->str()) : Json(nullptr);
    const auto z = e.z_score();
    out["z_score"] = z ? json_float(*z) : Json(nullptr);
    return out;
}

inline Json json_euler(const euler::EulerFactorResult& r)
{
    return {{"value", json_float(r.value)},
            {"prime_limit", r.prime_limit},
            {"j_terms", r.j_terms},
            {"tail_estimate", json_float(r.tail_estimate)}};
}

/// Plain-text rendering: scalars bare, everything else as indented JSON.
inline std::string render_text(const Json& value)
{
    if (value.is_string()) return value.get<std::string>();
    if (value.is_primitive()) return value.dump();
    return value.dump(2);
}

struct GlobalOptions {
    bool json = false;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::optional<double> budget;
    std::string out_path;

    double budget_or(double fallback) const { return budget.value_or(fallback); }
};

namespace detail {

struct Params {
    int k = 1;
    int j = 0;
    int l = 0;
    int n = 1;
    int cap = -1;
    std::uint64_t x = 1;
    std::vector<std::uint64_t> xs;
    std::vector<int> rows;
    std::vector<int> cols;
    std::vector<int> bounds;
    std::vector<std::uint64_t> cutoffs;
    std::vector<int> a;
    std::vector<int> b;
    std::string family;
    double t = 1e5;
    std::uint64_t steps = 2000000;
    std::uint64_t primes = 100000;
    int terms = 64;
    std::uint64_t samples = 100000;
    double z_re = 1.0;
    double z_im = 0.0;
};

struct Leaf {
    CLI::App* app;
    std::function<Json(Json& metadata)> action;
};

// Partitions given on the command line as comma-separated compositions.
inline Partition partition_of(const std::vector<int>& parts) { return Partition(parts); }

inline counting::MatrixCountSpec brute_spec(const Params& p)
{
    using namespace counting;
    if (p.family == "magic") return magic_spec(p.k, p.j);
    if (p.family == "pseudomagic") return pseudomagic_spec(p.k, p.j);
    if (p.family == "pseudomagic-multi") return pseudomagic_multi_spec(p.bounds);
    if (p.family == "sym-even") return symmetric_even_spec(p.k, p.j);
    if (p.family == "sym-even-bounded") return symmetric_even_bounded_spec(p.k, p.j);
    if (p.family == "contingency") return contingency_spec(partition_of(p.rows), partition_of(p.cols));
    throw std::invalid_argument("unknown family '" + p.family + "'");
}

inline ehrhart::CountingPolynomial family_polynomial(const std::string& family, int k)
{
    if (family == "magic") return ehrhart::magic_polynomial(k);
    if (family == "pseudomagic") return ehrhart::pseudomagic_polynomial(k);
    throw std::invalid_argument("family must be 'magic' or 'pseudomagic'");
}

inline std::vector<std::uint64_t> cutoffs_of(const Params& p)
{
    if (!p.cutoffs.empty()) return p.cutoffs;
    if (p.k < 1) throw std::invalid_argument("k must be at least 1");
    return std::vector<std::uint64_t>(static_cast<std::size_t>(p.k), p.x);
}

} // namespace detail

/// Runs one invocation; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    using detail::Leaf;
    CLI::App app{"Exact counts, Ehrhart polynomials, zeta pseudomoments, Euler factors and Haar-unitary moments",
                 "pseudomoments"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    detail::Params p;
    app.add_flag("--json", global.json, "Print the full JSON record");
    app.add_option("--seed", global.seed, "Random seed for Monte Carlo");
    app.add_option("--threads", global.threads, "Worker threads for Monte Carlo and quadrature")
        ->check(CLI::PositiveNumber);
    app.add_option("--budget", global.budget, "Size cap for tuples, series terms, grids and pairs")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", global.out_path, "Also write the JSON record to this file");

    std::vector<Leaf> leaves;
    const auto group = [&](const std::string& name, const std::string& help) {
        CLI::App* g = app.add_subcommand(name, help);
        g->require_subcommand(1);
        g->fallthrough();
        return g;
    };
    const auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                          std::function<Json(Json&)> action) {
        CLI::App* sub = parent->add_subcommand(name, help);
        sub->fallthrough();
        leaves.push_back({sub, std::move(action)});
        return sub;
    };
    const auto opt_k = [&](CLI::App* s) { s->add_option("--k", p.k, "Matrix size / moment order")->required(); };
    // Helpers called from leaf actions must outlive the parse below.
    const auto profile_of = [&](Json& meta) {
        const double b = global.budget_or(zeta::default_tuple_budget);
        meta["tuple_budget"] = json_float(b);
        return zeta::divisor_profile(detail::cutoffs_of(p), b);
    };
    const auto mc_meta = [&](Json& meta) {
        meta["seed"] = global.seed;
        meta["threads"] = global.threads;
    };

    // count
    CLI::App* count = group("count", "Exact matrix counts");
    {
        auto* s = leaf(count, "contingency", "N_{mu nu}", [&](Json&) {
            return json_integer(
                counting::count_contingency(detail::partition_of(p.rows), detail::partition_of(p.cols)));
        });
        s->add_option("--rows", p.rows, "Row sums, comma separated")->delimiter(',')->required();
        s->add_option("--cols", p.cols, "Column sums, comma separated")->delimiter(',')->required();

        s = leaf(count, "magic", "H_k(j)", [&](Json&) { return json_integer(counting::count_magic(p.k, p.j)); });
        opt_k(s);
        s->add_option("--j", p.j)->required();

        s = leaf(count, "pseudomagic", "G_k(l)",
                 [&](Json&) { return json_integer(counting::count_pseudomagic(p.k, p.l)); });
        opt_k(s);
        s->add_option("--l", p.l)->required();

        s = leaf(count, "pseudomagic-multi", "G_k(l_1, ..., l_k)",
                 [&](Json&) { return json_integer(counting::count_pseudomagic_multi(p.bounds)); });
        s->add_option("--bounds", p.bounds)->delimiter(',')->required();

        s = leaf(count, "sym-even", "S^sp_k(j)",
                 [&](Json&) { return json_integer(counting::count_symmetric_even(p.k, p.j)); });
        opt_k(s);
        s->add_option("--j", p.j)->required();

        s = leaf(count, "sym-even-bounded", "F_k(l)",
                 [&](Json&) { return json_integer(counting::count_symmetric_even_bounded(p.k, p.l)); });
        opt_k(s);
        s->add_option("--l", p.l)->required();

        s = leaf(count, "brute", "Entry-by-entry enumeration oracle", [&](Json& meta) {
            const double cap = global.budget_or(counting::default_brute_force_cap);
            meta["explosion_cap"] = json_float(cap);
            return json_integer(counting::brute_force_count(detail::brute_spec(p), cap));
        });
        s->add_option("--family", p.family)
            ->required()
            ->check(CLI::IsMember(
                {"magic", "pseudomagic", "pseudomagic-multi", "sym-even", "sym-even-bounded", "contingency"}));
        s->add_option("--k", p.k);
        s->add_option("--j,--l", p.j, "Line sum or bound");
        s->add_option("--bounds", p.bounds)->delimiter(',');
        s->add_option("--rows", p.rows)->delimiter(',');
        s->add_option("--cols", p.cols)->delimiter(',');
    }

    // ehrhart
    CLI::App* ehr = group("ehrhart", "Counting polynomials, h-vectors and volumes");
    {
        auto* s = leaf(ehr, "poly", "Interpolated counting polynomial (constant term first)", [&](Json&) -> Json {
            if (p.family == "sym-even-bounded") {
                const auto q = ehrhart::symmetric_even_bounded_quasi_polynomial(p.k);
                return {{"even", json_polynomial(q.even)},
                        {"odd", json_polynomial(q.odd)},
                        {"residues_coincide", q.residues_coincide()},
                        {"leading_coefficients_agree", q.leading_coefficients_agree()}};
            }
            return json_polynomial(detail::family_polynomial(p.family, p.k));
        });
        s->add_option("--family", p.family)->required()->check(CLI::IsMember({"magic", "pseudomagic", "sym-even-bounded"}));
        opt_k(s);

        s = leaf(ehr, "hvector", "Ehrhart-series numerator", [&](Json&) {
            Json h = Json::array();
            for (const auto& e : ehrhart::h_vector(detail::family_polynomial(p.family, p.k)).trimmed()) {
                h.push_back(e.str());
            }
            return h;
        });
        s->add_option("--family", p.family)->required()->check(CLI::IsMember({"magic", "pseudomagic"}));
        opt_k(s);

        s = leaf(ehr, "zeros", "H_k(-1) = ... = H_k(-k+1) = 0",
                 [&](Json&) { return Json(ehrhart::check_trivial_zeros(ehrhart::magic_polynomial(p.k), p.k)); });
        opt_k(s);

        s = leaf(ehr, "reciprocity", "H_k(-k-j) = (-1)^{k-1} H_k(j)",
                 [&](Json&) { return Json(ehrhart::check_reciprocity(ehrhart::magic_polynomial(p.k), p.k)); });
        opt_k(s);

        s = leaf(ehr, "volume", "vol(P_k) (pseudomagic) or vol(B_k) (magic)", [&](Json& meta) {
            if (p.family == "pseudomagic") {
                meta["polytope"] = "substochastic";
                return json_rational(ehrhart::substochastic_volume(p.k));
            }
            meta["polytope"] = "birkhoff";
            meta["normalization"] = "k^(k-1) * leading coefficient of H_k";
            return json_rational(ehrhart::birkhoff_volume(p.k));
        });
        s->add_option("--family", p.family)->required()->check(CLI::IsMember({"magic", "pseudomagic"}));
        opt_k(s);
    }

    // oracle
    CLI::App* oracle = group("oracle", "Coefficient-extraction oracles");
    {
        auto* s = leaf(oracle, "contour", "Coefficient form of the contour integral for G_k(l)", [&](Json& meta) {
            const double b = global.budget_or(genfun::default_term_budget);
            meta["term_budget"] = json_float(b);
            return json_integer(genfun::contour_coefficient(p.k, p.l, b));
        });
        opt_k(s);
        s->add_option("--l", p.l)->required();

        s = leaf(oracle, "expansion", "Coefficient of w^alpha z^beta in 1/prod(1 - w_i z_j)", [&](Json& meta) {
            const Partition alpha(p.rows);
            const Partition beta(p.cols);
            int cap = p.cap;
            if (cap < 0) {
                cap = 0;
                for (const auto* q : {&alpha, &beta}) {
                    if (!q->empty()) cap = std::max(cap, q->parts().front());
                }
            }
            meta["cap"] = cap;
            return json_integer(genfun::expansion_count(alpha, beta, cap, global.budget_or(genfun::default_term_budget)));
        });
        s->add_option("--alpha", p.rows)->delimiter(',')->required();
        s->add_option("--beta", p.cols)->delimiter(',')->required();
        s->add_option("--cap", p.cap, "Truncation cap (default: largest part)");
    }

    // zeta
    CLI::App* zeta_cmd = group("zeta", "Pseudomoments of zeta partial sums");
    {
        const auto cutoff_opts = [&](CLI::App* s) {
            s->add_option("--k", p.k, "Number of factors");
            s->add_option("--x", p.x, "Common cutoff X");
            s->add_option("--bounds", p.cutoffs, "Per-factor cutoffs X_1..X_k (overrides --k/--x)")->delimiter(',');
        };

        auto* s = leaf(zeta_cmd, "profile", "d_{k,X}(n) for every n with d > 0", [&](Json& meta) {
            const auto profile = profile_of(meta);
            Json counts = Json::object();
            for (const auto& [n, d] : profile.counts) counts[std::to_string(n)] = std::to_string(d);
            return counts;
        });
        cutoff_opts(s);

        s = leaf(zeta_cmd, "mv", "Montgomery-Vaughan limit sum d(n)^2/n, exact",
                 [&](Json& meta) { return json_rational(zeta::mv_pseudomoment(profile_of(meta))); });
        cutoff_opts(s);

        s = leaf(zeta_cmd, "pairs", "Equal-product pair enumeration, exact", [&](Json& meta) {
            const double b = global.budget_or(zeta::default_pair_budget);
            meta["pair_budget"] = json_float(b);
            return json_rational(zeta::pair_sum_oracle(p.k, p.x, b));
        });
        opt_k(s);
        s->add_option("--x", p.x)->required();

        s = leaf(zeta_cmd, "integrate", "Trapezoid time average of |sum n^{-1/2-it}|^{2k}", [&](Json& meta) -> Json {
            const auto m = zeta::numeric_moment(p.k, p.x, p.t, p.steps, global.threads);
            if (m.under_resolved) {
                err << "warning: steps < 20 T log(X) / (2 pi); the integrand is under-resolved\n";
            }
            meta["threads"] = global.threads;
            return {{"value", json_float(m.value)},
                    {"error_estimate", json_float(m.error_estimate)},
                    {"steps", m.steps},
                    {"under_resolved", m.under_resolved}};
        });
        opt_k(s);
        s->add_option("--x", p.x)->required();
        s->add_option("--t", p.t, "Integration horizon T");
        s->add_option("--steps", p.steps, "Trapezoid intervals");

        s = leaf(zeta_cmd, "predict", "a_k G_k(log X) and a_k gamma_k (log X)^{k^2}", [&](Json& meta) -> Json {
            const auto a = euler::arithmetic_factor_a(p.k, p.primes, p.terms);
            const auto g = ehrhart::pseudomagic_polynomial(p.k);
            const auto pred = zeta::prediction(p.k, static_cast<double>(p.x), a.value, g);
            meta["a_k"] = json_euler(a);
            meta["gamma_k"] = json_rational(g.leading_coefficient());
            return {{"full", json_float(pred.full)}, {"leading_only", json_float(pred.leading_only)}};
        });
        opt_k(s);
        s->add_option("--x", p.x)->required();
        s->add_option("--primes", p.primes, "Prime limit for a_k");
        s->add_option("--terms", p.terms, "Local-series terms for a_k");

        s = leaf(zeta_cmd, "ladder", "Exact MV value against the prediction for several X", [&](Json& meta) {
            const auto a = euler::arithmetic_factor_a(p.k, p.primes, p.terms);
            const auto g = ehrhart::pseudomagic_polynomial(p.k);
            meta["a_k"] = json_euler(a);
            meta["gamma_k"] = json_rational(g.leading_coefficient());
            Json table = Json::array();
            for (const auto& row :
                 zeta::convergence_ladder(p.k, p.xs, a.value, g, global.budget_or(zeta::default_tuple_budget))) {
                table.push_back({{"x", row.x},
                                 {"mv", json_float(row.mv)},
                                 {"mv_exact", row.mv_exact ? json_rational(*row.mv_exact) : Json(nullptr)},
                                 {"prediction", json_float(row.full_prediction)},
                                 {"leading_prediction", json_float(row.leading_prediction)},
                                 {"ratio", json_float(row.ratio_full)},
                                 {"ratio_leading", json_float(row.ratio_leading)}});
            }
            return table;
        });
        opt_k(s);
        s->add_option("--xs", p.xs, "Cutoffs, comma separated")->delimiter(',')->required();
        s->add_option("--primes", p.primes, "Prime limit for a_k");
        s->add_option("--terms", p.terms, "Local-series terms for a_k");
    }

    // euler
    CLI::App* eul = group("euler", "Arithmetic factors as truncated Euler products");
    {
        auto* s = leaf(eul, "a", "a_k", [&](Json&) { return json_euler(euler::arithmetic_factor_a(p.k, p.primes, p.terms)); });
        opt_k(s);
        s->add_option("--primes", p.primes, "Largest prime included");
        s->add_option("--terms", p.terms, "Local-series truncation depth");

        s = leaf(eul, "b", "b_k", [&](Json&) { return json_euler(euler::arithmetic_factor_b(p.k, p.primes)); });
        opt_k(s);
        s->add_option("--primes", p.primes, "Largest prime included");
    }

    // rmt
    CLI::App* rmt_cmd = group("rmt", "Haar-random unitary matrices");
    {
        const auto mc_opts = [&](CLI::App* s) {
            s->add_option("--n", p.n, "Matrix dimension N")->required();
            s->add_option("--samples", p.samples, "Monte Carlo samples");
        };

        auto* s = leaf(rmt_cmd, "sample", "One Haar unitary, rows of [re, im]", [&](Json& meta) {
            meta["seed"] = global.seed;
            const auto m = rmt::haar_unitary(p.n, global.seed);
            Json rows = Json::array();
            for (Eigen::Index r = 0; r < m.entries().rows(); ++r) {
                Json row = Json::array();
                for (Eigen::Index c = 0; c < m.entries().cols(); ++c) row.push_back(json_complex(m.entries()(r, c)));
                rows.push_back(std::move(row));
            }
            return rows;
        });
        s->add_option("--n", p.n)->required();

        s = leaf(rmt_cmd, "secular", "Sc_0..Sc_N of one Haar unitary", [&](Json& meta) {
            meta["seed"] = global.seed;
            Json sc = Json::array();
            for (const auto& c : rmt::secular_coefficients(rmt::haar_unitary(p.n, global.seed)).coefficients) {
                sc.push_back(json_complex(c));
            }
            return sc;
        });
        s->add_option("--n", p.n)->required();

        s = leaf(rmt_cmd, "moment", "E|Sc_j|^{2k} against H_k(j)", [&](Json& meta) {
            mc_meta(meta);
            return json_estimate(rmt::secular_abs_moment_mc(p.j, p.k, p.n, p.samples, global.seed, global.threads));
        });
        s->add_option("--j", p.j)->required();
        opt_k(s);
        mc_opts(s);

        s = leaf(rmt_cmd, "mixed", "E prod Sc_j^{a_j} conj(Sc_j)^{b_j} against N_{mu nu}", [&](Json& meta) {
            mc_meta(meta);
            return json_estimate(rmt::mixed_moment_mc(p.a, p.b, p.n, p.samples, global.seed, global.threads));
        });
        s->add_option("--a", p.a)->delimiter(',')->required();
        s->add_option("--b", p.b)->delimiter(',')->required();
        mc_opts(s);

        s = leaf(rmt_cmd, "truncated", "E|P_{M,l}(z)|^{2k} against G_k(l)", [&](Json& meta) {
            mc_meta(meta);
            meta["z"] = json_complex({p.z_re, p.z_im});
            return json_estimate(rmt::truncated_poly_moment_mc(p.l, p.k, p.n, {p.z_re, p.z_im}, p.samples, global.seed,
                                                               global.threads));
        });
        s->add_option("--l", p.l)->required();
        opt_k(s);
        mc_opts(s);
        s->add_option("--z-re", p.z_re, "Real part of z (|z| = 1)");
        s->add_option("--z-im", p.z_im, "Imaginary part of z");

        s = leaf(rmt_cmd, "exact", "prod_j Gamma(j)Gamma(j+2k)/Gamma(j+k)^2",
                 [&](Json&) { return json_rational(rmt::full_poly_moment_exact(p.n, p.k)); });
        s->add_option("--n", p.n)->required();
        opt_k(s);

        s = leaf(rmt_cmd, "gfactor", "g_k = prod_{j<k} j!/(j+k)!",
                 [&](Json&) { return json_rational(rmt::g_factor(p.k)); });
        opt_k(s);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        for (const Leaf& l : leaves) {
            if (l.app->parsed()) {
                err << l.app->help();
                return usage;
            }
        }
        err << "run with --help for usage\n";
        return usage;
    }

    const Leaf* chosen = nullptr;
    for (const Leaf& l : leaves) {
        if (l.app->parsed()) chosen = &l;
    }
    if (chosen == nullptr) {
        err << "error: no subcommand given\n";
        return usage;
    }

    Json record;
    std::string command;
    for (const std::string& a : args) command += (command.empty() ? "" : " ") + a;
    record["command"] = command;
    Json metadata = Json::object();
    try {
        record["value"] = chosen->action(metadata);
    } catch (const SizeLimitError& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return budget;
    } catch (const ConsistencyError& e) {
        err << "internal consistency error: " << e.what() << "\n";
        return failure;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return usage;
    } catch (const std::domain_error& e) {
        err << "invalid input: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }
    record["metadata"] = metadata;

    const std::string json_text = record.dump();
    if (!global.out_path.empty()) {
        std::ofstream file(global.out_path);
        if (!file) {
            err << "error: cannot open " << global.out_path << " for writing\n";
            return failure;
        }
        file << json_text << "\n";
    }
    out << (global.json ? json_text : render_text(record["value"])) << "\n";
    return ok;
}

} // namespace pseudomoments::cli
