#pragma once

// Pseudomoments of partial sums of the Riemann zeta-function.
//
// By the Montgomery-Vaughan mean value theorem,
//   lim (1/T) int_0^T |sum_{n<=X} n^{-1/2-it}|^{2k} dt = sum_n d_{k,X}(n)^2 / n,
// where d_{k,X}(n) counts ordered factorizations n = l_1...l_k with l_i <= X.
// This module computes both sides and the prediction a_k G_k(log X).

#include "core.hpp"
#include "ehrhart.hpp"
#include "euler.hpp"
#include "parallel.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace pseudomoments::zeta {

inline constexpr double default_tuple_budget = 1e8;
inline constexpr double default_pair_budget = 1e7;

/// Restricted divisor counts. n and d(n) are held in 64 bits; the tuple
/// budget (at most 2^63) bounds both.
struct DivisorProfile {
    int k = 0;
    std::vector<std::uint64_t> bounds;
    std::map<std::uint64_t, std::uint64_t> counts;

    std::uint64_t operator[](std::uint64_t n) const
    {
        const auto it = counts.find(n);
        return it == counts.end() ? 0 : it->second;
    }

    std::uint64_t total() const
    {
        std::uint64_t sum = 0;
        for (const auto& [n, d] : counts) sum += d;
        return sum;
    }
};

namespace detail {

inline double product_of(const std::vector<std::uint64_t>& bounds)
{
    double product = 1;
    for (auto b : bounds) product *= static_cast<double>(b);
    return product;
}

inline void check_budget(double size, double budget, const char* what)
{
    if (size > budget || size > 9.2e18) {
        throw SizeLimitError(std::string(what) + " of " + std::to_string(size) + " exceeds the budget of " +
                             std::to_string(budget));
    }
}

} // namespace detail

/// Profile for per-factor cutoffs X_1..X_k (k = bounds.size()).
inline DivisorProfile divisor_profile(const std::vector<std::uint64_t>& bounds,
                                      double tuple_budget = default_tuple_budget)
{
    if (bounds.empty()) throw std::invalid_argument("at least one cutoff is required");
    for (auto b : bounds) {
        if (b < 1) throw std::invalid_argument("cutoffs must be at least 1");
    }
    detail::check_budget(detail::product_of(bounds), tuple_budget, "tuple count");

    DivisorProfile profile;
    profile.k = static_cast<int>(bounds.size());
    profile.bounds = bounds;

    std::unordered_map<std::uint64_t, std::uint64_t> acc;
    // Depth-first over tuples; the final factor is handled in a tight loop.
    const auto descend = [&](auto&& self, std::size_t depth, std::uint64_t product) -> void {
        if (depth + 1 == bounds.size()) {
            for (std::uint64_t l = 1; l <= bounds[depth]; ++l) ++acc[product * l];
            return;
        }
        for (std::uint64_t l = 1; l <= bounds[depth]; ++l) self(self, depth + 1, product * l);
    };
    descend(descend, 0, 1);
    profile.counts.insert(acc.begin(), acc.end());
    return profile;
}

inline DivisorProfile divisor_profile(int k, std::uint64_t x, double tuple_budget = default_tuple_budget)
{
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    return divisor_profile(std::vector<std::uint64_t>(static_cast<std::size_t>(k), x), tuple_budget);
}

/// sum_n d(n)^2 / n, exactly.
inline Rational mv_pseudomoment(const DivisorProfile& profile)
{
    Rational sum = 0;
    for (const auto& [n, d] : profile.counts) {
        sum += Rational(BigInt(d) * d, BigInt(n));
    }
    return sum;
}

/// sum_n d(n)^2 / n in long double, for profiles whose exact value has an
/// impractically large denominator.
inline double mv_pseudomoment_approx(const DivisorProfile& profile)
{
    // Largest n first: the small terms are accumulated before the large ones.
    long double sum = 0;
    long double carry = 0;
    for (auto it = profile.counts.rbegin(); it != profile.counts.rend(); ++it) {
        const long double d = static_cast<long double>(it->second);
        const long double term = d * d / static_cast<long double>(it->first) - carry;
        const long double next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    return static_cast<double>(sum);
}

/// Direct enumeration of pairs of k-tuples in [1, X]^k with equal products,
/// each contributing 1/(l_1...l_k). Independent of divisor_profile.
inline Rational pair_sum_oracle(int k, std::uint64_t x, double pair_budget = default_pair_budget)
{
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (x < 1) throw std::invalid_argument("cutoff must be at least 1");
    detail::check_budget(std::pow(static_cast<double>(x), 2.0 * k), pair_budget, "pair count");

    const auto kk = static_cast<std::size_t>(k);
    std::vector<std::uint64_t> products;
    std::vector<std::uint64_t> tuple(kk, 1);
    while (true) {
        std::uint64_t product = 1;
        for (auto v : tuple) product *= v;
        products.push_back(product);
        std::size_t pos = 0;
        while (pos < kk && ++tuple[pos] > x) tuple[pos++] = 1;
        if (pos == kk) break;
    }
    Rational sum = 0;
    for (auto a : products) {
        for (auto b : products) {
            if (a == b) sum += Rational(1, a);
        }
    }
    return sum;
}

struct NumericMoment {
    double value = 0;
    double error_estimate = 0;  // |full-step minus half-resolution| trapezoid
    std::uint64_t steps = 0;
    bool under_resolved = false;  // steps < 20 T log(X) / (2 pi)
};

/// Trapezoid approximation of (1/T) int_0^T |sum_{n<=X} n^{-1/2-it}|^{2k} dt.
/// Odd step counts are rounded up so the coarse grid (every other node)
/// covers [0, T] exactly.
inline NumericMoment numeric_moment(int k, std::uint64_t x, double t_max, std::uint64_t steps, unsigned threads = 1)
{
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (x < 1) throw std::invalid_argument("cutoff must be at least 1");
    if (!(t_max > 0)) throw std::invalid_argument("T must be positive");
    if (steps < 2) throw std::invalid_argument("at least two steps are required");
    if (steps % 2 != 0) ++steps;

    std::vector<double> log_n(x);
    std::vector<double> amplitude(x);
    for (std::uint64_t n = 1; n <= x; ++n) {
        log_n[n - 1] = std::log(static_cast<double>(n));
        amplitude[n - 1] = 1.0 / std::sqrt(static_cast<double>(n));
    }
    const double h = t_max / static_cast<double>(steps);
    const auto integrand = [&](double t) {
        double re = 0;
        double im = 0;
        for (std::size_t i = 0; i < log_n.size(); ++i) {
            const double phase = t * log_n[i];
            re += amplitude[i] * std::cos(phase);
            im -= amplitude[i] * std::sin(phase);
        }
        return std::pow(re * re + im * im, static_cast<double>(k));
    };

    struct Partial {
        long double fine = 0;
        long double coarse = 0;
    };
    const std::size_t nodes = static_cast<std::size_t>(steps) + 1;
    const auto partials = run_chunked(nodes, threads, [&](unsigned, std::size_t begin, std::size_t end) {
        Partial part;
        for (std::size_t i = begin; i < end; ++i) {
            const double f = integrand(h * static_cast<double>(i));
            const long double weight = (i == 0 || i + 1 == nodes) ? 0.5L : 1.0L;
            part.fine += weight * f;
            if (i % 2 == 0) part.coarse += weight * f;
        }
        return part;
    });
    long double fine = 0;
    long double coarse = 0;
    for (const auto& p : partials) {
        fine += p.fine;
        coarse += p.coarse;
    }
    // Both sums are averages over [0, T]: fine * h / T, coarse * 2h / T.
    const long double fine_avg = fine / static_cast<long double>(steps);
    const long double coarse_avg = coarse * 2 / static_cast<long double>(steps);

    NumericMoment out;
    out.value = static_cast<double>(fine_avg);
    out.error_estimate = static_cast<double>(std::fabs(fine_avg - coarse_avg));
    out.steps = steps;
    out.under_resolved =
        static_cast<double>(steps) < 20.0 * t_max * std::log(static_cast<double>(x)) / (2.0 * std::numbers::pi);
    return out;
}

struct Prediction {
    double full = 0;          // a_k G_k(log X)
    double leading_only = 0;  // a_k gamma_k (log X)^{k^2}
};

inline Prediction prediction(int k, double x, double a_k, const ehrhart::CountingPolynomial& gpoly)
{
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (!(x >= 1)) throw std::invalid_argument("cutoff must be at least 1");
    const double log_x = std::log(x);
    const double gamma = gpoly.leading_coefficient().convert_to<double>();
    return {a_k * ehrhart::evaluate_real(gpoly, log_x), a_k * gamma * std::pow(log_x, k * k)};
}

struct LadderRow {
    std::uint64_t x = 0;
    double mv = 0;
    std::optional<Rational> mv_exact;  // filled when the profile is small
    double full_prediction = 0;
    double leading_prediction = 0;
    double ratio_full = 0;
    double ratio_leading = 0;
};

inline constexpr std::size_t exact_ladder_limit = 2000;  // max distinct n for an exact column

/// For each X: the MV value, a_k G_k(log X), a_k gamma_k (log X)^{k^2}, and
/// the ratios MV / prediction.
inline std::vector<LadderRow> convergence_ladder(int k, const std::vector<std::uint64_t>& xs, double a_k,
                                                 const ehrhart::CountingPolynomial& gpoly,
                                                 double tuple_budget = default_tuple_budget)
{
    std::vector<LadderRow> rows;
    for (auto x : xs) {
        const DivisorProfile profile = divisor_profile(k, x, tuple_budget);
        LadderRow row;
        row.x = x;
        if (profile.counts.size() <= exact_ladder_limit) {
            row.mv_exact = mv_pseudomoment(profile);
            row.mv = row.mv_exact->convert_to<double>();
        } else {
            row.mv = mv_pseudomoment_approx(profile);
        }
        const Prediction p = prediction(k, static_cast<double>(x), a_k, gpoly);
        row.full_prediction = p.full;
        row.leading_prediction = p.leading_only;
        row.ratio_full = row.mv / p.full;
        row.ratio_leading = row.mv / p.leading_only;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace pseudomoments::zeta
