#pragma once

// Truncated multivariate power series over big integers, used to evaluate
// the contour-integral expression for G_k(l) by coefficient extraction.
//
// The integrand 1 / [prod_{i,j} (1 - w_i z_j) prod_i (1 - w_i) prod_j (1 - z_j)]
// is a product of geometric series, so its contour integral against
// prod w_i^{-l-1} z_j^{-l-1} equals the coefficient of prod w_i^l z_j^l.

#include "core.hpp"
#include "partition.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pseudomoments::genfun {

inline constexpr double default_term_budget = 4e6;

using Exponent = std::vector<int>;

class TruncatedMultiSeries {
public:
    /// The constant series 1, truncated at caps[v] in variable v.
    explicit TruncatedMultiSeries(Exponent caps) : num_vars_(caps.size()), caps_(std::move(caps))
    {
        for (int c : caps_) {
            if (c < 0) throw std::invalid_argument("degree caps must be nonnegative");
        }
        terms_.emplace(Exponent(num_vars_, 0), BigInt(1));
    }

    TruncatedMultiSeries(std::size_t num_vars, int degree_cap) : TruncatedMultiSeries(Exponent(num_vars, degree_cap)) {}

    std::size_t num_vars() const noexcept { return num_vars_; }
    const Exponent& degree_caps() const noexcept { return caps_; }
    const std::map<Exponent, BigInt>& terms() const noexcept { return terms_; }

    BigInt coefficient(const Exponent& e) const
    {
        if (e.size() != num_vars_) throw ArityError("exponent has the wrong number of variables");
        const auto it = terms_.find(e);
        return it == terms_.end() ? BigInt(0) : it->second;
    }

    bool representable(const Exponent& e) const
    {
        if (e.size() != num_vars_) return false;
        for (std::size_t v = 0; v < num_vars_; ++v) {
            if (e[v] < 0 || e[v] > caps_[v]) return false;
        }
        return true;
    }

    /// Multiplies by 1 / (1 - m) for the monomial m with exponent `step`,
    /// truncating each variable at the cap.
    void multiply_geometric(const Exponent& step)
    {
        if (step.size() != num_vars_) throw ArityError("monomial has the wrong number of variables");
        bool nonzero = false;
        for (int s : step) {
            if (s < 0) throw std::invalid_argument("monomial exponents must be nonnegative");
            nonzero = nonzero || s > 0;
        }
        if (!nonzero) throw std::invalid_argument("1/(1 - 1) is not a power series");

        std::map<Exponent, BigInt> out;
        for (const auto& [base, coeff] : terms_) {
            Exponent e = base;
            while (representable(e)) {
                out[e] += coeff;
                for (std::size_t v = 0; v < num_vars_; ++v) e[v] += step[v];
            }
        }
        terms_ = std::move(out);
    }

private:
    std::size_t num_vars_;
    Exponent caps_;
    std::map<Exponent, BigInt> terms_;
};

inline void check_term_budget(const Exponent& caps, double budget)
{
    double terms = 1;
    for (int c : caps) terms *= static_cast<double>(c) + 1.0;
    if (terms > budget) {
        throw SizeLimitError("series with up to " + std::to_string(terms) + " terms exceeds the budget of " +
                             std::to_string(budget));
    }
}

/// Series of 1/prod_{i,j}(1 - w_i z_j) in `rows` w-variables followed by
/// `cols` z-variables.
inline TruncatedMultiSeries cross_series(std::size_t rows, std::size_t cols, const Exponent& caps)
{
    TruncatedMultiSeries series(caps);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            Exponent step(rows + cols, 0);
            step[i] = 1;
            step[rows + j] = 1;
            series.multiply_geometric(step);
        }
    }
    return series;
}

/// 1 / [prod_{i,j}(1 - w_i z_j) prod_i (1 - w_i) prod_j (1 - z_j)], variables
/// ordered w_1..w_k, z_1..z_k.
inline TruncatedMultiSeries master_series(int k, int cap, double term_budget = default_term_budget)
{
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    const auto n = static_cast<std::size_t>(k);
    if (cap < 0) throw std::invalid_argument("degree cap must be nonnegative");
    const Exponent caps(2 * n, cap);
    check_term_budget(caps, term_budget);
    TruncatedMultiSeries series = cross_series(n, n, caps);
    for (std::size_t v = 0; v < 2 * n; ++v) {
        Exponent step(2 * n, 0);
        step[v] = 1;
        series.multiply_geometric(step);
    }
    return series;
}

/// Coefficient of prod w_i^l z_j^l in the master series; equals G_k(l).
inline BigInt contour_coefficient(int k, int l, double term_budget = default_term_budget)
{
    if (l < 0) throw std::invalid_argument("l must be nonnegative");
    const TruncatedMultiSeries series = master_series(k, l, term_budget);
    return series.coefficient(Exponent(2 * static_cast<std::size_t>(k), l));
}

/// Coefficient of w^alpha z^beta in 1/prod_{i,j}(1 - w_i z_j), which counts
/// matrices with row sums alpha and column sums beta.
inline BigInt expansion_count(const Partition& alpha, const Partition& beta, int cap,
                              double term_budget = default_term_budget)
{
    for (const auto* p : {&alpha, &beta}) {
        for (int part : p->parts()) {
            if (part > cap) {
                throw ArityError("part " + std::to_string(part) + " exceeds the truncation cap " + std::to_string(cap));
            }
        }
    }
    if (alpha.empty() || beta.empty()) {
        return (alpha.weight() == 0 && beta.weight() == 0) ? 1 : 0;
    }
    // Only the target monomial is needed, so each variable is truncated at
    // its own exponent.
    Exponent e = alpha.parts();
    e.insert(e.end(), beta.parts().begin(), beta.parts().end());
    check_term_budget(e, term_budget);
    const TruncatedMultiSeries series = cross_series(alpha.length(), beta.length(), e);
    return series.coefficient(e);
}

} // namespace pseudomoments::genfun
