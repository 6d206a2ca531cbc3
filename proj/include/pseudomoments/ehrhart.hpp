#pragma once

// Exact-rational reconstruction of the counting functions H_k, G_k and F_k,
// with Stanley's trivial zeros and reciprocity, h-vectors, and the volumes
// of the Birkhoff polytope B_k and the substochastic polytope P_k.

#include "core.hpp"
#include "counting.hpp"

#include <cstddef>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pseudomoments::ehrhart {

/// Dense polynomial with exact rational coefficients, constant term first.
class CountingPolynomial {
public:
    CountingPolynomial() = default;

    explicit CountingPolynomial(std::vector<Rational> coefficients) : coefficients_(std::move(coefficients))
    {
        while (!coefficients_.empty() && coefficients_.back() == 0) {
            coefficients_.pop_back();
        }
    }

    const std::vector<Rational>& coefficients() const noexcept { return coefficients_; }
    bool is_zero() const noexcept { return coefficients_.empty(); }

    /// Degree; -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }

    Rational leading_coefficient() const { return is_zero() ? Rational(0) : coefficients_.back(); }

    Rational operator()(const Rational& x) const
    {
        Rational acc = 0;
        for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
            acc = acc * x + *it;
        }
        return acc;
    }

    Rational operator()(long long x) const { return (*this)(Rational(x)); }

    friend bool operator==(const CountingPolynomial&, const CountingPolynomial&) = default;

private:
    std::vector<Rational> coefficients_;
};

/// Floating-point Horner evaluation, e.g. G_k(log X).
inline double evaluate_real(const CountingPolynomial& p, double x)
{
    long double acc = 0;
    const auto& c = p.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + static_cast<long double>(it->convert_to<long double>());
    }
    return static_cast<double>(acc);
}

/// Newton divided differences over the rationals. On consecutive integer
/// nodes this is the forward-difference form. Uses the first degree+1
/// points; extra points are ignored.
inline CountingPolynomial interpolate(const std::vector<std::pair<long long, BigInt>>& values, int degree)
{
    if (degree < 0) {
        throw std::invalid_argument("degree bound must be nonnegative");
    }
    const auto n = static_cast<std::size_t>(degree) + 1;
    if (values.size() < n) {
        throw ArityError("interpolation of degree " + std::to_string(degree) + " needs " + std::to_string(n) +
                         " points, got " + std::to_string(values.size()));
    }
    std::set<long long> seen;
    for (std::size_t i = 0; i < n; ++i) {
        if (!seen.insert(values[i].first).second) {
            throw ArityError("interpolation nodes must be distinct");
        }
    }

    std::vector<Rational> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = Rational(values[i].second);
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = n - 1; i >= level; --i) {
            diff[i] = (diff[i] - diff[i - 1]) / Rational(values[i].first - values[i - level].first);
        }
    }

    // Horner on the Newton basis: p = d0 + (x - x0)(d1 + (x - x1)(d2 + ...)).
    std::vector<Rational> coeffs{diff[n - 1]};
    for (std::size_t i = n - 1; i-- > 0;) {
        const Rational node(values[i].first);
        std::vector<Rational> next(coeffs.size() + 1, Rational(0));
        for (std::size_t d = 0; d < coeffs.size(); ++d) {
            next[d + 1] += coeffs[d];
            next[d] -= node * coeffs[d];
        }
        next[0] += diff[i];
        coeffs = std::move(next);
    }
    return CountingPolynomial(std::move(coeffs));
}

/// Interpolates count(0..degree) and checks the result against two further
/// fresh counts; a mismatch means the counter is wrong, since polynomiality
/// is a theorem for every family used here.
inline CountingPolynomial interpolate_family(const std::function<BigInt(int)>& count, int degree, int stride = 1,
                                             int offset = 0)
{
    std::vector<std::pair<long long, BigInt>> points;
    for (int i = 0; i <= degree; ++i) {
        const int x = offset + stride * i;
        points.emplace_back(x, count(x));
    }
    CountingPolynomial p = interpolate(points, degree);
    for (int extra = 1; extra <= 2; ++extra) {
        const int x = offset + stride * (degree + extra);
        const BigInt fresh = count(x);
        if (p(x) != Rational(fresh)) {
            throw ConsistencyError("interpolated polynomial predicts " + to_string(p(x)) + " at " + std::to_string(x) +
                                   " but the counter returned " + fresh.str());
        }
    }
    return p;
}

/// H_k as a polynomial of degree (k-1)^2.
inline CountingPolynomial magic_polynomial(int k)
{
    counting::require_positive_k(k);
    return interpolate_family([k](int j) { return counting::count_magic(k, j); }, (k - 1) * (k - 1));
}

/// G_k as a polynomial of degree k^2.
inline CountingPolynomial pseudomagic_polynomial(int k)
{
    counting::require_positive_k(k);
    return interpolate_family([k](int l) { return counting::count_pseudomagic(k, l); }, k * k);
}

/// F_k split by the parity of l. Each residue class is reconstructed
/// separately as a polynomial in l of degree at most k(k+1)/2.
struct QuasiPolynomial {
    CountingPolynomial even;
    CountingPolynomial odd;

    bool residues_coincide() const { return even == odd; }
    bool leading_coefficients_agree() const
    {
        return even.degree() == odd.degree() && even.leading_coefficient() == odd.leading_coefficient();
    }
    Rational operator()(long long l) const { return (l % 2 == 0) ? even(l) : odd(l); }
};

inline QuasiPolynomial symmetric_even_bounded_quasi_polynomial(int k)
{
    counting::require_positive_k(k);
    const int degree = k * (k + 1) / 2;
    const auto count = [k](int l) { return counting::count_symmetric_even_bounded(k, l); };
    return {interpolate_family(count, degree, 2, 0), interpolate_family(count, degree, 2, 1)};
}

/// p(-1) = ... = p(-k+1) = 0.
inline bool check_trivial_zeros(const CountingPolynomial& p, int k)
{
    for (int j = 1; j <= k - 1; ++j) {
        if (p(-j) != 0) return false;
    }
    return true;
}

/// p(-k-j) == (-1)^{k-1} p(j) as a polynomial identity, tested at deg(p)+1
/// points, which suffices since both sides have degree at most deg(p).
inline bool check_reciprocity(const CountingPolynomial& p, int k)
{
    const int sign = (k - 1) % 2 == 0 ? 1 : -1;
    const int points = std::max(p.degree(), 0) + 1;
    for (int j = 0; j < points; ++j) {
        if (p(-k - j) != sign * p(j)) return false;
    }
    return true;
}

/// Numerator coefficients of the Ehrhart series sum_j p(j) x^j = h(x) / (1-x)^{deg+1}.
class HVector {
public:
    explicit HVector(std::vector<BigInt> entries) : entries_(std::move(entries)) {}

    /// All deg(p)+1 entries, including trailing zeros.
    const std::vector<BigInt>& entries() const noexcept { return entries_; }

    /// Entries up to the last nonzero one.
    std::vector<BigInt> trimmed() const
    {
        std::vector<BigInt> out = entries_;
        while (!out.empty() && out.back() == 0) out.pop_back();
        return out;
    }

    bool palindromic() const
    {
        const auto t = trimmed();
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] != t[t.size() - 1 - i]) return false;
        }
        return true;
    }

private:
    std::vector<BigInt> entries_;
};

inline HVector h_vector(const CountingPolynomial& p)
{
    const int d = p.degree();
    if (d < 0) {
        return HVector({});
    }
    std::vector<BigInt> h;
    for (int i = 0; i <= d; ++i) {
        Rational acc = 0;
        for (int m = 0; m <= i; ++m) {
            const Rational term = Rational(binomial(d + 1, m)) * p(i - m);
            acc += (m % 2 == 0) ? term : -term;
        }
        if (boost::multiprecision::denominator(acc) != 1) {
            throw std::domain_error("h-vector entry " + std::to_string(i) + " is " + to_string(acc) +
                                    ", not an integer; the input is not an Ehrhart-type polynomial");
        }
        h.push_back(boost::multiprecision::numerator(acc));
    }
    return HVector(std::move(h));
}

/// vol(P_k): leading coefficient of G_k.
inline Rational substochastic_volume(int k) { return pseudomagic_polynomial(k).leading_coefficient(); }

/// vol(B_k) = k^{k-1} times the leading coefficient of H_k (relative volume
/// normalization).
inline Rational birkhoff_volume(int k)
{
    const Rational lead = magic_polynomial(k).leading_coefficient();
    BigInt scale = 1;
    for (int i = 0; i < k - 1; ++i) scale *= k;
    return lead * Rational(scale);
}

} // namespace pseudomoments::ehrhart
