#pragma once

// Truncated Euler products for the arithmetic factors a_k and b_k.
//
//   a_k = prod_p (1 - 1/p)^{k^2} sum_{j>=0} d_k(p^j)^2 / p^j
//   b_k = prod_p (1 - 1/p)^{k(k+1)/2} / (1 + 1/p)
//               * [ ((1 - p^{-1/2})^{-k} + (1 + p^{-1/2})^{-k}) / 2 + 1/p ]
//
// Products are accumulated in the log domain in long double.

#include "core.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pseudomoments::euler {

struct EulerFactorResult {
    int k = 0;
    std::uint64_t prime_limit = 0;
    int j_terms = 0;  // 0 when the local factor is in closed form
    double value = 0;
    double tail_estimate = 0;  // heuristic bound on |log(value) - log(true value)|
};

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit)
{
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
    }
    return primes;
}

/// d_k(p^j) = C(j+k-1, k-1), the ordered factorizations of p^j into k factors.
inline BigInt dk_prime_power(int k, int j)
{
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (j < 0) throw std::invalid_argument("j must be nonnegative");
    return binomial(j + k - 1, k - 1);
}

namespace detail {

inline void check_args(int k, std::uint64_t prime_limit)
{
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (prime_limit < 2) throw std::invalid_argument("prime_limit must be at least 2");
}

// Second-order behaviour of log(local factor) is -c/p^2, and
// sum_{p > P} 1/p^2 < 1/P; c is floored at 1 so the estimate never vanishes.
inline double prime_tail(double c, std::uint64_t prime_limit)
{
    return std::max(1.0, c) / static_cast<double>(prime_limit);
}

} // namespace detail

inline EulerFactorResult arithmetic_factor_a(int k, std::uint64_t prime_limit, int j_terms)
{
    detail::check_args(k, prime_limit);
    if (j_terms < 1) throw std::invalid_argument("j_terms must be at least 1");

    const long double k2 = static_cast<long double>(k) * k;
    long double log_value = 0;
    long double local_tails = 0;
    for (std::uint64_t p : primes_up_to(prime_limit)) {
        const long double x = 1.0L / static_cast<long double>(p);
        // d_k(p^j)^2 x^j, advanced by the ratio ((j+k)/(j+1))^2 x.
        long double term = 1;
        long double sum = 1;
        for (int j = 0; j < j_terms; ++j) {
            const long double r = static_cast<long double>(j + k) / (j + 1);
            term *= r * r * x;
            sum += term;
        }
        // The term ratio decreases in j, so the ratio at j_terms bounds the
        // rest of the series geometrically.
        const long double r = static_cast<long double>(j_terms + k) / (j_terms + 1);
        const long double ratio = r * r * x;
        long double tail = std::numeric_limits<long double>::infinity();
        if (ratio < 1) {
            tail = term * ratio / (1 - ratio);
            sum += tail;
        }
        log_value += k2 * std::log1p(-x) + std::log(sum);
        local_tails += tail / sum;
    }

    const double c = static_cast<double>(k2 * (k - 1) * (k - 1) / 4);
    EulerFactorResult result;
    result.k = k;
    result.prime_limit = prime_limit;
    result.j_terms = j_terms;
    result.value = static_cast<double>(std::exp(log_value));
    result.tail_estimate = detail::prime_tail(c, prime_limit) + static_cast<double>(local_tails);
    return result;
}

/// Local factor of b_k at p, exactly as written in the Euler product.
inline long double b_local_factor(int k, std::uint64_t p)
{
    const long double x = 1.0L / static_cast<long double>(p);
    const long double s = std::sqrt(x);
    const long double half_sum = (std::pow(1 - s, static_cast<long double>(-k)) +
                                  std::pow(1 + s, static_cast<long double>(-k))) / 2;
    const long double prefactor = std::pow(1 - x, static_cast<long double>(k) * (k + 1) / 2) / (1 + x);
    return prefactor * (half_sum + x);
}

inline EulerFactorResult arithmetic_factor_b(int k, std::uint64_t prime_limit)
{
    detail::check_args(k, prime_limit);
    long double log_value = 0;
    for (std::uint64_t p : primes_up_to(prime_limit)) {
        log_value += std::log(b_local_factor(k, p));
    }
    EulerFactorResult result;
    result.k = k;
    result.prime_limit = prime_limit;
    result.value = static_cast<double>(std::exp(log_value));
    result.tail_estimate = detail::prime_tail(static_cast<double>(k) * k * k * k / 4, prime_limit);
    return result;
}

} // namespace pseudomoments::euler
