#pragma once

// Shared numeric types and error classes.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pseudomoments {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A computation refused because it would exceed a configured size budget.
class SizeLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too few data points, or exponents outside a truncation window.
class ArityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A result contradicts a known theorem; indicates an implementation bug.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Lossless text form of an exact rational: "p/q", or "p" when q == 1.
inline std::string to_string(const Rational& r)
{
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

inline std::string to_string(const BigInt& n) { return n.str(); }

inline Rational parse_rational(const std::string& text)
{
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        return Rational(BigInt(text));
    }
    return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
}

inline BigInt factorial(unsigned n)
{
    BigInt result = 1;
    for (unsigned i = 2; i <= n; ++i) {
        result *= i;
    }
    return result;
}

inline BigInt binomial(long long n, long long k)
{
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    if (k > n - k) {
        k = n - k;
    }
    BigInt result = 1;
    for (long long i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

} // namespace pseudomoments
