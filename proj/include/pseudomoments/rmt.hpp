#pragma once

// Monte Carlo over Haar-random U(N): secular coefficients Sc_j(M) (the
// elementary symmetric functions of the eigenvalues) and their moments,
// plus the exact Keating-Snaith moment of the full characteristic
// polynomial and the constant g_k.

#include "core.hpp"
#include "counting.hpp"
#include "parallel.hpp"
#include "partition.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pseudomoments::rmt {

using Complex = std::complex<double>;

inline constexpr double unitarity_tolerance = 1e-12;

/// Dense N x N matrix, checked to be unitary on construction.
class UnitaryMatrix {
public:
    explicit UnitaryMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries))
    {
        if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
            throw std::invalid_argument("a unitary matrix must be square and nonempty");
        }
        const double residual = unitarity_residual(entries_);
        if (!(residual < unitarity_tolerance)) {
            throw ConsistencyError("matrix is not unitary: residual " + std::to_string(residual));
        }
    }

    static double unitarity_residual(const Eigen::MatrixXcd& m)
    {
        const auto n = m.rows();
        return (m * m.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    }

    int dimension() const noexcept { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }

private:
    Eigen::MatrixXcd entries_;
};

/// Generator for substream `stream` of `seed`. Parallel workers use streams
/// 1, 2, ...; stream 0 is reserved for single samples.
inline std::mt19937_64 make_generator(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

/// Ginibre matrix -> Householder QR -> multiply column i of Q by the phase of
/// R(i, i). Without the phase correction the result is not Haar distributed.
inline UnitaryMatrix haar_unitary(int n, std::mt19937_64& gen)
{
    if (n < 1) throw std::invalid_argument("dimension must be at least 1");
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd ginibre(n, n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) {
            const double re = normal(gen);
            const double im = normal(gen);
            ginibre(r, c) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd& r = qr.matrixQR();
    for (int i = 0; i < n; ++i) {
        const Complex d = r(i, i);
        const double modulus = std::abs(d);
        if (modulus > 0) q.col(i) *= d / modulus;
    }
    return UnitaryMatrix(std::move(q));
}

inline UnitaryMatrix haar_unitary(int n, std::uint64_t seed)
{
    auto gen = make_generator(seed, 0);
    return haar_unitary(n, gen);
}

/// Sc_0..Sc_N with Sc_0 = 1.
struct SecularVector {
    std::vector<Complex> coefficients;

    int dimension() const noexcept { return static_cast<int>(coefficients.size()) - 1; }
    const Complex& operator[](std::size_t j) const { return coefficients.at(j); }
};

/// e_j of the eigenvalues from the power traces p_m = tr(M^m) by Newton's
/// identities, j e_j = sum_{i=1}^{j} (-1)^{i-1} e_{j-i} p_i.
inline SecularVector secular_coefficients(const UnitaryMatrix& m)
{
    const int n = m.dimension();
    std::vector<Complex> traces(static_cast<std::size_t>(n) + 1);
    Eigen::MatrixXcd power = m.entries();
    traces[1] = power.trace();
    for (int i = 2; i <= n; ++i) {
        power = power * m.entries();
        traces[static_cast<std::size_t>(i)] = power.trace();
    }
    std::vector<Complex> e(static_cast<std::size_t>(n) + 1);
    e[0] = 1.0;
    for (int j = 1; j <= n; ++j) {
        Complex acc = 0;
        for (int i = 1; i <= j; ++i) {
            const Complex term = e[static_cast<std::size_t>(j - i)] * traces[static_cast<std::size_t>(i)];
            acc += (i % 2 == 1) ? term : -term;
        }
        e[static_cast<std::size_t>(j)] = acc / static_cast<double>(j);
    }
    return {std::move(e)};
}

/// P_{M,l}(z) = sum_{j=0}^{l} Sc_j z^{N-j} (-1)^j; l = N gives det(z - M).
inline Complex truncated_characteristic(const SecularVector& sc, int l, Complex z)
{
    const int n = sc.dimension();
    std::vector<Complex> z_power(static_cast<std::size_t>(n) + 1);
    z_power[0] = 1.0;
    for (std::size_t m = 1; m < z_power.size(); ++m) z_power[m] = z_power[m - 1] * z;
    Complex acc = 0;
    for (int j = 0; j <= l; ++j) {
        const Complex term = sc[static_cast<std::size_t>(j)] * z_power[static_cast<std::size_t>(n - j)];
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

struct MomentEstimate {
    Complex mean{};
    double std_error = 0;  // sample standard deviation / sqrt(samples)
    std::uint64_t samples = 0;
    std::optional<BigInt> target;

    /// |mean - target| / std_error; 0 if they agree exactly, infinite if
    /// they differ with zero spread.
    std::optional<double> z_score() const
    {
        if (!target) return std::nullopt;
        const double distance = std::abs(mean - Complex(target->convert_to<double>(), 0.0));
        if (std_error == 0) return distance == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        return distance / std_error;
    }

    bool within(double sigmas) const
    {
        const auto z = z_score();
        return z && *z <= sigmas;
    }
};

/// Averages fn(secular coefficients) over Haar samples. Worker w draws its
/// share of samples from substream w + 1, and partial sums are reduced in
/// worker order, so the estimate is a pure function of (seed, threads).
template <typename Fn>
MomentEstimate monte_carlo(int n, std::uint64_t samples, std::uint64_t seed, unsigned threads, Fn fn)
{
    if (n < 1) throw std::invalid_argument("dimension must be at least 1");
    if (samples < 2) throw std::invalid_argument("at least two samples are required");
    struct Partial {
        std::complex<long double> sum{};
        long double sum_sq = 0;
    };
    const auto partials = run_chunked(samples, threads, [&](unsigned worker, std::size_t begin, std::size_t end) {
        auto gen = make_generator(seed, static_cast<std::uint64_t>(worker) + 1);
        Partial part;
        for (std::size_t s = begin; s < end; ++s) {
            const UnitaryMatrix m = haar_unitary(n, gen);
            const Complex value = fn(secular_coefficients(m));
            part.sum += std::complex<long double>(value.real(), value.imag());
            part.sum_sq += std::norm(std::complex<long double>(value.real(), value.imag()));
        }
        return part;
    });
    std::complex<long double> sum{};
    long double sum_sq = 0;
    for (const auto& p : partials) {
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    const auto count = static_cast<long double>(samples);
    const std::complex<long double> mean = sum / count;
    const long double variance = std::max(0.0L, (sum_sq - count * std::norm(mean)) / (count - 1));

    MomentEstimate estimate;
    estimate.mean = Complex(static_cast<double>(mean.real()), static_cast<double>(mean.imag()));
    estimate.std_error = static_cast<double>(std::sqrt(variance / count));
    estimate.samples = samples;
    return estimate;
}

/// E|Sc_j|^{2k}; target H_k(j) when N >= jk.
inline MomentEstimate secular_abs_moment_mc(int j, int k, int n, std::uint64_t samples, std::uint64_t seed,
                                            unsigned threads = 1)
{
    if (j < 1 || j > n) throw std::invalid_argument("need 1 <= j <= N");
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    auto estimate = monte_carlo(n, samples, seed, threads, [j, k](const SecularVector& sc) {
        return Complex(std::pow(std::norm(sc[static_cast<std::size_t>(j)]), k), 0.0);
    });
    if (static_cast<long long>(n) >= static_cast<long long>(j) * k) {
        estimate.target = k == 0 ? BigInt(1) : counting::count_magic(k, j);
    }
    return estimate;
}

/// E prod_j Sc_j^{a_j} conj(Sc_j)^{b_j}; target N_{mu nu} with
/// mu = <1^{a_1} ... l^{a_l}>, nu = <1^{b_1} ... l^{b_l}>, when N is large enough.
inline MomentEstimate mixed_moment_mc(const std::vector<int>& a, const std::vector<int>& b, int n,
                                      std::uint64_t samples, std::uint64_t seed, unsigned threads = 1)
{
    if (a.size() != b.size()) throw std::invalid_argument("exponent vectors must have equal length");
    if (a.size() > static_cast<std::size_t>(n)) throw std::invalid_argument("exponent vectors longer than N");
    const Partition mu = Partition::from_multiplicities(a);
    const Partition nu = Partition::from_multiplicities(b);
    auto estimate = monte_carlo(n, samples, seed, threads, [&](const SecularVector& sc) {
        Complex product = 1.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const Complex s = sc[j + 1];
            for (int t = 0; t < a[j]; ++t) product *= s;
            for (int t = 0; t < b[j]; ++t) product *= std::conj(s);
        }
        return product;
    });
    if (n >= std::max(mu.weight(), nu.weight())) {
        estimate.target = counting::count_contingency(mu, nu);
    }
    return estimate;
}

/// E|P_{M,l}(z)|^{2k}; target G_k(l) when N >= lk.
inline MomentEstimate truncated_poly_moment_mc(int l, int k, int n, Complex z, std::uint64_t samples,
                                               std::uint64_t seed, unsigned threads = 1)
{
    if (l < 0 || l > n) throw std::invalid_argument("need 0 <= l <= N");
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (std::abs(std::abs(z) - 1.0) > 1e-12) throw std::invalid_argument("z must have modulus 1");
    auto estimate = monte_carlo(n, samples, seed, threads, [&](const SecularVector& sc) {
        return Complex(std::pow(std::norm(truncated_characteristic(sc, l, z)), k), 0.0);
    });
    if (static_cast<long long>(n) >= static_cast<long long>(l) * k) {
        estimate.target = counting::count_pseudomagic(k, l);
    }
    return estimate;
}

/// M_N(k) = prod_{j=1}^{N} Gamma(j) Gamma(j+2k) / Gamma(j+k)^2, exactly. Each
/// factor equals prod_{i=0}^{k-1} (j+k+i)/(j+i).
inline Rational full_poly_moment_exact(int n, int k)
{
    if (n < 1) throw std::invalid_argument("dimension must be at least 1");
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    BigInt num = 1;
    BigInt den = 1;
    for (int j = 1; j <= n; ++j) {
        for (int i = 0; i < k; ++i) {
            num *= j + k + i;
            den *= j + i;
        }
    }
    return Rational(num, den);
}

/// g_k = prod_{j=0}^{k-1} j! / (j+k)!.
inline Rational g_factor(int k)
{
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    Rational g = 1;
    for (int j = 0; j < k; ++j) {
        g *= Rational(factorial(static_cast<unsigned>(j)), factorial(static_cast<unsigned>(j + k)));
    }
    return g;
}

} // namespace pseudomoments::rmt
