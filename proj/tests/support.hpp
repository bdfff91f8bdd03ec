#pragma once

// Shared helpers for the unit tests and the acceptance binary.

#include <cstdint>
#include <functional>
#include <random>

#include "bispec/baker.hpp"
#include "bispec/cm_pair.hpp"
#include "bispec/dynamics.hpp"
#include "bispec/involution.hpp"

namespace bispec::testing {

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng, double half_width) {
    std::uniform_real_distribution<double> d(-half_width, half_width);
    const double re = d(rng);
    return {re, d(rng)};
}

inline GaussianRational random_gaussian_rational(Rng& rng, long bound = 6, long max_den = 3) {
    std::uniform_int_distribution<long> num(-bound, bound), den(1, max_den);
    const mpq_class re(num(rng), den(rng));
    const mpq_class im(num(rng), den(rng));
    return {re, im};
}

/// |a - b| <= tol * max(1, |b|)
inline bool close(const Complex& a, const Complex& b, double tol) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

inline double rel_error(const Complex& a, const Complex& b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline double max_rel_error(const Vector<Complex>& a, const Vector<Complex>& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, rel_error(a[i], b[i]));
    return e;
}

inline double max_rel_error(const Matrix<Complex>& a, const Matrix<Complex>& b) {
    return (a - b).max_abs() / std::max(1.0, b.max_abs());
}

/// Float rho of the given kind and order with random lower coefficients in [-2, 2]^2.
inline RhoPoly<Complex> random_rho(Kind kind, std::size_t r, Rng& rng) {
    Vector<Complex> a(r);
    for (std::size_t i = 0; i + 1 < r; ++i) a[i] = random_complex(rng, 2.0);
    a[r - 1] = kind == Kind::Airy ? Complex{} : Complex(static_cast<double>(r * (r - 1) / 2));
    return {kind, a};
}

inline RhoPoly<GaussianRational> random_exact_rho(Kind kind, std::size_t r, Rng& rng) {
    Vector<GaussianRational> a(r);
    for (std::size_t i = 0; i + 1 < r; ++i) a[i] = random_gaussian_rational(rng, 3, 2);
    a[r - 1] = kind == Kind::Airy ? GaussianRational() : GaussianRational(static_cast<long>(r * (r - 1) / 2));
    return {kind, a};
}

/// Spectral data whose lambdas all satisfy |lambda| >= min_modulus (for an invertible Q).
inline SpectralData<Complex> spectral_data_away_from_zero(std::size_t n, std::uint64_t seed, double min_modulus = 0.5) {
    for (std::uint64_t s = seed;; s += 7919) {
        auto data = random_spectral_data(n, s);
        bool ok = true;
        for (const auto& l : data.lambdas) ok = ok && std::abs(l) >= min_modulus;
        if (ok) return data;
    }
}

/// Conjugation by I + 0.3 * (random entries), so the pair is no longer in canonical gauge.
inline CMPair<Complex> scramble(const CMPair<Complex>& pair, Rng& rng) {
    const std::size_t n = pair.size();
    Matrix<Complex> g = Matrix<Complex>::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) += 0.3 * random_complex(rng, 1.0);
    return conjugate(pair, g);
}

/// Retries `f` on fresh samples while it throws one of the pole-like codes.
template <class F>
auto retry_on_pole(Rng& rng, F&& f, int attempts = 50) {
    for (int k = 0;; ++k) {
        try {
            return f(rng);
        } catch (const Error& e) {
            const auto c = e.code();
            const bool pole = c == ErrorCode::PoleInX || c == ErrorCode::PoleInZ || c == ErrorCode::SingularSystem ||
                              c == ErrorCode::SingularMatrix || c == ErrorCode::SingularRho;
            if (!pole || k + 1 >= attempts) throw;
        }
    }
}

}  // namespace bispec::testing
