#pragma once

#include <cstdint>

#include "bispec/linalg.hpp"

namespace bispec {

/// Square matrices (P, Q) with rank([P,Q] - I) = 1.
template <class T>
struct CMPair {
    Matrix<T> P;
    Matrix<T> Q;

    std::size_t size() const { return P.rows(); }
    friend bool operator==(const CMPair&, const CMPair&) = default;
};

/// [P,Q] = I - w1 w2^T.
template <class T>
struct RankOneFactor {
    Vector<T> w1;
    Vector<T> w2;
};

/// First-order conditions delta_{lambda_i} o (d/dz - alpha_i) at distinct points.
template <class T>
struct SpectralData {
    Vector<T> lambdas;
    Vector<T> alphas;

    std::size_t size() const { return lambdas.size(); }
};

inline constexpr double kRankTolerance = 1e-9;
inline constexpr double kDistinctTolerance = 1e-8;

template <class T>
void require_same_square(const Matrix<T>& a, const Matrix<T>& b) {
    a.require_square("pair matrix");
    b.require_square("pair matrix");
    if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "P and Q differ in size");
    if (a.rows() == 0) throw Error(ErrorCode::InvalidArgument, "empty pair");
}

/// Factors [P,Q] - I = -w1 w2^T around its largest entry, normalised so that w1 has a 1 at the pivot row.
template <class T>
RankOneFactor<T> validate_and_factor(const Matrix<T>& P, const Matrix<T>& Q, double tol = kRankTolerance) {
    require_same_square(P, Q);
    const std::size_t n = P.rows();
    const Matrix<T> m = commutator(P, Q) - Matrix<T>::identity(n);

    std::size_t a = 0, b = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double v = magnitude(m(i, j));
            if (v > best && !is_exact_zero(m(i, j))) {
                best = v;
                a = i;
                b = j;
            }
        }
    if (best < 0.0) throw Error(ErrorCode::NotRankOne, "[P,Q] - I vanishes (rank 0)");

    RankOneFactor<T> f{Vector<T>(n), Vector<T>(n)};
    const T pivot = m(a, b);
    for (std::size_t i = 0; i < n; ++i) {
        f.w1[i] = m(i, b) / pivot;
        f.w2[i] = -m(a, i);
    }

    const Matrix<T> residual = m + outer(f.w1, f.w2);
    if constexpr (is_exact_v<T>) {
        if (!residual.is_zero()) throw Error(ErrorCode::NotRankOne, "[P,Q] - I is not an exact outer product");
    } else {
        const double rel = residual.max_abs() / std::max(1.0, m.max_abs());
        if (rel > tol) throw Error(ErrorCode::NotRankOne, "outer-product residual " + std::to_string(rel));
    }
    return f;
}

template <class T>
RankOneFactor<T> validate_and_factor(const CMPair<T>& pair, double tol = kRankTolerance) {
    return validate_and_factor(pair.P, pair.Q, tol);
}

template <class T>
void require_distinct(const Vector<T>& lambdas) {
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        for (std::size_t j = i + 1; j < lambdas.size(); ++j) {
            const T d = lambdas[i] - lambdas[j];
            const bool degenerate = is_exact_v<T> ? is_exact_zero(d) : magnitude(d) <= kDistinctTolerance;
            if (degenerate)
                throw Error(ErrorCode::DegenerateSpectrum,
                            "lambda_" + std::to_string(i) + " and lambda_" + std::to_string(j) + " coincide");
        }
}

/// Q = diag(lambda), P_ii = alpha_i - sum_{j != i} 1/(lambda_i - lambda_j), P_ij = 1/(lambda_i - lambda_j).
template <class T>
CMPair<T> from_spectral_data(const SpectralData<T>& data) {
    const std::size_t n = data.size();
    if (n == 0 || data.alphas.size() != n) throw Error(ErrorCode::DimensionMismatch, "spectral data sizes");
    require_distinct(data.lambdas);
    CMPair<T> pair{Matrix<T>(n, n), Matrix<T>::diagonal(data.lambdas)};
    for (std::size_t i = 0; i < n; ++i) {
        T gamma = data.alphas[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const T inv = from_int<T>(1) / (data.lambdas[i] - data.lambdas[j]);
            pair.P(i, j) = inv;
            gamma -= inv;
        }
        pair.P(i, i) = gamma;
    }
    return pair;
}

/// (G P G^-1, G Q G^-1)
template <class T>
CMPair<T> conjugate(const CMPair<T>& pair, const Matrix<T>& g) {
    const Matrix<T> ginv = inverse(g);
    return {g * pair.P * ginv, g * pair.Q * ginv};
}

inline CMPair<Complex> to_float(const CMPair<GaussianRational>& p) { return {to_float(p.P), to_float(p.Q)}; }
inline const CMPair<Complex>& to_float(const CMPair<Complex>& p) { return p; }

/// Generic normal form of a pair together with the gauge that produces it:
/// pair = G * from_spectral_data(data) * G^-1.
struct CanonicalForm {
    SpectralData<Complex> data;
    Matrix<Complex> gauge;
};

CanonicalForm canonical_form(const CMPair<Complex>& pair);

/// Spectral data (lambda, alpha) of a pair with semisimple Q, ordered by lambda.
SpectralData<Complex> canonicalize(const CMPair<Complex>& pair);
SpectralData<Complex> canonicalize(const CMPair<GaussianRational>& pair);

/// Seeded draw: |re|, |im| <= 5, pairwise lambda gap >= 0.1.
SpectralData<Complex> random_spectral_data(std::size_t n, std::uint64_t seed);
CMPair<Complex> random_pair(std::size_t n, std::uint64_t seed);

/// Gaussian-rational spectral data: distinct Gaussian-integer lambdas in [-5,5]^2,
/// alphas with denominators up to 4.
SpectralData<GaussianRational> random_exact_spectral_data(std::size_t n, std::uint64_t seed);

/// Exact pair conjugated by a seeded unimodular integer matrix, so Q is not diagonal.
CMPair<GaussianRational> random_exact_pair(std::size_t n, std::uint64_t seed);

}  // namespace bispec
