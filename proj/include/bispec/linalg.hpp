#pragma once

#include <cmath>
#include <utility>

#include "bispec/matrix.hpp"

namespace bispec {

namespace detail {

// |det| below this is treated as singular in the float backend.
inline double singular_threshold(const Matrix<Complex>& m) {
    return 1e-12 * std::pow(m.max_row_norm(), static_cast<double>(m.rows()));
}

inline std::size_t pivot_row(const Matrix<Complex>& a, std::size_t col) {
    std::size_t best = col;
    for (std::size_t i = col + 1; i < a.rows(); ++i)
        if (std::abs(a(i, col)) > std::abs(a(best, col))) best = i;
    return best;
}

inline std::size_t pivot_row(const Matrix<GaussianRational>& a, std::size_t col) {
    for (std::size_t i = col; i < a.rows(); ++i)
        if (!a(i, col).is_zero()) return i;
    return col;
}

template <class T>
void swap_rows(Matrix<T>& a, std::size_t r1, std::size_t r2) {
    if (r1 == r2) return;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r1, j), a(r2, j));
}

}  // namespace detail

/// Partially pivoted LU in the float backend, fraction-free Bareiss elimination in the exact one.
template <class T>
T determinant(Matrix<T> a) {
    a.require_square("determinant");
    const std::size_t n = a.rows();
    if (n == 0) return from_int<T>(1);
    T sign = from_int<T>(1);
    if constexpr (is_exact_v<T>) {
        T prev = from_int<T>(1);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            std::size_t p = detail::pivot_row(a, k);
            if (a(p, k).is_zero()) return from_int<T>(0);
            if (p != k) {
                detail::swap_rows(a, p, k);
                sign = -sign;
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
                a(i, k) = from_int<T>(0);
            }
            prev = a(k, k);
        }
        return sign * a(n - 1, n - 1);
    } else {
        T det = sign;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = detail::pivot_row(a, k);
            if (a(p, k) == T{}) return T{};
            if (p != k) {
                detail::swap_rows(a, p, k);
                det = -det;
            }
            det *= a(k, k);
            for (std::size_t i = k + 1; i < n; ++i) {
                T f = a(i, k) / a(k, k);
                if (f == T{}) continue;
                for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            }
        }
        return det;
    }
}

/// True when `m` counts as singular: exact zero determinant, or |det| under the scale-aware threshold.
template <class T>
bool is_singular(const Matrix<T>& m) {
    if constexpr (is_exact_v<T>) {
        return determinant(m).is_zero();
    } else {
        return std::abs(determinant(m)) < detail::singular_threshold(m);
    }
}

/// Solves A X = B by Gauss-Jordan elimination. Raises SingularMatrix when A is singular.
template <class T>
Matrix<T> solve(const Matrix<T>& a_in, const Matrix<T>& b_in) {
    a_in.require_square("solve");
    if (b_in.rows() != a_in.rows()) throw Error(ErrorCode::DimensionMismatch, "solve right-hand side");
    if constexpr (!is_exact_v<T>) {
        double det = std::abs(determinant(a_in));
        if (det < detail::singular_threshold(a_in))
            throw Error(ErrorCode::SingularMatrix, "|det| = " + std::to_string(det));
    }
    Matrix<T> a = a_in;
    Matrix<T> b = b_in;
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = detail::pivot_row(a, k);
        if (is_exact_zero(a(p, k))) throw Error(ErrorCode::SingularMatrix, "zero pivot (det = 0)");
        detail::swap_rows(a, p, k);
        detail::swap_rows(b, p, k);
        const T inv = from_int<T>(1) / a(k, k);
        for (std::size_t j = k; j < n; ++j) a(k, j) *= inv;
        for (std::size_t j = 0; j < b.cols(); ++j) b(k, j) *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || is_exact_zero(a(i, k))) continue;
            const T f = a(i, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
        }
    }
    return b;
}

template <class T>
Vector<T> solve(const Matrix<T>& a, const Vector<T>& b) {
    Matrix<T> col(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) col(i, 0) = b[i];
    Matrix<T> x = solve(a, col);
    Vector<T> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = x(i, 0);
    return out;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
    m.require_square("inverse");
    return solve(m, Matrix<T>::identity(m.rows()));
}

/// Horner evaluation of sum_k coeffs[k] M^k (coefficients constant-first).
template <class T>
Matrix<T> matrix_polynomial(std::span<const T> coeffs, const Matrix<T>& m) {
    m.require_square("matrix_polynomial");
    if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient list");
    Matrix<T> acc = Matrix<T>::scalar(m.rows(), coeffs.back());
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
        acc = acc * m;
        for (std::size_t i = 0; i < m.rows(); ++i) acc(i, i) += coeffs[k];
    }
    return acc;
}

template <class T>
T polynomial_value(std::span<const T> coeffs, const T& t) {
    if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient list");
    T acc = coeffs.back();
    for (std::size_t k = coeffs.size() - 1; k-- > 0;) acc = acc * t + coeffs[k];
    return acc;
}

/// Monic characteristic polynomial det(tI - M), constant-first, by Faddeev-LeVerrier.
Vector<Complex> characteristic_polynomial(const Matrix<Complex>& m);

struct EigenOptions {
    int max_iterations = 500;
    double tolerance = 1e-12;
};

/// Roots of det(tI - M) by Durand-Kerner, sorted by (re, im). Float backend, n <= 32.
Vector<Complex> eigenvalues(const Matrix<Complex>& m, const EigenOptions& opts = {});

/// Always raises ExactBackendUnsupported.
Vector<Complex> eigenvalues(const Matrix<GaussianRational>& m, const EigenOptions& opts = {});

/// Lexicographic (re, im) order; real parts within 1e-9 relative are treated as tied.
bool lex_less(const Complex& a, const Complex& b);

/// Monic polynomial roots (coefficients constant-first, leading 1 implied at index size-1).
Vector<Complex> polynomial_roots(const Vector<Complex>& monic, const EigenOptions& opts = {});

}  // namespace bispec
