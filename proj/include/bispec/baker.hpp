#pragma once

#include "bispec/cm_pair.hpp"
#include "bispec/rho.hpp"

namespace bispec {

template <class T>
using KVector = Vector<T>;

/// Value of Wilson's Baker function. In the exact backend only the rational factor is
/// computed and `has_exponential` is false: the caller multiplies by e^{xz} symbolically.
template <class T>
struct BakerValue {
    T value;
    bool has_exponential;
};

namespace detail {

/// solve(sI - M, rhs), mapping singularity onto the caller's pole code.
template <class T, class Rhs>
Rhs shifted_solve(const Matrix<T>& m, const T& s, const Rhs& rhs, ErrorCode code, const char* what) {
    try {
        return solve(Matrix<T>::scalar(m.rows(), s) - m, rhs);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularMatrix) throw;
        throw Error(code, std::string(what) + " (" + e.what() + ")");
    }
}

template <class T>
Matrix<T> checked_inverse(const Matrix<T>& m, ErrorCode code, const char* what) {
    try {
        return inverse(m);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularMatrix) throw;
        throw Error(code, std::string(what) + " (" + e.what() + ")");
    }
}

template <class T>
void require_kind(const RhoPoly<T>& rho, Kind kind) {
    if (rho.kind() != kind)
        throw Error(ErrorCode::InvalidArgument, "rho kind is " + std::string(to_string(rho.kind())) + ", expected " +
                                                    std::string(to_string(kind)));
}

}  // namespace detail

/// det(I - (zI-Q)^{-1}(xI-P)^{-1})
template <class T>
T wilson_rational_factor(const CMPair<T>& pair, const T& x, const T& z) {
    require_same_square(pair.P, pair.Q);
    const std::size_t n = pair.size();
    const Matrix<T> xp = detail::checked_inverse(Matrix<T>::scalar(n, x) - pair.P, ErrorCode::PoleInX,
                                                 "x is an eigenvalue of P");
    const Matrix<T> prod = detail::shifted_solve(pair.Q, z, xp, ErrorCode::PoleInZ, "z is an eigenvalue of Q");
    return determinant(Matrix<T>::identity(n) - prod);
}

template <class T>
BakerValue<T> wilson_psi(const CMPair<T>& pair, const T& x, const T& z) {
    T rational = wilson_rational_factor(pair, x, z);
    if constexpr (is_exact_v<T>) {
        return {std::move(rational), false};
    } else {
        return {std::exp(x * z) * rational, true};
    }
}

template <class T>
Vector<T> rho_reduced(const RhoPoly<T>& rho, std::size_t j) {
    return rho.reduced(j);
}

/// Q-hat transposed: rho(P) - Q (Airy) or Q^{-1} rho(rQP) (Bessel).
template <class T>
Matrix<T> hat_q_transpose(const CMPair<T>& pair, const RhoPoly<T>& rho) {
    if (rho.kind() == Kind::Airy) return rho(pair.P) - pair.Q;
    const Matrix<T> qinv = detail::checked_inverse(pair.Q, ErrorCode::SingularQ, "Q is singular");
    const T r = from_int<T>(static_cast<long>(rho.order()));
    return qinv * rho(r * (pair.Q * pair.P));
}

namespace detail {

/// The pieces shared by both k-vector formulas:
///   k_j(x,z) = delta_{0j} - c * u^T M_j (zI - Q)^{-1} w1,  u^T = w2^T (xI - Qhat^T)^{-1},
/// with M_j = rho_j(P), c = 1 (Airy) or M_j = rho_j(rPQ), c = r (Bessel).
template <class T>
struct KFormula {
    RankOneFactor<T> w;
    Vector<T> u;
    std::vector<Matrix<T>> m;
    T c;
};

template <class T>
KFormula<T> k_formula(const CMPair<T>& pair, const RhoPoly<T>& rho, const T& x) {
    KFormula<T> f{validate_and_factor(pair), {}, {}, from_int<T>(1)};
    const std::size_t r = rho.order();
    const Matrix<T> qt = hat_q_transpose(pair, rho);
    Matrix<T> arg = pair.P;
    if (rho.kind() == Kind::Bessel) {
        f.c = from_int<T>(static_cast<long>(r));
        arg = f.c * (pair.P * pair.Q);
    }
    // (xI - Qhat^T)^T = xI - Qhat
    f.u = shifted_solve(qt.transpose(), x, f.w.w2, ErrorCode::PoleInX, "x is a zero of tau");
    for (std::size_t j = 0; j < r; ++j) f.m.push_back(matrix_polynomial<T>(rho.reduced(j), arg));
    return f;
}

template <class T>
KVector<T> k_eval(const CMPair<T>& pair, const RhoPoly<T>& rho, const T& x, const T& z) {
    const KFormula<T> f = k_formula(pair, rho, x);
    const Vector<T> zw = shifted_solve(pair.Q, z, f.w.w1, ErrorCode::PoleInZ, "z is an eigenvalue of Q");
    KVector<T> k(rho.order());
    for (std::size_t j = 0; j < rho.order(); ++j) {
        k[j] = (j == 0 ? from_int<T>(1) : from_int<T>(0)) - f.c * dot(f.u, f.m[j] * zw);
    }
    return k;
}

}  // namespace detail

/// Airy Baker vector of the pair at (x, z).
template <class T>
KVector<T> airy_k(const CMPair<T>& pair, const RhoPoly<T>& rho, const T& x, const T& z) {
    detail::require_kind(rho, Kind::Airy);
    return detail::k_eval(pair, rho, x, z);
}

/// Bessel Baker vector in the transformed coordinates (x^r, z^r already applied by the caller).
template <class T>
KVector<T> bessel_k(const CMPair<T>& pair, const RhoPoly<T>& rho, const T& x, const T& z) {
    detail::require_kind(rho, Kind::Bessel);
    detail::checked_inverse(pair.Q, ErrorCode::SingularQ, "Q is singular");
    return detail::k_eval(pair, rho, x, z);
}

template <class T>
KVector<T> baker_k(const CMPair<T>& pair, const RhoPoly<T>& rho, const T& x, const T& z) {
    return rho.kind() == Kind::Airy ? airy_k(pair, rho, x, z) : bessel_k(pair, rho, x, z);
}

/// Subdiagonal ones, last column (x + z + a_0, a_1, ..., a_{r-1}).
template <class T>
Matrix<T> b_matrix_airy(const RhoPoly<T>& rho, const T& x, const T& z) {
    const std::size_t r = rho.order();
    Matrix<T> b(r, r);
    for (std::size_t j = 0; j + 1 < r; ++j) b(j + 1, j) = from_int<T>(1);
    for (std::size_t i = 0; i < r; ++i) b(i, r - 1) += rho.a()[i];
    b(0, r - 1) += x + z;
    return b;
}

/// Subdiagonal ones, last column (a_0 + x u, a_1, ..., a_{r-1}).
template <class T>
Matrix<T> b_matrix_bessel(const RhoPoly<T>& rho, const T& x, const T& u) {
    const std::size_t r = rho.order();
    Matrix<T> b(r, r);
    for (std::size_t j = 0; j + 1 < r; ++j) b(j + 1, j) = from_int<T>(1);
    for (std::size_t i = 0; i < r; ++i) b(i, r - 1) += rho.a()[i];
    b(0, r - 1) += x * u;
    return b;
}

template <class T>
Matrix<T> b_matrix(const RhoPoly<T>& rho, const T& x, const T& z) {
    return rho.kind() == Kind::Airy ? b_matrix_airy(rho, x, z) : b_matrix_bessel(rho, x, z);
}

/// Direct solve of the per-condition residue equations
///   e_1 = -B(x, lambda_i) v_i / s_i + gamma_i v_i - sum_{l != i} v_l / (lambda_i - lambda_l),
/// s_i = 1 (Airy) or r lambda_i (Bessel), then k = e_1 + sum_i v_i / (z - lambda_i).
template <class T>
KVector<T> k_solver_oracle(const SpectralData<T>& data, const RhoPoly<T>& rho, const T& x, const T& z) {
    const std::size_t n = data.size();
    const std::size_t r = rho.order();
    const CMPair<T> pair = from_spectral_data(data);  // validates the data; gamma_i = P_ii

    Matrix<T> sys(n * r, n * r);
    Matrix<T> rhs(n * r, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const T& li = data.lambdas[i];
        Matrix<T> diag = b_matrix(rho, x, li);
        if (rho.kind() == Kind::Bessel) {
            if (is_exact_v<T> ? is_exact_zero(li) : magnitude(li) <= kDistinctTolerance)
                throw Error(ErrorCode::SingularQ, "condition at lambda = 0");
            diag *= from_int<T>(1) / (from_int<T>(static_cast<long>(r)) * li);
        }
        diag = Matrix<T>::scalar(r, pair.P(i, i)) - diag;
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = 0; b < r; ++b) sys(i * r + a, i * r + b) = diag(a, b);
            for (std::size_t l = 0; l < n; ++l)
                if (l != i) sys(i * r + a, l * r + a) = -pair.P(i, l);
        }
        rhs(i * r, 0) = from_int<T>(1);
    }

    Matrix<T> v;
    try {
        v = solve(sys, rhs);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularMatrix) throw;
        throw Error(ErrorCode::SingularSystem, "residue system singular at x (pole of the Baker vector)");
    }

    KVector<T> k(r, from_int<T>(0));
    k[0] = from_int<T>(1);
    for (std::size_t i = 0; i < n; ++i) {
        const T d = z - data.lambdas[i];
        if (is_exact_v<T> ? is_exact_zero(d) : magnitude(d) <= kDistinctTolerance)
            throw Error(ErrorCode::PoleInZ, "z coincides with a condition point");
        const T inv = from_int<T>(1) / d;
        for (std::size_t a = 0; a < r; ++a) k[a] += v(i * r + a, 0) * inv;
    }
    return k;
}

/// Max-norm residual of each condition (rows) at each x sample (columns), after dividing
/// the condition by q'(lambda_i). The Baker vector comes from `pair`, whose Q must equal
/// diag(conditions.lambdas); the conditions supply the alphas.
std::vector<std::vector<double>> condition_residual(const CMPair<Complex>& pair,
                                                    const SpectralData<Complex>& conditions,
                                                    const RhoPoly<Complex>& rho,
                                                    std::span<const Complex> x_samples);

/// Same, with the Baker vector of from_spectral_data(data).
std::vector<std::vector<double>> condition_residual(const SpectralData<Complex>& data,
                                                    const RhoPoly<Complex>& rho,
                                                    std::span<const Complex> x_samples);

struct IdentityResidual {
    double max_abs = 0.0;
    bool exact_zero = false;
};

template <class T>
IdentityResidual make_residual(const std::vector<Matrix<T>>& blocks) {
    IdentityResidual res{0.0, true};
    for (const auto& b : blocks) {
        res.max_abs = std::max(res.max_abs, b.max_abs());
        res.exact_zero = res.exact_zero && b.is_zero();
    }
    return res;
}

struct AIdentityOptions {
    /// The constant a_0 in the top-right block of the Airy block matrix. Disabling it
    /// reproduces the bare "xI + Q" entry and breaks the identity whenever a_0 != 0.
    bool include_a0 = true;
};

/// Assembles the rn x rn block matrix A, applies it to the stacked rho_j column and returns
/// the deviation from (x-side matrix, 0, ..., 0).
template <class T>
IdentityResidual verify_a_identity(const CMPair<T>& pair, const RhoPoly<T>& rho, const T& x,
                                   AIdentityOptions opts = {}) {
    require_same_square(pair.P, pair.Q);
    const std::size_t n = pair.size();
    const std::size_t r = rho.order();
    const Matrix<T> id = Matrix<T>::identity(n);
    const Matrix<T> zero(n, n);
    const bool bessel = rho.kind() == Kind::Bessel;

    std::vector<std::vector<Matrix<T>>> a(r, std::vector<Matrix<T>>(r, zero));
    std::vector<Matrix<T>> stack;
    Matrix<T> top_rhs;
    const T a0 = opts.include_a0 ? rho.a()[0] : from_int<T>(0);

    if (!bessel) {
        for (std::size_t i = 0; i < r; ++i) a[i][i] = -pair.P;
        for (std::size_t i = 1; i < r; ++i) a[i][i - 1] = id;
        a[0][r - 1] += Matrix<T>::scalar(n, x + a0) + pair.Q;
        for (std::size_t i = 1; i < r; ++i) a[i][r - 1] += Matrix<T>::scalar(n, rho.a()[i]);
        for (std::size_t j = 0; j < r; ++j) stack.push_back(matrix_polynomial<T>(rho.reduced(j), pair.P));
        top_rhs = Matrix<T>::scalar(n, x) + pair.Q - rho(pair.P);
    } else {
        const Matrix<T> qinv = detail::checked_inverse(pair.Q, ErrorCode::SingularQ, "Q is singular");
        const T rr = from_int<T>(static_cast<long>(r));
        const T inv_r = from_int<T>(1) / rr;
        for (std::size_t i = 0; i < r; ++i) a[i][i] = -pair.P;
        for (std::size_t i = 1; i < r; ++i) a[i][i - 1] = inv_r * qinv;
        a[0][r - 1] += Matrix<T>::scalar(n, x * inv_r) + (a0 * inv_r) * qinv;
        for (std::size_t i = 1; i < r; ++i) a[i][r - 1] += (rho.a()[i] * inv_r) * qinv;
        const Matrix<T> rqp = rr * (pair.Q * pair.P);
        for (std::size_t j = 0; j < r; ++j) stack.push_back(rr * matrix_polynomial<T>(rho.reduced(j), rqp));
        top_rhs = Matrix<T>::scalar(n, x) - qinv * rho(rqp);
    }

    std::vector<Matrix<T>> deviation;
    for (std::size_t i = 0; i < r; ++i) {
        Matrix<T> row = zero;
        for (std::size_t j = 0; j < r; ++j) row += a[i][j] * stack[j];
        if (i == 0) row -= top_rhs;
        deviation.push_back(std::move(row));
    }
    return make_residual(deviation);
}

}  // namespace bispec
