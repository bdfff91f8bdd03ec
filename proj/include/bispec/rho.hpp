#pragma once

#include <string>

#include "bispec/linalg.hpp"

namespace bispec {

enum class Kind { Airy, Bessel };

constexpr std::string_view to_string(Kind k) { return k == Kind::Airy ? "airy" : "bessel"; }

/// rho(t) = t^r - a_{r-1} t^{r-1} - ... - a_1 t - a_0.
///
/// Airy kind requires a_{r-1} = 0; Bessel kind requires a_{r-1} = r(r-1)/2.
template <class T>
class RhoPoly {
public:
    RhoPoly(Kind kind, Vector<T> a, bool validate = true) : kind_(kind), a_(std::move(a)) {
        if (a_.empty()) throw Error(ErrorCode::InvalidRho, "order must be positive");
        if (validate) check_normalization();
    }

    /// rho(t) = t^2, the lowest Airy case.
    static RhoPoly airy2() { return RhoPoly(Kind::Airy, {from_int<T>(0), from_int<T>(0)}); }
    /// rho(t) = t^2 - t - 1, the lowest Bessel case.
    static RhoPoly bessel2() { return RhoPoly(Kind::Bessel, {from_int<T>(1), from_int<T>(1)}); }

    Kind kind() const { return kind_; }
    std::size_t order() const { return a_.size(); }
    const Vector<T>& a() const { return a_; }

    /// Coefficients of rho, constant-first.
    Vector<T> coefficients() const {
        Vector<T> c;
        c.reserve(a_.size() + 1);
        for (const auto& ai : a_) c.push_back(-ai);
        c.push_back(from_int<T>(1));
        return c;
    }

    T operator()(const T& t) const { return polynomial_value<T>(coefficients(), t); }
    Matrix<T> operator()(const Matrix<T>& m) const { return matrix_polynomial<T>(coefficients(), m); }

    /// rho_j(t) = t^{r-1-j} - sum_{i=j+1}^{top} a_i t^{i-1-j}, top = r-2 (Airy) or r-1 (Bessel).
    Vector<T> reduced(std::size_t j) const {
        const std::size_t r = order();
        if (j >= r) throw Error(ErrorCode::InvalidArgument, "rho_j index out of range");
        Vector<T> c(r - j, from_int<T>(0));
        c[r - 1 - j] = from_int<T>(1);
        const std::size_t top = kind_ == Kind::Airy ? r - 1 : r;  // exclusive
        for (std::size_t i = j + 1; i < top; ++i) c[i - 1 - j] -= a_[i];
        return c;
    }

    void check_normalization() const {
        const std::size_t r = order();
        const T expected = kind_ == Kind::Airy ? from_int<T>(0) : from_int<T>(static_cast<long>(r * (r - 1) / 2));
        const T diff = a_[r - 1] - expected;
        const bool ok = is_exact_v<T> ? is_exact_zero(diff) : magnitude(diff) <= 1e-12;
        if (!ok)
            throw Error(ErrorCode::InvalidRho, std::string(to_string(kind_)) + " normalization requires a_{r-1} = " +
                                                   (kind_ == Kind::Airy ? "0" : std::to_string(r * (r - 1) / 2)));
    }

private:
    Kind kind_;
    Vector<T> a_;
};

inline RhoPoly<Complex> to_float(const RhoPoly<GaussianRational>& rho) {
    Vector<Complex> a;
    for (const auto& ai : rho.a()) a.push_back(ai.to_complex());
    return RhoPoly<Complex>(rho.kind(), std::move(a), false);
}
inline const RhoPoly<Complex>& to_float(const RhoPoly<Complex>& rho) { return rho; }

}  // namespace bispec
