#pragma once

#include <complex>
#include <string>
#include <type_traits>

#include <gmpxx.h>

namespace bispec {

using Complex = std::complex<double>;

enum class Backend { Float, Exact };

/// Complex number with arbitrary-precision rational parts.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long re) : re_(re) {}  // NOLINT(google-explicit-constructor)
    GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }

    const mpq_class& real() const { return re_; }
    const mpq_class& imag() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    GaussianRational conj() const { return {re_, -im_}; }
    mpq_class norm() const { return re_ * re_ + im_ * im_; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        mpq_class re = re_ * o.re_ - im_ * o.im_;
        mpq_class im = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(re);
        im_ = std::move(im);
        return *this;
    }
    /// Throws bispec::Error(SingularMatrix) on division by zero.
    GaussianRational& operator/=(const GaussianRational& o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

/// "p/q" (or "p") for one rational part.
std::string rational_to_string(const mpq_class& q);
mpq_class rational_from_string(const std::string& s);
std::string to_string(const GaussianRational& z);
std::string to_string(const Complex& z);

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, GaussianRational>;

template <class T>
inline constexpr Backend backend_of_v = is_exact_v<T> ? Backend::Exact : Backend::Float;

/// Approximate modulus, usable for pivoting and reporting in either backend.
inline double magnitude(const Complex& z) { return std::abs(z); }
inline double magnitude(const GaussianRational& z) { return std::abs(z.to_complex()); }

inline Complex to_complex(const Complex& z) { return z; }
inline Complex to_complex(const GaussianRational& z) { return z.to_complex(); }

inline bool is_exact_zero(const Complex& z) { return z == Complex{}; }
inline bool is_exact_zero(const GaussianRational& z) { return z.is_zero(); }

/// Small integers lift into either field without rounding.
template <class T>
T from_int(long v) {
    if constexpr (is_exact_v<T>) {
        return GaussianRational(v);
    } else {
        return T(static_cast<double>(v));
    }
}

}  // namespace bispec
