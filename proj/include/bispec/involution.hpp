#pragma once

#include <cstdint>
#include <optional>

#include "bispec/baker.hpp"

namespace bispec {

enum class InvolutionKind { KP, Airy, Bessel };

constexpr std::string_view to_string(InvolutionKind k) {
    switch (k) {
    case InvolutionKind::KP: return "kp";
    case InvolutionKind::Airy: return "airy";
    case InvolutionKind::Bessel: return "bessel";
    }
    return "?";
}

InvolutionKind parse_involution(std::string_view name);

/// (P, Q) -> (Q^T, P^T)
template <class T>
CMPair<T> beta_kp(const CMPair<T>& pair) {
    require_same_square(pair.P, pair.Q);
    return {pair.Q.transpose(), pair.P.transpose()};
}

/// (P, Q) -> (P^T, rho(P^T) - Q^T)
template <class T>
CMPair<T> beta_airy(const CMPair<T>& pair, const RhoPoly<T>& rho) {
    detail::require_kind(rho, Kind::Airy);
    require_same_square(pair.P, pair.Q);
    const Matrix<T> pt = pair.P.transpose();
    return {pt, rho(pt) - pair.Q.transpose()};
}

/// (P, Q) -> ((QP rho(rQP)^{-1} Q)^T, (Q^{-1} rho(rQP))^T). Only densely defined.
template <class T>
CMPair<T> beta_bessel(const CMPair<T>& pair, const RhoPoly<T>& rho) {
    detail::require_kind(rho, Kind::Bessel);
    require_same_square(pair.P, pair.Q);
    const Matrix<T> qinv = detail::checked_inverse(pair.Q, ErrorCode::SingularQ, "Q is singular");
    const T r = from_int<T>(static_cast<long>(rho.order()));
    const Matrix<T> qp = pair.Q * pair.P;
    const Matrix<T> sigma = rho(r * qp);
    const Matrix<T> sigma_inv = detail::checked_inverse(sigma, ErrorCode::SingularRho, "rho(rQP) is singular");
    return {(qp * sigma_inv * pair.Q).transpose(), (qinv * sigma).transpose()};
}

/// One of the three maps, with its rho where needed.
template <class T>
struct Involution {
    InvolutionKind kind = InvolutionKind::KP;
    std::optional<RhoPoly<T>> rho;

    static Involution kp() { return {InvolutionKind::KP, std::nullopt}; }
    static Involution of(const RhoPoly<T>& rho) {
        return {rho.kind() == Kind::Airy ? InvolutionKind::Airy : InvolutionKind::Bessel, rho};
    }

    CMPair<T> operator()(const CMPair<T>& pair) const {
        switch (kind) {
        case InvolutionKind::KP: return beta_kp(pair);
        case InvolutionKind::Airy: return beta_airy(pair, require_rho());
        case InvolutionKind::Bessel: return beta_bessel(pair, require_rho());
        }
        throw Error(ErrorCode::InvalidArgument, "unknown involution");
    }

private:
    const RhoPoly<T>& require_rho() const {
        if (!rho) throw Error(ErrorCode::InvalidArgument, "involution needs rho");
        return *rho;
    }
};

template <class T>
struct TangentVector {
    Matrix<T> dP;
    Matrix<T> dQ;
};

/// tr(dP ^ dQ) evaluated on (t1, t2).
template <class T>
T symplectic_form(const TangentVector<T>& t1, const TangentVector<T>& t2) {
    if (t1.dP.rows() != t2.dP.rows() || t1.dQ.rows() != t2.dQ.rows() || t1.dP.rows() != t1.dQ.rows())
        throw Error(ErrorCode::DimensionMismatch, "tangent vectors differ in size");
    return (t1.dP * t2.dQ).trace() - (t2.dP * t1.dQ).trace();
}

/// Central-difference differential of `map` at `pair` along `t`.
TangentVector<Complex> pushforward(const Involution<Complex>& map, const CMPair<Complex>& pair,
                                   const TangentVector<Complex>& t, double h = 1e-5);

/// Tangent to the rank-one locus at `pair`: spectral perturbation (d_lambda, d_alpha) in the
/// canonical gauge plus the conjugation direction ([Y,P], [Y,Q]).
TangentVector<Complex> locus_tangent(const CMPair<Complex>& pair, const CanonicalForm& form,
                                     std::span<const Complex> d_lambda, std::span<const Complex> d_alpha,
                                     const Matrix<Complex>& y);

/// Seeded random locus tangent, scaled to unit max entry.
TangentVector<Complex> random_locus_tangent(const CMPair<Complex>& pair, const CanonicalForm& form,
                                            std::uint64_t seed);

/// max over trials of |omega(beta_* t1, beta_* t2) + omega(t1, t2)| / max(1, |omega(t1, t2)|).
double antisymplectic_residual(const Involution<Complex>& map, const CMPair<Complex>& pair, int trials,
                               std::uint64_t seed, double h = 1e-5);

}  // namespace bispec
