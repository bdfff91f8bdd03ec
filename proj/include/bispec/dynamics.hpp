#pragma once

#include <string>

#include "bispec/involution.hpp"

namespace bispec {

struct FlowSpec {
    int m = 1;
    std::vector<double> times;

    void validate() const;
    /// `steps` evenly spaced samples of [t0, t1]; steps == 1 gives just t0.
    static FlowSpec uniform(int m, double t0, double t1, std::size_t steps);
};

/// (P - t m Q^{m-1}, Q). The flow leaves [P,Q] unchanged.
template <class T>
CMPair<T> flow(const CMPair<T>& pair, int m, const T& t) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "flow index m must be >= 1");
    require_same_square(pair.P, pair.Q);
    Matrix<T> qpow = Matrix<T>::identity(pair.size());
    for (int k = 1; k < m; ++k) qpow = qpow * pair.Q;
    return {pair.P - (t * from_int<T>(m)) * qpow, pair.Q};
}

/// Q-hat of the flowed pair under the involution of rho's kind.
template <class T>
Matrix<T> q_hat_t(const CMPair<T>& pair, const RhoPoly<T>& rho, int m, const T& t) {
    return hat_q_transpose(flow(pair, m, t), rho).transpose();
}

/// det(xI - Qhat_t). For the Bessel kind x is the transformed variable.
template <class T>
T tau(const CMPair<T>& pair, const RhoPoly<T>& rho, int m, const T& t, const T& x) {
    const Matrix<T> qh = q_hat_t(pair, rho, m, t);
    return determinant(Matrix<T>::scalar(qh.rows(), x) - qh);
}

/// tr(Qhat^m)
template <class T>
T hamiltonian(const CMPair<T>& pair, const RhoPoly<T>& rho, int m) {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "hamiltonian index m must be >= 1");
    const Matrix<T> qh = hat_q_transpose(pair, rho).transpose();
    Matrix<T> p = qh;
    for (int k = 1; k < m; ++k) p = p * qh;
    return p.trace();
}

enum class RowStatus { Ok = 0, Collision = 1, DomainError = 2 };

struct TrajectoryRow {
    double t = 0.0;
    Vector<Complex> poles;  // empty on DomainError
    RowStatus status = RowStatus::Ok;
    double min_gap = 0.0;
    double max_step = 0.0;
    std::string error;
};

struct Trajectory {
    std::vector<TrajectoryRow> rows;

    std::vector<std::size_t> collisions() const;
};

/// Eigenvalues of Qhat_t on the grid, index-matched between consecutive rows by greedy
/// nearest-neighbour assignment. A row is flagged as a collision when some pole moved
/// further than half the minimum pole gap of the previous matched row.
Trajectory pole_trajectories(const CMPair<Complex>& pair, const RhoPoly<Complex>& rho, const FlowSpec& spec);

/// Greedy nearest-neighbour reordering of `current` to follow `previous`.
Vector<Complex> match_poles(const Vector<Complex>& previous, const Vector<Complex>& current);

/// Explicit reduced-coordinate Hamiltonians.
///   Airy,   1 particle (lambda, gamma):                     rho(gamma) - lambda
///   Airy,   2 particles (l1, l2, g1, g2), rho = t^2:       g1^2 + g2^2 - l1 - l2 - 2/(l2 - l1)^2
///   Bessel, 1 particle (lambda, gamma):                     rho(r lambda gamma) / lambda
///   Bessel, 2 particles (l1, l2, g1, g2), rho = t^2 - t - 1: the closed form in dynamics.cpp
Complex reduced_reference_h1(const RhoPoly<Complex>& rho, std::span<const Complex> coords);

/// 1-particle Bessel pole for rho = t^2 - t - 1 and hat-side data (c1, c2).
Complex reference_bessel_lambda(Complex c1, Complex c2, double t);

/// 1-particle Bessel motion for rho = t^2 - t - 1: (lambda, gamma) at time t, obtained by
/// moving the hat-side pair (c2 + t, c1) and pulling back through the involution.
CMPair<Complex> bessel_particle_at(const CMPair<Complex>& initial, double t);

/// Max deviation of central-difference (lambda', gamma') along the 1-particle Bessel motion
/// from (8 gamma lambda - 2, -4 gamma^2 - lambda^-2).
double eom_check(Complex lambda, Complex gamma, double h);

}  // namespace bispec
