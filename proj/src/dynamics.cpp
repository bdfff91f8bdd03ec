#include "bispec/dynamics.hpp"

#include <limits>

namespace bispec {

void FlowSpec::validate() const {
    if (m < 1) throw Error(ErrorCode::InvalidArgument, "flow index m must be >= 1");
    if (times.empty()) throw Error(ErrorCode::InvalidArgument, "empty time grid");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw Error(ErrorCode::InvalidArgument, "time grid must be strictly increasing");
}

FlowSpec FlowSpec::uniform(int m, double t0, double t1, std::size_t steps) {
    if (steps == 0) throw Error(ErrorCode::InvalidArgument, "steps must be positive");
    FlowSpec spec{m, {}};
    for (std::size_t k = 0; k < steps; ++k)
        spec.times.push_back(steps == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(steps - 1));
    spec.validate();
    return spec;
}

std::vector<std::size_t> Trajectory::collisions() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < rows.size(); ++k)
        if (rows[k].status == RowStatus::Collision) out.push_back(k);
    return out;
}

namespace {

double min_gap(const Vector<Complex>& poles) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (std::size_t j = i + 1; j < poles.size(); ++j) g = std::min(g, std::abs(poles[i] - poles[j]));
    return g;
}

}  // namespace

Vector<Complex> match_poles(const Vector<Complex>& previous, const Vector<Complex>& current) {
    const std::size_t n = current.size();
    if (previous.size() != n) throw Error(ErrorCode::DimensionMismatch, "pole counts differ");
    Vector<Complex> out(n);
    std::vector<bool> prev_used(n, false), cur_used(n, false);
    for (std::size_t round = 0; round < n; ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (prev_used[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (cur_used[j]) continue;
                const double d = std::abs(previous[i] - current[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        prev_used[bi] = cur_used[bj] = true;
        out[bi] = current[bj];
    }
    return out;
}

Trajectory pole_trajectories(const CMPair<Complex>& pair, const RhoPoly<Complex>& rho, const FlowSpec& spec) {
    spec.validate();
    require_same_square(pair.P, pair.Q);
    // Q is static under the flow, so a singular Q fails every grid point.
    if (rho.kind() == Kind::Bessel) detail::checked_inverse(pair.Q, ErrorCode::SingularQ, "Q is singular");

    Trajectory traj;
    Vector<Complex> last;
    for (double t : spec.times) {
        TrajectoryRow row;
        row.t = t;
        Vector<Complex> poles;
        try {
            poles = eigenvalues(q_hat_t(pair, rho, spec.m, Complex(t)));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NoConvergence) throw;
            row.status = RowStatus::DomainError;
            row.error = e.what();
            traj.rows.push_back(std::move(row));
            continue;
        }
        if (!last.empty()) {
            const double threshold = 0.5 * min_gap(last);
            poles = match_poles(last, poles);
            for (std::size_t i = 0; i < poles.size(); ++i)
                row.max_step = std::max(row.max_step, std::abs(poles[i] - last[i]));
            if (poles.size() > 1 && row.max_step > threshold) row.status = RowStatus::Collision;
        }
        row.min_gap = poles.size() > 1 ? min_gap(poles) : 0.0;
        row.poles = poles;
        last = std::move(poles);
        traj.rows.push_back(std::move(row));
    }
    return traj;
}

Complex reduced_reference_h1(const RhoPoly<Complex>& rho, std::span<const Complex> c) {
    const double r = static_cast<double>(rho.order());
    if (rho.kind() == Kind::Airy) {
        if (c.size() == 2) return rho(c[1]) - c[0];
        if (c.size() == 4) {
            const Complex d = -c[0] + c[1];
            return c[2] * c[2] + c[3] * c[3] - c[0] - c[1] - 2.0 / (d * d);
        }
    } else {
        if (c.size() == 2) return rho(r * c[0] * c[1]) / c[0];
        if (c.size() == 4) {
            const Complex l1 = c[0], l2 = c[1], g1 = c[2], g2 = c[3];
            return -(l1 + l2) / (l1 * l2) - g1 + l1 * g1 * g1 - g2 + l2 * g2 * g2 +
                   2.0 * (l1 * g1 - l2 * g2) / (-l1 + l2);
        }
    }
    throw Error(ErrorCode::InvalidArgument, "reduced formulas exist for 1 or 2 particles only");
}

Complex reference_bessel_lambda(Complex c1, Complex c2, double t) {
    return 4.0 * c1 * t * t + (8.0 * c1 * c2 - 2.0) * t - 1.0 / c1 - 2.0 * c2 + 4.0 * c1 * c2 * c2;
}

CMPair<Complex> bessel_particle_at(const CMPair<Complex>& initial, double t) {
    if (initial.size() != 1) throw Error(ErrorCode::InvalidArgument, "single-particle motion only");
    const auto rho = RhoPoly<Complex>::bessel2();
    const CMPair<Complex> hat = beta_bessel(initial, rho);
    return beta_bessel(CMPair<Complex>{hat.P + Matrix<Complex>::scalar(1, Complex(t)), hat.Q}, rho);
}

double eom_check(Complex lambda, Complex gamma, double h) {
    if (std::abs(lambda) == 0.0) throw Error(ErrorCode::SingularQ, "lambda = 0");
    const CMPair<Complex> start{Matrix<Complex>{{gamma}}, Matrix<Complex>{{lambda}}};
    const CMPair<Complex> fwd = bessel_particle_at(start, h);
    const CMPair<Complex> bwd = bessel_particle_at(start, -h);
    const Complex dlambda = (fwd.Q(0, 0) - bwd.Q(0, 0)) / (2.0 * h);
    const Complex dgamma = (fwd.P(0, 0) - bwd.P(0, 0)) / (2.0 * h);
    const Complex expect_lambda = 8.0 * gamma * lambda - 2.0;
    const Complex expect_gamma = -4.0 * gamma * gamma - 1.0 / (lambda * lambda);
    return std::max(std::abs(dlambda - expect_lambda), std::abs(dgamma - expect_gamma));
}

}  // namespace bispec
