#include "bispec/involution.hpp"

#include <random>

namespace bispec {

InvolutionKind parse_involution(std::string_view name) {
    if (name == "kp") return InvolutionKind::KP;
    if (name == "airy") return InvolutionKind::Airy;
    if (name == "bessel") return InvolutionKind::Bessel;
    throw Error(ErrorCode::InvalidArgument, "unknown involution '" + std::string(name) + "'");
}

TangentVector<Complex> pushforward(const Involution<Complex>& map, const CMPair<Complex>& pair,
                                   const TangentVector<Complex>& t, double h) {
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
    const Complex hc(h, 0.0);
    const CMPair<Complex> plus = map({pair.P + hc * t.dP, pair.Q + hc * t.dQ});
    const CMPair<Complex> minus = map({pair.P - hc * t.dP, pair.Q - hc * t.dQ});
    const Complex inv(1.0 / (2.0 * h), 0.0);
    return {inv * (plus.P - minus.P), inv * (plus.Q - minus.Q)};
}

TangentVector<Complex> locus_tangent(const CMPair<Complex>& pair, const CanonicalForm& form,
                                     std::span<const Complex> d_lambda, std::span<const Complex> d_alpha,
                                     const Matrix<Complex>& y) {
    const std::size_t n = pair.size();
    const auto& lam = form.data.lambdas;
    if (d_lambda.size() != n || d_alpha.size() != n || y.rows() != n)
        throw Error(ErrorCode::DimensionMismatch, "tangent data size");

    // d/de of from_spectral_data(lambda + e dl, alpha + e da).
    Matrix<Complex> dp(n, n);
    Matrix<Complex> dq = Matrix<Complex>::diagonal(d_lambda);
    for (std::size_t i = 0; i < n; ++i) {
        Complex dgamma = d_alpha[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const Complex gap = lam[i] - lam[j];
            const Complex d = (d_lambda[i] - d_lambda[j]) / (gap * gap);
            dp(i, j) = -d;
            dgamma += d;
        }
        dp(i, i) = dgamma;
    }
    const Matrix<Complex> ginv = inverse(form.gauge);
    return {form.gauge * dp * ginv + commutator(y, pair.P), form.gauge * dq * ginv + commutator(y, pair.Q)};
}

TangentVector<Complex> random_locus_tangent(const CMPair<Complex>& pair, const CanonicalForm& form,
                                            std::uint64_t seed) {
    const std::size_t n = pair.size();
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto draw = [&] { return Complex(u(gen), u(gen)); };
    Vector<Complex> dl(n), da(n);
    for (auto& v : dl) v = draw();
    for (auto& v : da) v = draw();
    Matrix<Complex> y(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) y(i, j) = draw();
    TangentVector<Complex> t = locus_tangent(pair, form, dl, da, y);
    const double scale = std::max(t.dP.max_abs(), t.dQ.max_abs());
    if (scale > 0.0) {
        t.dP *= Complex(1.0 / scale);
        t.dQ *= Complex(1.0 / scale);
    }
    return t;
}

double antisymplectic_residual(const Involution<Complex>& map, const CMPair<Complex>& pair, int trials,
                               std::uint64_t seed, double h) {
    if (trials <= 0) throw Error(ErrorCode::InvalidArgument, "trials must be positive");
    const CanonicalForm form = canonical_form(pair);
    double worst = 0.0;
    for (int k = 0; k < trials; ++k) {
        const std::uint64_t s = seed * 1000003ULL + 2ULL * static_cast<std::uint64_t>(k);
        const auto t1 = random_locus_tangent(pair, form, s);
        const auto t2 = random_locus_tangent(pair, form, s + 1);
        const Complex before = symplectic_form(t1, t2);
        const Complex after = symplectic_form(pushforward(map, pair, t1, h), pushforward(map, pair, t2, h));
        worst = std::max(worst, std::abs(after + before) / std::max(1.0, std::abs(before)));
    }
    return worst;
}

}  // namespace bispec
