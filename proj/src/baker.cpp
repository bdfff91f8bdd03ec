#include "bispec/baker.hpp"

namespace bispec {

std::vector<std::vector<double>> condition_residual(const CMPair<Complex>& pair,
                                                    const SpectralData<Complex>& conditions,
                                                    const RhoPoly<Complex>& rho,
                                                    std::span<const Complex> x_samples) {
    const std::size_t n = conditions.size();
    const std::size_t r = rho.order();
    if (pair.size() != n) throw Error(ErrorCode::DimensionMismatch, "pair and conditions differ in size");
    require_distinct(conditions.lambdas);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const bool off = i != j && pair.Q(i, j) != Complex{};
            const bool diag = i == j && std::abs(pair.Q(i, i) - conditions.lambdas[i]) >
                                            1e-12 * std::max(1.0, std::abs(conditions.lambdas[i]));
            if (off || diag)
                throw Error(ErrorCode::InvalidArgument, "Q must equal diag(lambda) of the conditions");
        }

    const auto& lam = conditions.lambdas;
    std::vector<std::vector<double>> out(n, std::vector<double>(x_samples.size()));
    for (std::size_t s = 0; s < x_samples.size(); ++s) {
        const Complex x = x_samples[s];
        const auto f = detail::k_formula(pair, rho, x);

        // k_j(z) = delta_{0j} - sum_m res(j, m) / (z - lambda_m) in the diagonal gauge.
        Matrix<Complex> res(r, n);
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t m = 0; m < n; ++m) {
                Complex um = 0.0;
                for (std::size_t a = 0; a < n; ++a) um += f.u[a] * f.m[j](a, m);
                res(j, m) = f.c * um * f.w.w1[m];
            }

        for (std::size_t i = 0; i < n; ++i) {
            // q k and its z-derivative at lambda_i, both divided by q'(lambda_i).
            Complex spread = 0.0;
            for (std::size_t l = 0; l < n; ++l)
                if (l != i) spread += 1.0 / (lam[i] - lam[l]);
            Vector<Complex> g(r), dg(r);
            for (std::size_t j = 0; j < r; ++j) {
                g[j] = -res(j, i);
                dg[j] = (j == 0 ? 1.0 : 0.0) - res(j, i) * spread;
                for (std::size_t m = 0; m < n; ++m)
                    if (m != i) dg[j] -= res(j, m) / (lam[i] - lam[m]);
            }
            Matrix<Complex> b = b_matrix(rho, x, lam[i]);
            if (rho.kind() == Kind::Bessel) b *= 1.0 / (static_cast<double>(r) * lam[i]);
            const Vector<Complex> bg = b * g;
            double worst = 0.0;
            for (std::size_t j = 0; j < r; ++j)
                worst = std::max(worst, std::abs(dg[j] + bg[j] - conditions.alphas[i] * g[j]));
            out[i][s] = worst;
        }
    }
    return out;
}

std::vector<std::vector<double>> condition_residual(const SpectralData<Complex>& data,
                                                    const RhoPoly<Complex>& rho,
                                                    std::span<const Complex> x_samples) {
    return condition_residual(from_spectral_data(data), data, rho, x_samples);
}

}  // namespace bispec
