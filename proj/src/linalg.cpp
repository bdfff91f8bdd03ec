#include "bispec/linalg.hpp"

#include <algorithm>
#include <limits>

namespace bispec {

Vector<Complex> characteristic_polynomial(const Matrix<Complex>& a) {
    a.require_square("characteristic_polynomial");
    const std::size_t n = a.rows();
    Vector<Complex> c(n + 1);
    c[n] = 1.0;
    Matrix<Complex> m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m;
        for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
        c[n - k] = -(a * m).trace() / static_cast<double>(k);
    }
    return c;
}

bool lex_less(const Complex& a, const Complex& b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    if (std::abs(a.real() - b.real()) > 1e-9 * scale) return a.real() < b.real();
    return a.imag() < b.imag();
}

Vector<Complex> polynomial_roots(const Vector<Complex>& p, const EigenOptions& opts) {
    if (p.empty()) throw Error(ErrorCode::InvalidArgument, "empty polynomial");
    const std::size_t n = p.size() - 1;
    if (n == 0) return {};
    if (n == 1) return {-p[0] / p[1]};

    double bound = 0.0;
    for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(p[k] / p[n]));
    bound += 1.0;

    Vector<Complex> z(n);
    const Complex seed(0.4, 0.9);
    Complex w = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        z[k] = bound * 0.5 * w;
        w *= seed;
    }

    auto eval = [&](const Complex& t) { return polynomial_value<Complex>(p, t) / p[n]; };
    // Running-error bound for Horner: roots are accepted once p(z) is at rounding level.
    auto eval_noise = [&](const Complex& t) {
        double s = 0.0;
        double tk = 1.0;
        for (std::size_t k = 0; k <= n; ++k) {
            s += std::abs(p[k] / p[n]) * tk;
            tk *= std::abs(t);
        }
        return 64.0 * std::numeric_limits<double>::epsilon() * s;
    };

    for (int it = 0; it < opts.max_iterations; ++it) {
        bool done = true;
        for (std::size_t k = 0; k < n; ++k) {
            const Complex val = eval(z[k]);
            Complex den = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) den *= z[k] - z[j];
            if (den == Complex{}) den = std::numeric_limits<double>::epsilon();
            const Complex step = val / den;
            z[k] -= step;
            const bool small_step = std::abs(step) <= opts.tolerance * std::max(1.0, std::abs(z[k]));
            const bool at_noise = std::abs(val) <= eval_noise(z[k]);
            if (!(small_step || at_noise)) done = false;
        }
        if (done) {
            std::sort(z.begin(), z.end(), lex_less);
            return z;
        }
    }
    throw Error(ErrorCode::NoConvergence,
                "Durand-Kerner did not converge in " + std::to_string(opts.max_iterations) + " iterations");
}

Vector<Complex> eigenvalues(const Matrix<Complex>& m, const EigenOptions& opts) {
    m.require_square("eigenvalues");
    if (m.rows() > 32) throw Error(ErrorCode::InvalidArgument, "eigenvalues supports n <= 32");
    return polynomial_roots(characteristic_polynomial(m), opts);
}

Vector<Complex> eigenvalues(const Matrix<GaussianRational>&, const EigenOptions&) {
    throw Error(ErrorCode::ExactBackendUnsupported, "eigenvalues require the float backend");
}

}  // namespace bispec
