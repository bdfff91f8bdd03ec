#include "bispec/cm_pair.hpp"

#include <limits>
#include <random>

namespace bispec {
namespace {

// Partial-pivoting elimination without a singularity guard; inverse iteration
// deliberately solves against a nearly singular shifted matrix.
Vector<Complex> solve_shifted(Matrix<Complex> a, Vector<Complex> b) {
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = detail::pivot_row(a, k);
        detail::swap_rows(a, p, k);
        std::swap(b[p], b[k]);
        if (a(k, k) == Complex{}) a(k, k) = std::numeric_limits<double>::epsilon();
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    Vector<Complex> x(n);
    for (std::size_t k = n; k-- > 0;) {
        Complex s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
        x[k] = s / a(k, k);
    }
    return x;
}

void normalize(Vector<Complex>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    for (auto& x : v) x /= m;
}

Vector<Complex> eigenvector(const Matrix<Complex>& q, const Complex& lambda) {
    const std::size_t n = q.rows();
    const Complex shift = lambda + Complex(1e-10, 1e-10) * std::max(1.0, std::abs(lambda));
    const Matrix<Complex> shifted = q - Matrix<Complex>::scalar(n, shift);
    Vector<Complex> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = Complex(1.0, 0.1 * static_cast<double>(i));
    for (int step = 0; step < 3; ++step) {
        y = solve_shifted(shifted, y);
        normalize(y);
    }
    return y;
}

}  // namespace

CanonicalForm canonical_form(const CMPair<Complex>& pair) {
    const RankOneFactor<Complex> f = validate_and_factor(pair);
    const std::size_t n = pair.size();

    Vector<Complex> lambdas;
    try {
        lambdas = eigenvalues(pair.Q);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoConvergence) throw;
        throw Error(ErrorCode::NonSemisimpleQ, "eigenvalues of Q did not separate");
    }
    try {
        require_distinct(lambdas);
    } catch (const Error&) {
        throw Error(ErrorCode::NonSemisimpleQ, "Q has colliding eigenvalues");
    }

    Matrix<Complex> g(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const Vector<Complex> y = eigenvector(pair.Q, lambdas[k]);
        for (std::size_t i = 0; i < n; ++i) g(i, k) = y[i];
    }
    Matrix<Complex> ginv;
    try {
        ginv = inverse(g);
    } catch (const Error&) {
        throw Error(ErrorCode::NonSemisimpleQ, "eigenvectors of Q are dependent");
    }
    // A defective Q splits its repeated root by ~sqrt(eps), which can pass the gap test;
    // the eigenvector basis then becomes numerically dependent.
    if (g.max_abs() * ginv.max_abs() > 1e6)
        throw Error(ErrorCode::NonSemisimpleQ, "eigenvector basis of Q is ill-conditioned");

    // Diagonal gauge: [P', diag(lambda)] = I - w1' w2'^T forces w1'_i w2'_i = 1.
    const Matrix<Complex> pd = ginv * pair.P * g;
    const Vector<Complex> w1d = ginv * f.w1;
    Vector<Complex> scale(n);
    for (std::size_t k = 0; k < n; ++k) scale[k] = w1d[k];

    CanonicalForm out{{lambdas, Vector<Complex>(n)}, g * Matrix<Complex>::diagonal(scale)};
    for (std::size_t i = 0; i < n; ++i) {
        Complex alpha = pd(i, i);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) alpha += 1.0 / (lambdas[i] - lambdas[j]);
        out.data.alphas[i] = alpha;
    }
    return out;
}

SpectralData<Complex> canonicalize(const CMPair<Complex>& pair) { return canonical_form(pair).data; }

SpectralData<Complex> canonicalize(const CMPair<GaussianRational>&) {
    throw Error(ErrorCode::ExactBackendUnsupported, "canonicalize requires the float backend");
}

SpectralData<Complex> random_spectral_data(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> box(-5.0, 5.0);
    SpectralData<Complex> data;
    while (data.lambdas.size() < n) {
        const Complex c(box(gen), box(gen));
        bool ok = true;
        for (const auto& l : data.lambdas) ok = ok && std::abs(l - c) >= 0.1;
        if (ok) data.lambdas.push_back(c);
    }
    for (std::size_t i = 0; i < n; ++i) data.alphas.emplace_back(box(gen), box(gen));
    return data;
}

CMPair<Complex> random_pair(std::size_t n, std::uint64_t seed) {
    return from_spectral_data(random_spectral_data(n, seed));
}

SpectralData<GaussianRational> random_exact_spectral_data(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "n must be positive");
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<long> coord(-5, 5);
    std::uniform_int_distribution<long> num(-8, 8);
    std::uniform_int_distribution<long> den(1, 4);
    SpectralData<GaussianRational> data;
    while (data.lambdas.size() < n) {
        GaussianRational c(mpq_class(coord(gen)), mpq_class(coord(gen)));
        bool fresh = true;
        for (const auto& l : data.lambdas) fresh = fresh && !(l == c);
        if (fresh) data.lambdas.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < n; ++i) {
        mpq_class re(num(gen), den(gen));
        mpq_class im(num(gen), den(gen));
        data.alphas.emplace_back(re, im);
    }
    return data;
}

CMPair<GaussianRational> random_exact_pair(std::size_t n, std::uint64_t seed) {
    const auto data = random_exact_spectral_data(n, seed);
    std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_int_distribution<long> entry(-1, 1);
    Matrix<GaussianRational> lower = Matrix<GaussianRational>::identity(n);
    Matrix<GaussianRational> upper = Matrix<GaussianRational>::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            lower(i, j) = GaussianRational(entry(gen));
            upper(j, i) = GaussianRational(entry(gen));
        }
    return conjugate(from_spectral_data(data), lower * upper);
}

}  // namespace bispec
