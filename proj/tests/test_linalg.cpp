#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace bispec;
using namespace bispec::testing;
using GR = GaussianRational;

namespace {

// Independent oracle: Laplace expansion along the first row.
template <class T>
T cofactor_det(const Matrix<T>& m) {
    const std::size_t n = m.rows();
    if (n == 1) return m(0, 0);
    T sum = from_int<T>(0);
    for (std::size_t c = 0; c < n; ++c) {
        Matrix<T> minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0, k = 0; j < n; ++j)
                if (j != c) minor(i - 1, k++) = m(i, j);
        const T term = m(0, c) * cofactor_det(minor);
        sum = (c % 2 == 0) ? sum + term : sum - term;
    }
    return sum;
}

template <class T>
Matrix<T> random_matrix(std::size_t n, Rng& rng);

template <>
Matrix<Complex> random_matrix<Complex>(std::size_t n, Rng& rng) {
    Matrix<Complex> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = random_complex(rng, 3.0);
    return m;
}

template <>
Matrix<GR> random_matrix<GR>(std::size_t n, Rng& rng) {
    Matrix<GR> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = random_gaussian_rational(rng, 10, 3);
    return m;
}

Matrix<GR> to_exact_integers(const Matrix<Complex>& m) {
    Matrix<GR> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = GR(mpq_class(m(i, j).real()), mpq_class(m(i, j).imag()));
    return out;
}

}  // namespace

TEST_CASE("gaussian rationals are a field") {
    const GR a(mpq_class(1, 2), mpq_class(-3, 4));
    const GR b(mpq_class(5), mpq_class(2, 3));
    CHECK((a * b) / b == a);
    CHECK((a + b) - b == a);
    CHECK(a * a.conj() == GR(a.norm()));
    CHECK(GR::i() * GR::i() == GR(-1));
    CHECK_THROWS_AS(a / GR(), Error);
}

TEST_CASE("rational strings round-trip and reject junk") {
    CHECK(rational_to_string(mpq_class(6, 4)) == "3/2");
    CHECK(rational_to_string(mpq_class(-7)) == "-7");
    CHECK(rational_from_string("-10/4") == mpq_class(-5, 2));
    CHECK_THROWS_AS(rational_from_string("1/0"), Error);
    CHECK_THROWS_AS(rational_from_string("abc"), Error);
    CHECK_THROWS_AS(rational_from_string(""), Error);
}

TEST_CASE("determinant examples") {
    CHECK(determinant(Matrix<Complex>::identity(2)) == Complex(1.0));
    CHECK(std::abs(determinant(Matrix<Complex>::diagonal(Vector<Complex>{2.0, Complex(0, 3)})) - Complex(0, 6)) < 1e-15);
    CHECK(determinant(Matrix<GR>::diagonal(Vector<GR>{GR(2), GR(mpq_class(0), mpq_class(3))})) ==
          GR(mpq_class(0), mpq_class(6)));
    CHECK_THROWS_AS(determinant(Matrix<Complex>(2, 3)), Error);
}

TEST_CASE("exact determinant matches cofactor expansion") {
    Rng rng(11);
    for (std::size_t n = 1; n <= 5; ++n)
        for (int k = 0; k < 3; ++k) {
            const auto m = random_matrix<GR>(n, rng);
            CHECK(determinant(m) == cofactor_det(m));
        }
}

TEST_CASE("determinant is multiplicative and transpose-invariant") {
    Rng rng(12);
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto a = random_matrix<GR>(n, rng), b = random_matrix<GR>(n, rng);
        CHECK(determinant(a * b) == determinant(a) * determinant(b));
        CHECK(determinant(a.transpose()) == determinant(a));
    }
    for (std::size_t n = 1; n <= 8; ++n) {
        const auto a = random_matrix<Complex>(n, rng), b = random_matrix<Complex>(n, rng);
        const Complex lhs = determinant(a * b), rhs = determinant(a) * determinant(b);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
        CHECK(std::abs(determinant(a.transpose()) - determinant(a)) <= 1e-10 * std::abs(determinant(a)));
    }
}

TEST_CASE("inverse examples and multiply-back") {
    CHECK(inverse(Matrix<Complex>::identity(3)) == Matrix<Complex>::identity(3));
    CHECK(inverse(Matrix<GR>::diagonal(Vector<GR>{GR(2), GR(4)})) ==
          Matrix<GR>::diagonal(Vector<GR>{GR(mpq_class(1, 2)), GR(mpq_class(1, 4))}));
    Rng rng(13);
    for (int k = 0; k < 5; ++k) {
        const auto m = random_matrix<Complex>(5, rng);
        CHECK((m * inverse(m) - Matrix<Complex>::identity(5)).max_abs() <= 1e-12);
        const auto e = random_matrix<GR>(4, rng);
        CHECK(e * inverse(e) == Matrix<GR>::identity(4));
    }
}

TEST_CASE("singular matrices are reported") {
    const Matrix<Complex> m{{1.0, 2.0}, {2.0, 4.0}};
    CHECK(is_singular(m));
    try {
        inverse(m);
        FAIL("expected SingularMatrix");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularMatrix);
    }
    const Matrix<GR> z{{GR(1), GR(1)}, {GR(1), GR(1)}};
    CHECK_THROWS_AS(inverse(z), Error);
    CHECK(!is_singular(Matrix<Complex>{{1e-3, 0.0}, {0.0, 1e-3}}));
}

TEST_CASE("solve agrees with the inverse") {
    Rng rng(14);
    const auto a = random_matrix<Complex>(4, rng);
    Vector<Complex> b(4);
    for (auto& v : b) v = random_complex(rng, 1.0);
    const Vector<Complex> x = solve(a, b);
    const Vector<Complex> ax = a * x;
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(ax[i] - b[i]) < 1e-12);
    CHECK_THROWS_AS(solve(a, Vector<Complex>(3)), Error);
}

TEST_CASE("matrix polynomial examples") {
    Rng rng(15);
    const auto m = random_matrix<GR>(3, rng);
    const Vector<GR> square{GR(0), GR(0), GR(1)};
    CHECK(matrix_polynomial<GR>(square, m) == m * m);
    const Vector<GR> five{GR(5)};
    CHECK(matrix_polynomial<GR>(five, m) == Matrix<GR>::scalar(3, GR(5)));
    const Vector<GR> rho{GR(-1), GR(-1), GR(1)};
    CHECK(matrix_polynomial<GR>(rho, Matrix<GR>::diagonal(Vector<GR>{GR(2), GR(3)})) ==
          Matrix<GR>::diagonal(Vector<GR>{GR(1), GR(5)}));
    CHECK_THROWS_AS(matrix_polynomial<GR>(Vector<GR>{}, m), Error);
}

TEST_CASE("eigenvalue examples") {
    const auto d = eigenvalues(Matrix<Complex>::diagonal(Vector<Complex>{3.0, 1.0, 2.0}));
    REQUIRE(d.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(d[i] - Complex(static_cast<double>(i + 1))) < 1e-12);

    const auto rot = eigenvalues(Matrix<Complex>{{0.0, 1.0}, {-1.0, 0.0}});
    CHECK(std::abs(rot[0] - Complex(0, -1)) < 1e-12);
    CHECK(std::abs(rot[1] - Complex(0, 1)) < 1e-12);

    CHECK_THROWS_AS(eigenvalues(Matrix<GR>::identity(2)), Error);
    CHECK_THROWS_AS(eigenvalues(Matrix<Complex>::identity(33)), Error);
}

TEST_CASE("eigenvalues reproduce the determinant") {
    Rng rng(16);
    for (int k = 0; k < 5; ++k) {
        const auto m = random_matrix<Complex>(6, rng);
        const auto ev = eigenvalues(m);
        for (int s = 0; s < 10; ++s) {
            const Complex x = random_complex(rng, 5.0);
            Complex prod = 1.0;
            for (const auto& l : ev) prod *= x - l;
            const Complex det = determinant(Matrix<Complex>::scalar(6, x) - m);
            CHECK(std::abs(prod - det) <= 1e-8 * std::abs(det));
        }
        const auto evt = eigenvalues(m.transpose());
        for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - evt[i]) <= 1e-8 * std::max(1.0, std::abs(ev[i])));
        CHECK(std::is_sorted(ev.begin(), ev.end(), lex_less));
    }
}

TEST_CASE("characteristic polynomial of a companion matrix") {
    // roots 1, 2, 3: t^3 - 6t^2 + 11t - 6
    const Matrix<Complex> c{{0.0, 0.0, 6.0}, {1.0, 0.0, -11.0}, {0.0, 1.0, 6.0}};
    const auto p = characteristic_polynomial(c);
    const Vector<Complex> expect{-6.0, 11.0, -6.0, 1.0};
    REQUIRE(p.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(p[i] - expect[i]) < 1e-12);
    const auto roots = polynomial_roots(p);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(roots[i] - Complex(static_cast<double>(i + 1))) < 1e-10);
}

TEST_CASE("float and exact backends agree on gaussian-integer inputs") {
    Rng rng(17);
    for (std::size_t n = 1; n <= 6; ++n) {
        Matrix<Complex> f(n, n);
        std::uniform_int_distribution<int> e(-10, 10);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const int re = e(rng);
                f(i, j) = Complex(re, e(rng));
            }
        const Matrix<GR> x = to_exact_integers(f);
        const Complex df = determinant(f);
        const Complex dx = determinant(x).to_complex();
        CHECK(std::abs(df - dx) <= 1e-10 * std::max(1.0, std::abs(dx)));
        if (!is_singular(x)) CHECK(max_rel_error(inverse(f), to_float(inverse(x))) <= 1e-10);
        CHECK(max_rel_error(f * f, to_float(x * x)) == 0.0);
    }
}

TEST_CASE("matrix shape errors") {
    const Matrix<Complex> a(2, 3), b(2, 3);
    CHECK_THROWS_AS(a * b, Error);
    CHECK_THROWS_AS(a.trace(), Error);
    CHECK_THROWS_AS(a + Matrix<Complex>(3, 2), Error);
}
