#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace bispec;
using namespace bispec::testing;
using GR = GaussianRational;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

CMPair<Complex> scalar_pair(Complex p, Complex q) { return {Matrix<Complex>{{p}}, Matrix<Complex>{{q}}}; }

TangentVector<Complex> random_tangent(std::size_t n, Rng& rng) {
    TangentVector<Complex> t{Matrix<Complex>(n, n), Matrix<Complex>(n, n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            t.dP(i, j) = random_complex(rng, 1.0);
            t.dQ(i, j) = random_complex(rng, 1.0);
        }
    return t;
}

}  // namespace

TEST_CASE("scalar examples") {
    const Complex g(0.5, 0.25), l(1.5, -0.5);
    const auto kp = beta_kp(scalar_pair(g, l));
    CHECK(kp.P(0, 0) == l);
    CHECK(kp.Q(0, 0) == g);

    const auto ai = beta_airy(scalar_pair(g, l), RhoPoly<Complex>::airy2());
    CHECK(ai.P(0, 0) == g);
    CHECK(std::abs(ai.Q(0, 0) - (g * g - l)) < 1e-15);

    const auto be = beta_bessel(scalar_pair(g, l), RhoPoly<Complex>::bessel2());
    const Complex qhat = (4.0 * l * l * g * g - 2.0 * l * g - 1.0) / l;
    CHECK(std::abs(be.Q(0, 0) - qhat) < 1e-14);
    CHECK(std::abs(be.P(0, 0) - l * g / qhat) < 1e-14);
}

TEST_CASE("involutions are involutive and transpose the commutator, exactly") {
    Rng rng(41);
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto pair = random_exact_pair(n, 40 + n);
        const std::vector<Involution<GR>> maps{Involution<GR>::kp(),
                                               Involution<GR>::of(random_exact_rho(Kind::Airy, 2 + n % 3, rng)),
                                               Involution<GR>::of(random_exact_rho(Kind::Bessel, 2 + n % 2, rng))};
        for (const auto& map : maps) {
            if (map.kind == InvolutionKind::Bessel && is_singular(pair.Q)) continue;
            const auto image = map(pair);
            CHECK(map(image) == pair);
            CHECK(commutator(image.P, image.Q) == commutator(pair.P, pair.Q).transpose());
            const auto f = validate_and_factor(pair);
            const auto fi = validate_and_factor(image);
            // Output factor is (w2, w1) up to the scale freedom.
            CHECK(outer(fi.w1, fi.w2) == outer(f.w2, f.w1));
        }
    }
}

TEST_CASE("float involutivity") {
    Rng rng(42);
    const auto pair = scramble(from_spectral_data(spectral_data_away_from_zero(4, 3)), rng);
    for (const auto& map : {Involution<Complex>::kp(), Involution<Complex>::of(random_rho(Kind::Airy, 3, rng)),
                            Involution<Complex>::of(random_rho(Kind::Bessel, 3, rng))}) {
        const auto back = map(map(pair));
        CHECK(max_rel_error(back.P, pair.P) < 1e-9);
        CHECK(max_rel_error(back.Q, pair.Q) < 1e-9);
        const auto image = map(pair);
        CHECK(max_rel_error(commutator(image.P, image.Q), commutator(pair.P, pair.Q).transpose()) < 1e-10);
    }
}

TEST_CASE("bessel domain failures") {
    const auto rho = RhoPoly<Complex>::bessel2();
    CHECK(code_of([&] { beta_bessel(scalar_pair(1.0, 0.0), rho); }) == ErrorCode::SingularQ);
    // rho(t) = t^2 - t - 2 = (t - 2)(t + 1) vanishes at 2 lambda gamma = 2.
    const RhoPoly<Complex> split(Kind::Bessel, {2.0, 1.0});
    CHECK(code_of([&] { beta_bessel(scalar_pair(1.0, 1.0), split); }) == ErrorCode::SingularRho);
    const RhoPoly<GR> esplit(Kind::Bessel, {GR(2), GR(1)});
    const CMPair<GR> one{Matrix<GR>{{GR(1)}}, Matrix<GR>{{GR(1)}}};
    CHECK(code_of([&] { beta_bessel(one, esplit); }) == ErrorCode::SingularRho);
    CHECK(code_of([&] { beta_airy(scalar_pair(1.0, 1.0), rho); }) == ErrorCode::InvalidArgument);
    Involution<Complex> missing{InvolutionKind::Airy, std::nullopt};
    CHECK(code_of([&] { missing(scalar_pair(1.0, 1.0)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("involution names") {
    CHECK(parse_involution("kp") == InvolutionKind::KP);
    CHECK(parse_involution("airy") == InvolutionKind::Airy);
    CHECK(parse_involution("bessel") == InvolutionKind::Bessel);
    CHECK(code_of([] { parse_involution("fourier"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("symplectic form") {
    Rng rng(43);
    const auto t1 = random_tangent(3, rng), t2 = random_tangent(3, rng);
    CHECK(symplectic_form(t1, t1) == Complex(0.0));
    CHECK(std::abs(symplectic_form(t1, t2) + symplectic_form(t2, t1)) < 1e-14);
    const TangentVector<Complex> a{Matrix<Complex>{{1.0}}, Matrix<Complex>{{0.0}}};
    const TangentVector<Complex> b{Matrix<Complex>{{0.0}}, Matrix<Complex>{{1.0}}};
    CHECK(symplectic_form(a, b) == Complex(1.0));
    CHECK(code_of([&] { symplectic_form(a, t1); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("pushforward matches analytic differentials") {
    Rng rng(44);
    const auto pair = scramble(random_pair(3, 8), rng);
    const auto t = random_tangent(3, rng);

    const auto kp = pushforward(Involution<Complex>::kp(), pair, t);
    CHECK(max_rel_error(kp.dP, t.dQ.transpose()) < 1e-9);
    CHECK(max_rel_error(kp.dQ, t.dP.transpose()) < 1e-9);

    const auto rho = RhoPoly<Complex>::airy2();
    const Matrix<Complex> pt = pair.P.transpose(), dpt = t.dP.transpose();
    const Matrix<Complex> exact_dq = pt * dpt + dpt * pt - t.dQ.transpose();
    const auto error_at = [&](double h) {
        return (pushforward(Involution<Complex>::of(rho), pair, t, h).dQ - exact_dq).max_abs();
    };
    CHECK(error_at(1e-5) < 1e-6);

    // rho = t^3 has an O(h^2) central-difference error: halving h quarters it.
    const RhoPoly<Complex> cubic(Kind::Airy, {0.0, 0.0, 0.0});
    const Matrix<Complex> p2 = pt * pt;
    const Matrix<Complex> exact3 = p2 * dpt + pt * dpt * pt + dpt * p2 - t.dQ.transpose();
    const double e1 = (pushforward(Involution<Complex>::of(cubic), pair, t, 1e-2).dQ - exact3).max_abs();
    const double e2 = (pushforward(Involution<Complex>::of(cubic), pair, t, 5e-3).dQ - exact3).max_abs();
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("locus tangents preserve the rank condition to first order") {
    Rng rng(45);
    const auto pair = scramble(random_pair(3, 21), rng);
    const auto form = canonical_form(pair);
    const auto t = random_locus_tangent(pair, form, 5);
    const double h = 1e-6;
    const CMPair<Complex> moved{pair.P + h * t.dP, pair.Q + h * t.dQ};
    // Off-locus directions leave an O(h) residual; on-locus ones O(h^2).
    const Matrix<Complex> m = commutator(moved.P, moved.Q) - Matrix<Complex>::identity(3);
    const auto f = validate_and_factor(moved, 1e-3);
    CHECK((m + outer(f.w1, f.w2)).max_abs() < 1e-9);
}

TEST_CASE("antisymplecticity") {
    Rng rng(46);
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto pair = scramble(from_spectral_data(spectral_data_away_from_zero(n, 60 + n)), rng);
        CHECK(antisymplectic_residual(Involution<Complex>::kp(), pair, 20, n) <= 1e-8);
        CHECK(antisymplectic_residual(Involution<Complex>::of(random_rho(Kind::Airy, 3, rng)), pair, 20, n) <= 1e-6);
        CHECK(antisymplectic_residual(Involution<Complex>::of(RhoPoly<Complex>::bessel2()), pair, 20, n) <= 1e-6);
    }
}

TEST_CASE("a symplectic map fails the antisymplectic check") {
    // Negative control: the identity map preserves omega, so the residual is about 2.
    Rng rng(47);
    const auto pair = scramble(random_pair(2, 3), rng);
    const auto form = canonical_form(pair);
    const auto t1 = random_locus_tangent(pair, form, 1), t2 = random_locus_tangent(pair, form, 2);
    const Complex w = symplectic_form(t1, t2);
    const auto twice = Involution<Complex>::kp();
    const auto p1 = pushforward(twice, beta_kp(pair), pushforward(twice, pair, t1));
    const auto p2 = pushforward(twice, beta_kp(pair), pushforward(twice, pair, t2));
    CHECK(std::abs(symplectic_form(p1, p2) + w) / std::max(1.0, std::abs(w)) > 1.0);
}
