#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flagrig/pansu.hpp"
#include "flagrig/rng.hpp"

using namespace flagrig;

namespace {

// Direct pointwise evaluation of delta_{1/r} f_x delta_r through group
// arithmetic, the oracle for the symbolic Laurent data.
LieElement rescaled_direct(const PolyMapSpec& f, const GroupElement& x, const Rational& r,
                           const LieElement& u) {
    GroupElement xu = group_mul(x, exp(dilate(r, u)));
    GroupElement fx = exp(f.apply(log(GroupElement(x))));
    GroupElement fxu = exp(f.apply(log(xu)));
    return dilate(Rational(1) / r, log(group_mul(group_inv(fx), fxu)));
}

GradedMap dilation_map(int n, Field f, const Rational& r) {
    std::vector<Scalar> lambda;
    for (int i = 1; i <= n; ++i) lambda.push_back(Scalar(f, rational_pow(r, -i)));
    return ad_diag(n, lambda);
}

} // namespace

TEST_CASE("rescaling the identity map is constant in r") {
    const int n = 3;
    PolyMapSpec id = PolyMapSpec::identity(n, Field::R);
    Rng rng(81);
    GroupElement x = random_group(rng, n, Field::R, 9);
    RescaledFamily fam = rescale(id, x);
    CHECK_FALSE(fam.has_negative_r_powers());
    RealBasis basis(n, Field::R);
    for (int a = 0; a < basis.size(); ++a) CHECK(fam.coords[static_cast<size_t>(a)] ==
                                                 Poly::variable(1 + basis.size(), 1 + a));
}

TEST_CASE("rescaling a dilation map is constant in r") {
    const int n = 3;
    GradedMap d2 = dilation_map(n, Field::R, 2);
    PolyMapSpec f = PolyMapSpec::graded_affine(GroupElement(n, Field::R), d2);
    Rng rng(82);
    GroupElement x = random_group(rng, n, Field::R, 9);
    RescaledFamily fam = rescale(f, x);
    LieElement u = random_lie(rng, n, Field::R, 9);
    for (const Rational& r : {Rational(1), Rational(1, 2), Rational(1, 3)}) {
        CHECK(fam.eval(r, u) == d2.apply(u));
        CHECK(fam.eval(r, u) == rescaled_direct(f, x, r, u));
    }
}

TEST_CASE("rescaling a left translation cancels") {
    const int n = 4;
    Rng rng(83);
    GroupElement h = random_group(rng, n, Field::R, 9);
    PolyMapSpec f = PolyMapSpec::graded_affine(h, identity_graded_map(n, Field::R));
    GroupElement x = random_group(rng, n, Field::R, 9);
    RescaledFamily fam = rescale(f, x);
    RealBasis basis(n, Field::R);
    for (int a = 0; a < basis.size(); ++a)
        CHECK(fam.coords[static_cast<size_t>(a)] == Poly::variable(1 + basis.size(), 1 + a));
}

TEST_CASE("rescaled family agrees with direct composition at sample radii") {
    Rng rng(84);
    for (Field fl : {Field::R, Field::H}) {
        const int n = 3;
        AutCertificate cert = random_certificate(rng, n, fl, 9);
        GradedMap phi = construct_from_certificate(n, fl, cert);
        PolyMapSpec f = PolyMapSpec::graded_affine(random_group(rng, n, fl, 9), phi);
        GroupElement x = random_group(rng, n, fl, 9);
        RescaledFamily fam = rescale(f, x);
        for (const Rational& r : {Rational(1), Rational(1, 2), Rational(1, 3)}) {
            LieElement u = random_lie(rng, n, fl, 9);
            CHECK(fam.eval(r, u) == rescaled_direct(f, x, r, u));
        }
    }
}

TEST_CASE("graded affine maps differentiate to their automorphism part") {
    Rng rng(85);
    for (Field fl : {Field::R, Field::C, Field::H}) {
        const int n = 3;
        for (int t = 0; t < 5; ++t) {
            AutCertificate cert = random_certificate(rng, n, fl, 9);
            GradedMap phi = construct_from_certificate(n, fl, cert);
            GroupElement h = random_group(rng, n, fl, 9);
            PolyMapSpec f = PolyMapSpec::graded_affine(h, phi);
            GroupElement x = random_group(rng, n, fl, 9);
            CHECK(pansu_differential(f, x) == phi);
        }
    }
}

TEST_CASE("chain rule for graded affine maps") {
    Rng rng(86);
    const int n = 4;
    for (int t = 0; t < 5; ++t) {
        GradedMap phi1 = construct_from_certificate(n, Field::R, random_certificate(rng, n, Field::R, 9));
        GradedMap phi2 = construct_from_certificate(n, Field::R, random_certificate(rng, n, Field::R, 9));
        PolyMapSpec f = PolyMapSpec::graded_affine(random_group(rng, n, Field::R, 9), phi1);
        PolyMapSpec g = PolyMapSpec::graded_affine(random_group(rng, n, Field::R, 9), phi2);
        PolyMapSpec fg = PolyMapSpec::compose(f, g);
        GroupElement x = random_group(rng, n, Field::R, 9);
        GradedMap left = pansu_differential(fg, x);
        GroupElement gx = exp(g.apply(log(x)));
        GradedMap right = pansu_differential(f, gx).compose_after(pansu_differential(g, x));
        CHECK(left == right);
    }
}

TEST_CASE("contact shear differentiates to the expected shear matrix") {
    // p(t) = t^2, so the first-layer block is [[1, 2 y], [0, 1]] at base y.
    PolyMapSpec f = contact_shear_x({Rational(0), Rational(1)});
    RealBasis basis(3, Field::R);
    Rng rng(87);
    for (int t = 0; t < 5; ++t) {
        GroupElement x = random_group(rng, 3, Field::R, 9);
        GradedMap d = pansu_differential(f, x);
        Rational y = log(GroupElement(x)).coeff(2, 3).re();
        LieElement img = d.apply(LieElement::basis(3, Field::R, 2, 3));
        CHECK(img.coeff(1, 2).re() == 2 * y);
        CHECK(img.coeff(2, 3).re() == 1);
        CHECK(d.apply(LieElement::basis(3, Field::R, 1, 2)) == LieElement::basis(3, Field::R, 1, 2));
        CHECK(d.apply(LieElement::basis(3, Field::R, 1, 3)) == LieElement::basis(3, Field::R, 1, 3));
    }
}

TEST_CASE("float cross-check of the symbolic differential at small radii") {
    // The rescaled family converges to the differential at first order in r;
    // the deviation shrinks linearly and is below 1e-8 by r = 1e-10.
    PolyMapSpec f = contact_shear_x({Rational(1), Rational(0), Rational(1, 4)});
    Rng rng(88);
    GroupElement x = random_group(rng, 3, Field::R, 2);
    GradedMap d = pansu_differential(f, x);
    RealBasis basis(3, Field::R);
    LieElement u = random_lie(rng, 3, Field::R, 2);
    LieElement du = d.apply(u);
    auto deviation = [&](const Rational& r) {
        LieElement direct = rescaled_direct(f, x, r, u);
        double worst = 0;
        for (int a = 0; a < basis.size(); ++a) {
            double got = to_double(direct.real_coords(basis)[static_cast<size_t>(a)]);
            double want = to_double(du.real_coords(basis)[static_cast<size_t>(a)]);
            worst = std::max(worst, std::abs(got - want));
        }
        return worst;
    };
    double e3 = deviation(Rational(1, 1000));
    double e4 = deviation(Rational(1, 10000));
    CHECK(e4 <= 0.2 * e3 + 1e-12);
    CHECK(deviation(Rational(1) / rational_pow(Rational(10), 10)) < 1e-8);
}

TEST_CASE("a non-contact shear is rejected") {
    // Moving the first-layer coordinate without the center correction leaves a
    // negative power of r.
    RealBasis basis(3, Field::R);
    std::vector<Poly> coords;
    for (int a = 0; a < basis.size(); ++a) coords.push_back(Poly::variable(basis.size(), a));
    int vx = basis.index(1, 2, 0);
    int vy = basis.index(2, 3, 0);
    coords[static_cast<size_t>(vx)] =
        coords[static_cast<size_t>(vx)] +
        Poly::variable(basis.size(), vy) * Poly::variable(basis.size(), vy);
    PolyMapSpec f(3, Field::R, coords);
    Rng rng(89);
    GroupElement x = random_group(rng, 3, Field::R, 4);
    CHECK_THROWS_AS(pansu_differential(f, x), NotPansuDifferentiableError);
}

TEST_CASE("pullback through the differential") {
    const int n = 3;
    std::vector<Scalar> lambda{Scalar(Field::R, 2), Scalar(Field::R, 3), Scalar(Field::R, 7)};
    GradedMap phi = ad_diag(n, lambda);
    PolyMapSpec f = PolyMapSpec::graded_affine(GroupElement(n, Field::R), phi);
    Rng rng(90);
    GroupElement x = random_group(rng, n, Field::R, 9);
    CHECK(pansu_pullback(f, x, theta(n, Field::R, 1, 2)) ==
          theta(n, Field::R, 1, 2).scale(Rational(2, 3)));
    CHECK(pansu_pullback(PolyMapSpec::identity(n, Field::R), x, theta(n, Field::R, 1, 3)) ==
          theta(n, Field::R, 1, 3));
}

TEST_CASE("tau as a map pulls omega_plus to a signed omega_minus") {
    const int n = 4;
    PolyMapSpec f = PolyMapSpec::graded_affine(GroupElement(n, Field::R), tau_graded_map(n, Field::R));
    Rng rng(91);
    GroupElement x = random_group(rng, n, Field::R, 9);
    LeftInvariantForm image = pansu_pullback(f, x, omega_plus(n));
    bool plus = image == omega_minus(n);
    bool minus = image == omega_minus(n).scale(-1);
    CHECK((plus || minus));
}

TEST_CASE("pullback is an algebra map") {
    const int n = 3;
    Rng rng(92);
    GradedMap phi = construct_from_certificate(n, Field::R, random_certificate(rng, n, Field::R, 9));
    PolyMapSpec f = PolyMapSpec::graded_affine(random_group(rng, n, Field::R, 9), phi);
    GroupElement x = random_group(rng, n, Field::R, 9);
    for (int t = 0; t < 10; ++t) {
        GradingInfo info = grading_info(n, Field::R);
        LeftInvariantForm a(n, Field::R, 1), b(n, Field::R, 1);
        a.add_term({static_cast<int>(rng.next_int(0, info.ndim - 1))}, random_rational(rng, 9));
        b.add_term({static_cast<int>(rng.next_int(0, info.ndim - 1))}, random_rational(rng, 9));
        CHECK(pansu_pullback(f, x, wedge(a, b)) ==
              wedge(pansu_pullback(f, x, a), pansu_pullback(f, x, b)));
    }
}

namespace {

BumpSpec centered_bump(int dim) {
    BumpSpec b;
    b.center.assign(static_cast<size_t>(dim), Rational(0));
    b.box_halfwidth.assign(static_cast<size_t>(dim), Rational(1));
    b.support_halfwidth.assign(static_cast<size_t>(dim), Rational(9, 10));
    return b;
}

LeftInvariantForm heisenberg_alpha() {
    // theta^{(2,3)} ^ theta^{(1,3)}: closed, degree 2, weight -3.
    return wedge(theta(3, Field::R, 2, 3), theta(3, Field::R, 1, 3));
}

} // namespace

TEST_CASE("pullback identity: hypotheses are enforced") {
    PolyMapSpec id = PolyMapSpec::identity(3, Field::R);
    LeftInvariantForm bad = theta(3, Field::R, 1, 2);
    CHECK_THROWS_AS(verify_pullback_identity(id, bad, bad, centered_bump(3), 4, 1), HypothesisError);

    BumpSpec wide = centered_bump(3);
    wide.support_halfwidth[0] = Rational(2);
    CHECK_THROWS_AS(verify_pullback_identity(id, heisenberg_alpha(), one_form_constant(3, Field::R),
                                             wide, 4, 1),
                    HypothesisError);
}

TEST_CASE("pullback identity: graded affine maps give tiny residuals") {
    Rng rng(93);
    GradedMap phi = construct_from_certificate(3, Field::R, random_certificate(rng, 3, Field::R, 5));
    PolyMapSpec f = PolyMapSpec::graded_affine(random_group(rng, 3, Field::R, 5), phi);
    auto report = verify_pullback_identity(f, heisenberg_alpha(), one_form_constant(3, Field::R),
                                           centered_bump(3), 8, 1);
    for (const auto& level : report.levels) CHECK(level.residual < 1e-12);
}

TEST_CASE("pullback identity: the contact shear family converges quadratically") {
    PolyMapSpec f = PolyMapSpec::compose(contact_shear_y({Rational(0), Rational(1)}),
                                         contact_shear_x({Rational(0), Rational(0), Rational(1)}));
    auto report = verify_pullback_identity(f, heisenberg_alpha(), one_form_constant(3, Field::R),
                                           centered_bump(3), 4, 3);
    REQUIRE(report.levels.size() == 4);
    CHECK(report.levels[0].residual > 1e-10);
    for (double ratio : report.ratios) CHECK(ratio <= 0.3);
}
