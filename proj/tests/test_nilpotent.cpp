#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagrig/nilpotent.hpp"
#include "flagrig/rng.hpp"

using namespace flagrig;

namespace {

LieElement X(int n, Field f, int i, int j) { return LieElement::basis(n, f, i, j); }

// Conjugation oracle for dilations: g_r a g_r^{-1} with g_r = diag(r^{-1},...,r^{-n}).
LieElement dilate_by_conjugation(const Rational& r, const LieElement& a) {
    const int n = a.n();
    std::vector<Scalar> d, dinv;
    for (int i = 1; i <= n; ++i) {
        d.push_back(Scalar(a.field(), rational_pow(r, -i)));
        dinv.push_back(Scalar(a.field(), rational_pow(r, i)));
    }
    return LieElement::from_matrix(Mat::diagonal(d) * a.to_matrix() * Mat::diagonal(dinv));
}

// Truncated series oracle for the exponential.
Mat exp_series_oracle(const LieElement& a) {
    const int n = a.n();
    Mat m = Mat::identity(n, a.field());
    Mat term = Mat::identity(n, a.field());
    Rational fact(1);
    for (int k = 1; k < n; ++k) {
        term = term * a.to_matrix();
        fact *= k;
        m = m + term.scale(Rational(1) / fact);
    }
    return m;
}

} // namespace

TEST_CASE("bracket on matrix units") {
    const int n = 4;
    CHECK(bracket(X(n, Field::R, 1, 2), X(n, Field::R, 2, 3)) == X(n, Field::R, 1, 3));
    CHECK(bracket(X(n, Field::R, 1, 2), X(n, Field::R, 3, 4)).is_zero());
    // [X_0, X_1] = -Y_1 in the n=4 dictionary X_0 = X_23, X_1 = X_12, Y_1 = X_13.
    LieElement lhs = bracket(X(n, Field::R, 2, 3), X(n, Field::R, 1, 2));
    CHECK(lhs == X(n, Field::R, 1, 3).scale(-1));
}

TEST_CASE("bracket equals the dense matrix commutator") {
    Rng rng(20);
    for (Field f : {Field::R, Field::C, Field::H}) {
        for (int t = 0; t < 20; ++t) {
            LieElement a = random_lie(rng, 5, f, 30);
            LieElement b = random_lie(rng, 5, f, 30);
            Mat am = a.to_matrix(), bm = b.to_matrix();
            CHECK(bracket(a, b) == LieElement::from_matrix(am * bm - bm * am));
        }
    }
}

TEST_CASE("bracket errors on mismatched inputs") {
    CHECK_THROWS_AS(bracket(X(3, Field::R, 1, 2), X(4, Field::R, 1, 2)), DimensionMismatchError);
    CHECK_THROWS_AS(bracket(X(3, Field::R, 1, 2), X(3, Field::C, 1, 2)), DimensionMismatchError);
}

TEST_CASE("dilation scales layer m by r^m") {
    CHECK(dilate(2, X(4, Field::R, 1, 3)) == X(4, Field::R, 1, 3).scale(4));
    Rng rng(21);
    for (Field f : {Field::R, Field::C, Field::H}) {
        LieElement a = random_lie(rng, 4, f, 30);
        CHECK(dilate(1, a) == a);
        Rational r = random_positive_rational_le_one(rng, 20);
        CHECK(dilate(r, a) == dilate_by_conjugation(r, a));
        Rational s = random_positive_rational_le_one(rng, 20);
        CHECK(dilate(r, dilate(s, a)) == dilate(r * s, a));
    }
    CHECK_THROWS_AS(dilate(0, X(3, Field::R, 1, 2)), DomainError);
}

TEST_CASE("dilation is a Lie algebra automorphism") {
    Rng rng(22);
    for (int t = 0; t < 30; ++t) {
        LieElement a = random_lie(rng, 5, Field::R, 30);
        LieElement b = random_lie(rng, 5, Field::R, 30);
        Rational r = random_positive_rational_le_one(rng, 10);
        CHECK(dilate(r, bracket(a, b)) == bracket(dilate(r, a), dilate(r, b)));
    }
}

TEST_CASE("exponential of a single root vector") {
    LieElement a = X(3, Field::R, 1, 2).scale(Rational(7, 2));
    Mat expected = Mat::identity(3, Field::R);
    expected.at(0, 1) = Scalar(Field::R, Rational(7, 2));
    CHECK(exp(a).matrix() == expected);
}

TEST_CASE("exp(X_12 + X_23) picks up the half term") {
    LieElement a = X(3, Field::R, 1, 2) + X(3, Field::R, 2, 3);
    CHECK(exp(a).matrix() == exp_series_oracle(a));
    Mat expected = Mat::identity(3, Field::R);
    expected.at(0, 1) = Scalar(Field::R, 1);
    expected.at(1, 2) = Scalar(Field::R, 1);
    expected.at(0, 2) = Scalar(Field::R, Rational(1, 2));
    CHECK(exp(a).matrix() == expected);
}

TEST_CASE("log of the identity is zero") {
    CHECK(log(GroupElement(4, Field::H)).is_zero());
}

TEST_CASE("exp/log roundtrip on random elements") {
    Rng rng(23);
    for (Field f : {Field::R, Field::C, Field::H}) {
        for (int n : {3, 4, 5}) {
            for (int t = 0; t < 20; ++t) {
                LieElement a = random_lie(rng, n, f, 50);
                CHECK(log(exp(a)) == a);
                GroupElement g = random_group(rng, n, f, 50);
                CHECK(exp(log(g)) == g);
            }
        }
    }
}

TEST_CASE("group multiplication and inverse") {
    const int n = 3;
    GroupElement g = exp(X(n, Field::R, 1, 2));
    GroupElement h = exp(X(n, Field::R, 2, 3));
    Mat expected = Mat::identity(n, Field::R);
    expected.at(0, 1) = Scalar(Field::R, 1);
    expected.at(1, 2) = Scalar(Field::R, 1);
    expected.at(0, 2) = Scalar(Field::R, 1);
    CHECK(group_mul(g, h).matrix() == expected);
    CHECK(group_mul(g, GroupElement(n, Field::R)) == g);
    CHECK(group_inv(g).matrix() == exp(X(n, Field::R, 1, 2).scale(-1)).matrix());

    Rng rng(24);
    for (Field f : {Field::R, Field::C, Field::H}) {
        GroupElement a = random_group(rng, 4, f, 50);
        CHECK(group_mul(a, group_inv(a)) == GroupElement(4, f));
        CHECK(group_mul(group_inv(a), a) == GroupElement(4, f));
    }
}

TEST_CASE("tau entrywise formula") {
    // (tau A)_{ij} = -conj(A)_{n-j+1,n-i+1}, applied entry by entry.
    const int n = 4;
    CHECK(tau(X(n, Field::R, 1, 2)) == X(n, Field::R, 3, 4).scale(-1));
    Rng rng(25);
    for (Field f : {Field::R, Field::C, Field::H}) {
        LieElement a = random_lie(rng, n, f, 30);
        LieElement expected(n, f);
        for (const auto& [st, v] : a.coeffs())
            expected.set_coeff(n - st.second + 1, n - st.first + 1, -v.conjugate());
        CHECK(tau(a) == expected);
        CHECK(tau(tau(a)) == a);
    }
}

TEST_CASE("tau preserves brackets") {
    Rng rng(26);
    for (Field f : {Field::R, Field::C, Field::H}) {
        for (int t = 0; t < 20; ++t) {
            LieElement a = random_lie(rng, 4, f, 30);
            LieElement b = random_lie(rng, 4, f, 30);
            CHECK(tau(bracket(a, b)) == bracket(tau(a), tau(b)));
        }
    }
}

TEST_CASE("tau on the group is compatible with exp and preserves N") {
    Rng rng(27);
    for (Field f : {Field::R, Field::C, Field::H}) {
        for (int t = 0; t < 10; ++t) {
            LieElement a = random_lie(rng, 4, f, 20);
            CHECK(tau_group(exp(a)) == exp(tau(a)));
        }
    }
}

TEST_CASE("grading info") {
    GradingInfo g = grading_info(4, Field::R);
    CHECK(g.nu == 10);
    CHECK(g.ndim == 6);
    g = grading_info(3, Field::H);
    CHECK(g.nu == 16);
    CHECK(g.ndim == 12);
    g = grading_info(2, Field::R);
    CHECK(g.nu == 1);
    CHECK(g.ndim == 1);
}

TEST_CASE("Jacobi, antisymmetry and grading containment on basis triples") {
    for (Field f : {Field::R, Field::H}) {
        const int n = 4;
        const int d = field_dim(f);
        std::vector<LieElement> basis;
        for (int i = 1; i < n; ++i)
            for (int j = i + 1; j <= n; ++j)
                for (int c = 0; c < d; ++c) basis.push_back(LieElement::basis(n, f, i, j, c));
        for (const auto& a : basis)
            for (const auto& b : basis) {
                CHECK(bracket(a, b) == bracket(b, a).scale(-1));
                for (const auto& c : basis) {
                    LieElement jac = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) +
                                     bracket(c, bracket(a, b));
                    CHECK(jac.is_zero());
                }
            }
        // [V_p, V_q] lands in layer p+q (or vanishes).
        for (const auto& a : basis)
            for (const auto& b : basis) {
                LieElement br = bracket(a, b);
                if (br.is_zero()) continue;
                int p = 0, q = 0;
                for (const auto& [ij, v] : a.coeffs()) { (void)v; p = ij.second - ij.first; }
                for (const auto& [ij, v] : b.coeffs()) { (void)v; q = ij.second - ij.first; }
                CHECK(br == br.layer_component(p + q));
            }
    }
}

TEST_CASE("quaternionic bracket relations of the four-family basis") {
    // With Y = iX, Z = jX, W = kX, the products of units give, e.g.,
    // [X_{s1 s2}, Y_{s2 s3}] = [Y_{s1 s2}, X_{s2 s3}] = Y_{s1 s3}.
    const int n = 3;
    const Field f = Field::H;
    auto B = [&](int i, int j, int c) { return LieElement::basis(n, f, i, j, c); };
    const int s1 = 1, s2 = 2, s3 = 3;
    auto Y13 = B(s1, s3, 1);
    auto Z13 = B(s1, s3, 2);
    auto W13 = B(s1, s3, 3);
    auto X13 = B(s1, s3, 0);

    CHECK(bracket(B(s1, s2, 0), B(s2, s3, 0)) == X13);
    CHECK(bracket(B(s1, s2, 1), B(s2, s3, 1)) == X13.scale(-1));
    CHECK(bracket(B(s1, s2, 2), B(s2, s3, 2)) == X13.scale(-1));
    CHECK(bracket(B(s1, s2, 3), B(s2, s3, 3)) == X13.scale(-1));

    CHECK(bracket(B(s1, s2, 0), B(s2, s3, 1)) == Y13);
    CHECK(bracket(B(s1, s2, 1), B(s2, s3, 0)) == Y13);
    CHECK(bracket(B(s1, s2, 2), B(s2, s3, 3)) == Y13);
    CHECK(bracket(B(s1, s2, 3), B(s2, s3, 2)) == Y13.scale(-1));

    CHECK(bracket(B(s1, s2, 0), B(s2, s3, 2)) == Z13);
    CHECK(bracket(B(s1, s2, 2), B(s2, s3, 0)) == Z13);
    CHECK(bracket(B(s1, s2, 3), B(s2, s3, 1)) == Z13);
    CHECK(bracket(B(s1, s2, 1), B(s2, s3, 3)) == Z13.scale(-1));

    CHECK(bracket(B(s1, s2, 0), B(s2, s3, 3)) == W13);
    CHECK(bracket(B(s1, s2, 3), B(s2, s3, 0)) == W13);
    CHECK(bracket(B(s1, s2, 1), B(s2, s3, 2)) == W13);
    CHECK(bracket(B(s1, s2, 2), B(s2, s3, 1)) == W13.scale(-1));
}

TEST_CASE("real coordinates roundtrip") {
    Rng rng(28);
    for (Field f : {Field::R, Field::C, Field::H}) {
        RealBasis basis(4, f);
        LieElement a = random_lie(rng, 4, f, 40);
        CHECK(LieElement::from_real_coords(basis, a.real_coords(basis)) == a);
    }
}
