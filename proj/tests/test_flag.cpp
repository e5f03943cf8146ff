#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flagrig/flag.hpp"
#include "flagrig/rng.hpp"

using namespace flagrig;

namespace {

Mat random_lower_triangular_invertible(Rng& rng, int n, Field f) {
    for (;;) {
        Mat l(n, n, f);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) l.at(i, j) = random_scalar(rng, f, 9);
        bool ok = true;
        for (int i = 0; i < n; ++i)
            if (l.at(i, i).is_zero()) ok = false;
        if (ok) return l;
    }
}

// Hermitian product sum conj(z_i) w_i of two columns.
Scalar herm(const Mat& a, int ca, const Mat& b, int cb) {
    Scalar s = Scalar::zero(a.field());
    for (int r = 0; r < a.rows(); ++r) s += a.at(r, ca).conjugate() * b.at(r, cb);
    return s;
}

LieElement random_kj_element(Rng& rng, int n, Field f, int j) {
    // k_j is spanned by the X_{ab} whose column interval avoids the cut
    // between n-j and n-j+1.
    LieElement a(n, f);
    for (int s = 1; s < n; ++s)
        for (int t = s + 1; t <= n; ++t)
            if (t <= n - j || s >= n - j + 1) a.set_coeff(s, t, random_scalar(rng, f, 9));
    return a;
}

} // namespace

TEST_CASE("identity acts trivially and the action is associative") {
    Rng rng(41);
    for (Field f : {Field::R, Field::C, Field::H}) {
        const int n = 4;
        Flag F = random_flag_in_chart(rng, n, f);
        ProjElement id(Mat::identity(n, f));
        CHECK(act(id, F) == F);
        for (int t = 0; t < 10; ++t) {
            ProjElement g(random_invertible(rng, n, f, 9));
            ProjElement h(random_invertible(rng, n, f, 9));
            CHECK(act(g * h, F) == act(g, act(h, F)));
        }
    }
}

TEST_CASE("the reversal permutation carries the minus flag to the plus flag") {
    for (Field f : {Field::R, Field::C, Field::H}) {
        ProjElement pi(Mat::reversal(4, f));
        CHECK(act(pi, Flag::basepoint(4, f)) == Flag::plus_basepoint(4, f));
    }
}

TEST_CASE("canonicalization is invariant under right lower-triangular moves") {
    Rng rng(42);
    for (Field f : {Field::R, Field::C, Field::H}) {
        const int n = 5;
        for (int t = 0; t < 20; ++t) {
            Mat b = random_invertible(rng, n, f, 9);
            Mat l = random_lower_triangular_invertible(rng, n, f);
            CHECK(Flag(b) == Flag(b * l));
        }
    }
}

TEST_CASE("alpha at the identity is the basepoint") {
    CHECK(alpha(GroupElement(4, Field::R)) == Flag::basepoint(4, Field::R));
}

TEST_CASE("alpha roundtrip") {
    LieElement a(3, Field::R);
    a.set_coeff(1, 2, Scalar(Field::R, 1));
    a.set_coeff(1, 3, Scalar(Field::R, 1));
    GroupElement g = exp(a);
    CHECK(alpha_inverse(alpha(g)) == g);

    Rng rng(43);
    for (Field f : {Field::R, Field::C, Field::H}) {
        for (int n : {3, 4, 5}) {
            for (int t = 0; t < 20; ++t) {
                GroupElement h = random_group(rng, n, f, 50);
                CHECK(alpha_inverse(alpha(h)) == h);
            }
        }
    }
}

TEST_CASE("alpha is N-equivariant") {
    Rng rng(44);
    for (Field f : {Field::R, Field::H}) {
        const int n = 4;
        GroupElement g = random_group(rng, n, f, 20);
        GroupElement m = random_group(rng, n, f, 20);
        CHECK(alpha(group_mul(m, g)) == act(ProjElement(m.matrix()), alpha(g)));
    }
}

TEST_CASE("flags touching the plus flag are rejected by the chart") {
    // e_1 in W_1 forces W_1 to meet W_{n-1}^+.
    const int n = 4;
    Mat b = Mat::reversal(n, Field::R);
    CHECK_FALSE(in_Nhat(Flag(b)));
    CHECK_THROWS_AS(alpha_inverse(Flag(b)), NotInChartError);
}

TEST_CASE("chart membership biconditional") {
    Rng rng(45);
    for (Field f : {Field::R, Field::C, Field::H}) {
        const int n = 4;
        for (int t = 0; t < 25; ++t) {
            Flag inside = random_flag_in_chart(rng, n, f);
            CHECK(in_Nhat(inside));
            CHECK_NOTHROW(alpha_inverse(inside));
            Flag outside = random_flag_outside_chart(rng, n, f);
            CHECK_FALSE(in_Nhat(outside));
            CHECK_THROWS_AS(alpha_inverse(outside), NotInChartError);
        }
    }
}

TEST_CASE("pi_j basics and equivariance") {
    const int n = 4;
    Flag base = Flag::basepoint(n, Field::R);
    Mat en(n, 1, Field::R);
    en.at(n - 1, 0) = Scalar(Field::R, 1);
    CHECK(pi_j(base, 1) == GrassmannPoint(n, en));
    CHECK_THROWS_AS(pi_j(base, n), DimensionMismatchError);

    Rng rng(46);
    for (Field f : {Field::R, Field::C, Field::H}) {
        for (int t = 0; t < 10; ++t) {
            Flag F = random_flag_in_chart(rng, n, f);
            ProjElement g(random_invertible(rng, n, f, 9));
            for (int j = 1; j <= n - 1; ++j) CHECK(pi_j(act(g, F), j) == act(g, pi_j(F, j)));
        }
    }
}

TEST_CASE("pi_j is constant on K_j cosets") {
    Rng rng(47);
    for (Field f : {Field::R, Field::H}) {
        const int n = 4;
        for (int j = 1; j <= n - 1; ++j) {
            GroupElement g = random_group(rng, n, f, 9);
            GrassmannPoint w = pi_j(alpha(g), j);
            for (int t = 0; t < 5; ++t) {
                GroupElement k = exp(random_kj_element(rng, n, f, j));
                CHECK(pi_j(alpha(group_mul(g, k)), j) == w);
            }
        }
    }
}

TEST_CASE("psi swaps the basepoints and is an involution") {
    for (Field f : {Field::R, Field::C, Field::H}) {
        const int n = 4;
        CHECK(psi(Flag::basepoint(n, f)) == Flag::plus_basepoint(n, f));
        Rng rng(48);
        for (int t = 0; t < 10; ++t) {
            Flag F = random_flag_in_chart(rng, n, f);
            CHECK(psi(psi(F)) == F);
        }
    }
}

TEST_CASE("psi produces orthocomplements") {
    Rng rng(49);
    for (Field f : {Field::R, Field::C, Field::H}) {
        const int n = 4;
        Flag F = random_flag_in_chart(rng, n, f);
        Flag P = psi(F);
        // The j-th member of psi(F) must annihilate the (n-j)-th member of F
        // under the Hermitian product.
        for (int j = 1; j <= n - 1; ++j)
            for (int cp = n - j; cp < n; ++cp)
                for (int cf = j; cf < n; ++cf)
                    CHECK(herm(P.basis(), cp, F.basis(), cf).is_zero());
    }
}

TEST_CASE("psi equivariance through conjugate-transpose inverse") {
    Rng rng(50);
    for (Field f : {Field::R, Field::C, Field::H}) {
        const int n = 4;
        for (int t = 0; t < 10; ++t) {
            Flag F = random_flag_in_chart(rng, n, f);
            Mat g = random_invertible(rng, n, f, 9);
            Flag lhs = psi(act(ProjElement(g), F));
            Flag rhs = act(ProjElement(inverse(g.conj_transpose())), psi(F));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("flag dilation fixes the basepoints and intertwines alpha") {
    Rng rng(51);
    for (Field f : {Field::R, Field::C, Field::H}) {
        const int n = 4;
        Flag F = random_flag_in_chart(rng, n, f);
        CHECK(dilate_flag(1, F) == F);
        for (int t = 0; t < 10; ++t) {
            Rational r = random_positive_rational_le_one(rng, 20);
            CHECK(dilate_flag(r, Flag::basepoint(n, f)) == Flag::basepoint(n, f));
            CHECK(dilate_flag(r, Flag::plus_basepoint(n, f)) == Flag::plus_basepoint(n, f));
            GroupElement g = random_group(rng, n, f, 20);
            GroupElement dg = exp(dilate(r, log(g)));
            CHECK(dilate_flag(r, alpha(g)) == alpha(dg));
        }
        CHECK_THROWS_AS(dilate_flag(Rational(-1), F), DomainError);
    }
}

TEST_CASE("beta squared") {
    const int n = 3;
    Mat v(n, 1, Field::R);
    v.at(0, 0) = Scalar(Field::R, 1);
    v.at(2, 0) = Scalar(Field::R, 1);
    CHECK(beta_squared(GrassmannPoint(n, v), 1) == Rational(1));

    Mat w(n, 1, Field::R);
    w.at(2, 0) = Scalar(Field::R, 5);
    CHECK(beta_squared(GrassmannPoint(n, w), 1) == Rational(0));

    Mat top(n, 1, Field::R);
    top.at(0, 0) = Scalar(Field::R, 1);
    CHECK_THROWS_AS(beta_squared(GrassmannPoint(n, top), 1), UndefinedBetaError);
}

TEST_CASE("beta squared contracts under dilation") {
    Rng rng(52);
    for (Field f : {Field::R, Field::C, Field::H}) {
        for (int t = 0; t < 40; ++t) {
            const int n = static_cast<int>(rng.next_int(3, 5));
            const int j = static_cast<int>(rng.next_int(1, n - 1));
            Mat v(n, 1, f);
            for (int r = 0; r < n; ++r) v.at(r, 0) = random_scalar(rng, f, 9);
            bool bottom = false;
            for (int r = n - j; r < n; ++r)
                if (!v.at(r, 0).is_zero()) bottom = true;
            if (!bottom) v.at(n - 1, 0) = Scalar::one(f);
            GrassmannPoint line(n, v);
            Rational r = random_positive_rational_le_one(rng, 30);
            std::vector<Scalar> d;
            for (int i = 1; i <= n; ++i) d.push_back(Scalar(f, rational_pow(r, -i)));
            GrassmannPoint dilated(n, Mat::diagonal(d) * line.columns());
            CHECK(beta_squared(dilated, j) <= r * r * beta_squared(line, j));
        }
    }
}

TEST_CASE("projective normalization") {
    Rng rng(53);
    const int n = 3;
    for (Field f : {Field::R, Field::C}) {
        Mat m = random_invertible(rng, n, f, 9);
        Scalar c = random_nonzero_scalar(rng, f, 9);
        Mat scaled(n, n, f);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) scaled.at(i, j) = c * m.at(i, j);
        CHECK(ProjElement(m) == ProjElement(scaled));
    }
    // Over H only real scalars are quotiented.
    Mat m = random_invertible(rng, n, Field::H, 9);
    CHECK(ProjElement(m) == ProjElement(m.scale(Rational(-7, 3))));
    Mat not_scalar(n, n, Field::H);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) not_scalar.at(i, j) = Scalar::unit(Field::H, 1) * m.at(i, j);
    // i id acts nontrivially on quaternionic flags, so the class differs.
    Rng rng2(54);
    Flag F = random_flag_in_chart(rng2, n, Field::H);
    CHECK(act(ProjElement(not_scalar), F) != act(ProjElement(m), F));

    Mat sing(n, n, Field::R);
    CHECK_THROWS_AS(ProjElement{sing}, SingularMatrixError);
}
