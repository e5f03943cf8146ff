#include "flagrig/rng.hpp"

namespace flagrig {

Rational random_rational(Rng& rng, long bound) {
    long num = rng.next_int(-bound, bound);
    long den = rng.next_int(1, bound);
    return Rational(num, den);
}

Rational random_positive_rational_le_one(Rng& rng, long bound) {
    long den = rng.next_int(1, bound);
    long num = rng.next_int(1, den);
    return Rational(num, den);
}

Scalar random_scalar(Rng& rng, Field f, long bound) {
    Scalar s(f);
    for (int k = 0; k < field_dim(f); ++k)
        s += Scalar::unit(f, k).scale(random_rational(rng, bound));
    return s;
}

Scalar random_nonzero_scalar(Rng& rng, Field f, long bound) {
    for (;;) {
        Scalar s = random_scalar(rng, f, bound);
        if (!s.is_zero()) return s;
    }
}

LieElement random_lie(Rng& rng, int n, Field f, long bound) {
    LieElement a(n, f);
    for (int i = 1; i < n; ++i)
        for (int j = i + 1; j <= n; ++j) a.set_coeff(i, j, random_scalar(rng, f, bound));
    return a;
}

GroupElement random_group(Rng& rng, int n, Field f, long bound) {
    Mat m = Mat::identity(n, f);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m.at(i, j) = random_scalar(rng, f, bound);
    return GroupElement(m);
}

Mat random_invertible(Rng& rng, int n, Field f, long bound) {
    for (;;) {
        Mat m(n, n, f);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = random_scalar(rng, f, bound);
        if (is_invertible(m)) return m;
    }
}

Mat random_lower_unipotent(Rng& rng, int n, Field f, long bound) {
    Mat m = Mat::identity(n, f);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) m.at(i, j) = random_scalar(rng, f, bound);
    return m;
}

HSpec random_hspec(Rng& rng, Field f) {
    switch (f) {
        case Field::R:
            return HSpec::identity();
        case Field::C:
            return rng.next_bool() ? HSpec::conjugation() : HSpec::identity();
        case Field::H: {
            Scalar s = random_nonzero_scalar(rng, Field::H, 10);
            Scalar si = s.invert();
            return HSpec::quaternion(s * Scalar::unit(Field::H, 1) * si,
                                     s * Scalar::unit(Field::H, 2) * si);
        }
    }
    return HSpec::identity();
}

AutCertificate random_certificate(Rng& rng, int n, Field f, long bound) {
    AutCertificate cert;
    cert.epsilon = rng.next_bool() ? 1 : 0;
    for (int i = 0; i < n - 1; ++i) cert.lambda.push_back(random_nonzero_scalar(rng, f, bound));
    cert.lambda.push_back(Scalar::one(f));
    cert.h = random_hspec(rng, f);
    return cert;
}

Flag random_flag_in_chart(Rng& rng, int n, Field f, long bound) {
    return alpha(random_group(rng, n, f, bound));
}

Flag random_flag_outside_chart(Rng& rng, int n, Field f, long bound) {
    for (;;) {
        Mat m(n, n, f);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = random_scalar(rng, f, bound);
        m.at(n - 1, n - 1) = Scalar::zero(f); // W_1 lands inside W_{n-1}^+
        bool nonzero_line = false;
        for (int i = 0; i < n; ++i)
            if (!m.at(i, n - 1).is_zero()) nonzero_line = true;
        if (nonzero_line && is_invertible(m)) return Flag(m);
    }
}

} // namespace flagrig
