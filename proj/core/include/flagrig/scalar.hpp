#pragma once

#include <array>
#include <string>

#include "flagrig/rational.hpp"

namespace flagrig {

/// Coefficient field (or division ring) of the ambient matrix algebra.
enum class Field { R, C, H };

/// Real dimension of the field: 1, 2 or 4.
inline int field_dim(Field f) {
    switch (f) {
        case Field::R: return 1;
        case Field::C: return 2;
        default: return 4;
    }
}

inline const char* field_name(Field f) {
    switch (f) {
        case Field::R: return "R";
        case Field::C: return "C";
        default: return "H";
    }
}

Field parse_field(const std::string& s);

/// Exact element of Q, Q(i) or the rational quaternions a0 + a1 i + a2 j + a3 k.
/// Components beyond field_dim(field) are identically zero.
class Scalar {
  public:
    Scalar() : field_(Field::R) {}
    explicit Scalar(Field f) : field_(f) {}
    Scalar(Field f, Rational a0) : field_(f) { c_[0] = std::move(a0); }
    Scalar(Field f, Rational a0, Rational a1, Rational a2 = 0, Rational a3 = 0);

    static Scalar zero(Field f) { return Scalar(f); }
    static Scalar one(Field f) { return Scalar(f, 1); }
    /// Unit with a 1 in component k (0 -> 1, 1 -> i, 2 -> j, 3 -> k).
    static Scalar unit(Field f, int k);
    static Scalar from_rational(Field f, const Rational& r) { return Scalar(f, r); }

    Field field() const { return field_; }
    const Rational& comp(int k) const { return c_[static_cast<size_t>(k)]; }
    const Rational& re() const { return c_[0]; }

    bool is_zero() const;
    bool is_real() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar scale(const Rational& r) const;

    /// x0 - x1 i - x2 j - x3 k; identity on reals.
    Scalar conjugate() const;
    /// Squared Euclidean norm, a nonnegative rational.
    Rational norm_sq() const;
    /// Multiplicative inverse; throws DivisionByZeroError on zero input.
    Scalar invert() const;

    std::string to_string() const;

  private:
    void require_same_field(const Scalar& o) const;

    Field field_;
    std::array<Rational, 4> c_{Rational(0), Rational(0), Rational(0), Rational(0)};
};

inline Scalar operator*(const Rational& r, const Scalar& x) { return x.scale(r); }

} // namespace flagrig
