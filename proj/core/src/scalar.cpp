#include "flagrig/scalar.hpp"

namespace flagrig {

Field parse_field(const std::string& s) {
    if (s == "R" || s == "r") return Field::R;
    if (s == "C" || s == "c") return Field::C;
    if (s == "H" || s == "h") return Field::H;
    throw UsageError("unknown field '" + s + "', expected R, C or H");
}

Scalar::Scalar(Field f, Rational a0, Rational a1, Rational a2, Rational a3) : field_(f) {
    c_ = {std::move(a0), std::move(a1), std::move(a2), std::move(a3)};
    for (int k = field_dim(f); k < 4; ++k) {
        if (!rat_is_zero(c_[static_cast<size_t>(k)]))
            throw FieldMismatchError("scalar component outside the field");
    }
}

Scalar Scalar::unit(Field f, int k) {
    if (k < 0 || k >= field_dim(f)) throw FieldMismatchError("unit component outside the field");
    Scalar s(f);
    s.c_[static_cast<size_t>(k)] = 1;
    return s;
}

void Scalar::require_same_field(const Scalar& o) const {
    if (field_ != o.field_)
        throw FieldMismatchError(std::string("mixed field tags: ") + field_name(field_) + " vs " +
                                 field_name(o.field_));
}

bool Scalar::is_zero() const {
    for (const auto& x : c_)
        if (!rat_is_zero(x)) return false;
    return true;
}

bool Scalar::is_real() const {
    return rat_is_zero(c_[1]) && rat_is_zero(c_[2]) && rat_is_zero(c_[3]);
}

Scalar Scalar::operator+(const Scalar& o) const {
    require_same_field(o);
    Scalar r(field_);
    for (size_t k = 0; k < 4; ++k) r.c_[k] = c_[k] + o.c_[k];
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
    require_same_field(o);
    Scalar r(field_);
    for (size_t k = 0; k < 4; ++k) r.c_[k] = c_[k] - o.c_[k];
    return r;
}

Scalar Scalar::operator-() const {
    Scalar r(field_);
    for (size_t k = 0; k < 4; ++k) r.c_[k] = -c_[k];
    return r;
}

// Hamilton product; the complex and real cases are the obvious restrictions.
Scalar Scalar::operator*(const Scalar& o) const {
    require_same_field(o);
    const auto& a = c_;
    const auto& b = o.c_;
    Scalar r(field_);
    switch (field_) {
        case Field::R:
            r.c_[0] = a[0] * b[0];
            break;
        case Field::C:
            r.c_[0] = a[0] * b[0] - a[1] * b[1];
            r.c_[1] = a[0] * b[1] + a[1] * b[0];
            break;
        case Field::H:
            r.c_[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
            r.c_[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2];
            r.c_[2] = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1];
            r.c_[3] = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0];
            break;
    }
    return r;
}

bool Scalar::operator==(const Scalar& o) const {
    return field_ == o.field_ && c_ == o.c_;
}

Scalar Scalar::scale(const Rational& r) const {
    Scalar s(field_);
    for (size_t k = 0; k < 4; ++k) s.c_[k] = c_[k] * r;
    return s;
}

Scalar Scalar::conjugate() const {
    Scalar r(field_);
    r.c_[0] = c_[0];
    for (size_t k = 1; k < 4; ++k) r.c_[k] = -c_[k];
    return r;
}

Rational Scalar::norm_sq() const {
    Rational s(0);
    for (const auto& x : c_)
        if (!rat_is_zero(x)) s += x * x;
    return s;
}

Scalar Scalar::invert() const {
    Rational n = norm_sq();
    if (rat_is_zero(n)) throw DivisionByZeroError("invert: zero scalar");
    return conjugate().scale(Rational(1) / n);
}

std::string Scalar::to_string() const {
    static const char* names[4] = {"", "i", "j", "k"};
    std::string out;
    for (int k = 0; k < field_dim(field_); ++k) {
        const Rational& x = c_[static_cast<size_t>(k)];
        if (rat_is_zero(x)) continue;
        if (!out.empty()) out += rat_sign(x) > 0 ? "+" : "";
        out += rational_to_string(x) + names[k];
    }
    return out.empty() ? "0" : out;
}

} // namespace flagrig
