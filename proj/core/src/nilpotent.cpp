#include "flagrig/nilpotent.hpp"

namespace flagrig {

GradingInfo grading_info(int n, Field field) {
    if (n < 2) throw DimensionMismatchError("grading_info: n must be >= 2");
    GradingInfo g;
    g.n = n;
    g.field = field;
    const int d = field_dim(field);
    for (int m = 1; m <= n - 1; ++m) g.layer_dims.push_back((n - m) * d);
    for (int m = 1; m <= n - 1; ++m) {
        g.nu += static_cast<long>(m) * g.layer_dims[static_cast<size_t>(m - 1)];
        g.ndim += g.layer_dims[static_cast<size_t>(m - 1)];
    }
    return g;
}

RealBasis::RealBasis(int n, Field field) : n_(n), field_(field) {
    const int d = field_dim(field);
    for (int i = 1; i < n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int c = 0; c < d; ++c) entries_.push_back({i, j, c});
}

int RealBasis::index(int i, int j, int comp) const {
    for (size_t k = 0; k < entries_.size(); ++k) {
        const auto& e = entries_[k];
        if (e.i == i && e.j == j && e.comp == comp) return static_cast<int>(k);
    }
    throw DimensionMismatchError("RealBasis::index: no such basis vector");
}

LieElement LieElement::basis(int n, Field field, int i, int j, int comp) {
    LieElement a(n, field);
    a.set_coeff(i, j, Scalar::unit(field, comp));
    return a;
}

Scalar LieElement::coeff(int i, int j) const {
    auto it = coeffs_.find({i, j});
    return it == coeffs_.end() ? Scalar::zero(field_) : it->second;
}

void LieElement::set_coeff(int i, int j, const Scalar& v) {
    if (!(1 <= i && i < j && j <= n_))
        throw DimensionMismatchError("LieElement: index outside the strict upper triangle");
    if (v.field() != field_) throw FieldMismatchError("LieElement: coefficient field mismatch");
    if (v.is_zero())
        coeffs_.erase({i, j});
    else
        coeffs_[{i, j}] = v;
}

LieElement LieElement::operator+(const LieElement& o) const {
    if (n_ != o.n_ || field_ != o.field_) throw DimensionMismatchError("LieElement sum mismatch");
    LieElement r = *this;
    for (const auto& [ij, v] : o.coeffs_) r.set_coeff(ij.first, ij.second, r.coeff(ij.first, ij.second) + v);
    return r;
}

LieElement LieElement::operator-(const LieElement& o) const {
    if (n_ != o.n_ || field_ != o.field_) throw DimensionMismatchError("LieElement difference mismatch");
    LieElement r = *this;
    for (const auto& [ij, v] : o.coeffs_) r.set_coeff(ij.first, ij.second, r.coeff(ij.first, ij.second) - v);
    return r;
}

LieElement LieElement::scale(const Rational& r) const {
    LieElement out(n_, field_);
    if (rat_is_zero(r)) return out;
    for (const auto& [ij, v] : coeffs_) out.set_coeff(ij.first, ij.second, v.scale(r));
    return out;
}

LieElement LieElement::left_scale(const Scalar& q) const {
    LieElement out(n_, field_);
    for (const auto& [ij, v] : coeffs_) out.set_coeff(ij.first, ij.second, q * v);
    return out;
}

LieElement LieElement::layer_component(int m) const {
    LieElement out(n_, field_);
    for (const auto& [ij, v] : coeffs_)
        if (ij.second - ij.first == m) out.set_coeff(ij.first, ij.second, v);
    return out;
}

Mat LieElement::to_matrix() const {
    Mat m(n_, n_, field_);
    for (const auto& [ij, v] : coeffs_) m.at(ij.first - 1, ij.second - 1) = v;
    return m;
}

LieElement LieElement::from_matrix(const Mat& m) {
    if (m.rows() != m.cols()) throw DimensionMismatchError("from_matrix: not square");
    LieElement a(m.rows(), m.field());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (j > i) {
                if (!m.at(i, j).is_zero()) a.set_coeff(i + 1, j + 1, m.at(i, j));
            } else if (!m.at(i, j).is_zero()) {
                throw DimensionMismatchError("from_matrix: not strictly upper triangular");
            }
        }
    return a;
}

std::vector<Rational> LieElement::real_coords(const RealBasis& basis) const {
    if (basis.n() != n_ || basis.field() != field_)
        throw DimensionMismatchError("real_coords: basis mismatch");
    std::vector<Rational> v(static_cast<size_t>(basis.size()), Rational(0));
    for (int k = 0; k < basis.size(); ++k) {
        const auto& e = basis.entry(k);
        v[static_cast<size_t>(k)] = coeff(e.i, e.j).comp(e.comp);
    }
    return v;
}

LieElement LieElement::from_real_coords(const RealBasis& basis, const std::vector<Rational>& v) {
    if (static_cast<int>(v.size()) != basis.size())
        throw DimensionMismatchError("from_real_coords: size mismatch");
    LieElement a(basis.n(), basis.field());
    for (int k = 0; k < basis.size(); ++k) {
        if (rat_is_zero(v[static_cast<size_t>(k)])) continue;
        const auto& e = basis.entry(k);
        Scalar c = a.coeff(e.i, e.j) + Scalar::unit(basis.field(), e.comp).scale(v[static_cast<size_t>(k)]);
        a.set_coeff(e.i, e.j, c);
    }
    return a;
}

std::string LieElement::to_string() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (const auto& [ij, v] : coeffs_) {
        if (!out.empty()) out += " + ";
        out += "(" + v.to_string() + ")X_{" + std::to_string(ij.first) + "," +
               std::to_string(ij.second) + "}";
    }
    return out;
}

GroupElement::GroupElement(Mat m) : mat_(std::move(m)) {
    if (!mat_.is_upper_unitriangular())
        throw DimensionMismatchError("GroupElement: matrix is not upper unitriangular");
}

// The commutator ab - ba evaluated entrywise; only products with a matching
// inner index contribute, so the sparse loops below are the matrix commutator.
LieElement bracket(const LieElement& a, const LieElement& b) {
    if (a.n() != b.n() || a.field() != b.field())
        throw DimensionMismatchError("bracket: dimension/field mismatch");
    LieElement out(a.n(), a.field());
    for (const auto& [ij, x] : a.coeffs())
        for (const auto& [kl, y] : b.coeffs()) {
            if (ij.second == kl.first)
                out.set_coeff(ij.first, kl.second, out.coeff(ij.first, kl.second) + x * y);
            if (kl.second == ij.first)
                out.set_coeff(kl.first, ij.second, out.coeff(kl.first, ij.second) - y * x);
        }
    return out;
}

LieElement dilate(const Rational& r, const LieElement& a) {
    if (rat_is_zero(r)) throw DomainError("dilate: r must be nonzero");
    LieElement out(a.n(), a.field());
    for (const auto& [ij, v] : a.coeffs())
        out.set_coeff(ij.first, ij.second, v.scale(rational_pow(r, ij.second - ij.first)));
    return out;
}

GroupElement exp(const LieElement& a) {
    const int n = a.n();
    Mat M = a.to_matrix();
    Mat acc = Mat::identity(n, a.field());
    Mat term = Mat::identity(n, a.field());
    Rational factorial(1);
    for (int k = 1; k <= n - 1; ++k) {
        term = term * M;
        factorial *= k;
        acc = acc + term.scale(Rational(1) / factorial);
    }
    return GroupElement(acc);
}

LieElement log(const GroupElement& g) {
    const int n = g.n();
    Mat A = g.matrix() - Mat::identity(n, g.field());
    Mat acc(n, n, g.field());
    Mat term = Mat::identity(n, g.field());
    for (int k = 1; k <= n - 1; ++k) {
        term = term * A;
        Rational c = Rational(k % 2 == 1 ? 1 : -1) / k;
        acc = acc + term.scale(c);
    }
    return LieElement::from_matrix(acc);
}

GroupElement group_mul(const GroupElement& g, const GroupElement& h) {
    if (g.n() != h.n() || g.field() != h.field())
        throw DimensionMismatchError("group_mul: dimension/field mismatch");
    return GroupElement(g.matrix() * h.matrix());
}

GroupElement group_inv(const GroupElement& g) {
    // (I + A)^{-1} = sum (-A)^k, terminating by nilpotency.
    const int n = g.n();
    Mat A = g.matrix() - Mat::identity(n, g.field());
    Mat acc = Mat::identity(n, g.field());
    Mat term = Mat::identity(n, g.field());
    for (int k = 1; k <= n - 1; ++k) {
        term = term * A;
        acc = acc + term.scale(Rational(k % 2 == 1 ? -1 : 1));
    }
    return GroupElement(acc);
}

LieElement tau(const LieElement& a) {
    const int n = a.n();
    LieElement out(n, a.field());
    for (const auto& [st, v] : a.coeffs()) {
        const int s = st.first, t = st.second;
        out.set_coeff(n - t + 1, n - s + 1, -v.conjugate());
    }
    return out;
}

GroupElement tau_group(const GroupElement& g) {
    Mat pi = Mat::reversal(g.n(), g.field());
    return GroupElement(pi * inverse(g.matrix().conj_transpose()) * pi);
}

} // namespace flagrig
