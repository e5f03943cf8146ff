#include "flagrig/flag.hpp"

#include <algorithm>
#include <functional>

namespace flagrig {

namespace {

int bottom_nonzero_row(const std::vector<Scalar>& v) {
    for (int r = static_cast<int>(v.size()) - 1; r >= 0; --r)
        if (!v[static_cast<size_t>(r)].is_zero()) return r;
    return -1;
}

// Greedy pivot search on the columns of a full-column-rank matrix: repeatedly
// cancel the bottom-most entry of a column against the earlier column owning
// that pivot row. The discovered rows are the jump rows of the span chain and
// do not depend on the representative.
std::vector<int> find_pivots(const Mat& cols) {
    const int k = cols.cols();
    Mat work = cols;
    std::vector<int> piv(static_cast<size_t>(k), -1);
    std::vector<int> owner(static_cast<size_t>(cols.rows()), -1);
    for (int t = 0; t < k; ++t) {
        std::vector<Scalar> v = work.col(t);
        for (;;) {
            int r = bottom_nonzero_row(v);
            if (r < 0) throw SingularMatrixError("canonicalize: columns are not independent");
            int s = owner[static_cast<size_t>(r)];
            if (s < 0) {
                piv[static_cast<size_t>(t)] = r;
                owner[static_cast<size_t>(r)] = t;
                Scalar inv = v[static_cast<size_t>(r)].invert();
                for (auto& x : v) x = x * inv; // right scaling keeps the span
                work.set_col(t, v);
                break;
            }
            Scalar c = v[static_cast<size_t>(r)];
            std::vector<Scalar> w = work.col(s);
            for (size_t a = 0; a < v.size(); ++a) v[a] -= w[a] * c;
        }
    }
    return piv;
}

// Canonical spanning columns given pivot rows: column l is the unique vector
// of the l-th span with coordinate 1 at piv[l] and 0 at the other pivot rows.
Mat canonical_columns(const Mat& cols, const std::vector<int>& piv) {
    const int k = cols.cols();
    const Field f = cols.field();
    Mat out(cols.rows(), k, f);
    for (int l = 0; l < k; ++l) {
        // The l-th member of the chain is spanned by the first l+1 columns.
        const int m = l + 1;
        Mat p(m, m, f);
        for (int s = 0; s < m; ++s)
            for (int t = 0; t < m; ++t) p.at(s, t) = cols.at(piv[static_cast<size_t>(s)], t);
        std::vector<Scalar> rhs(static_cast<size_t>(m), Scalar::zero(f));
        rhs[static_cast<size_t>(l)] = Scalar::one(f);
        std::vector<Scalar> u = solve(p, rhs);
        std::vector<Scalar> v(static_cast<size_t>(cols.rows()), Scalar::zero(f));
        for (int t = 0; t < m; ++t) {
            if (u[static_cast<size_t>(t)].is_zero()) continue;
            for (int r = 0; r < cols.rows(); ++r) v[static_cast<size_t>(r)] += cols.at(r, t) * u[static_cast<size_t>(t)];
        }
        out.set_col(l, v);
    }
    return out;
}

// Same normal form for a single subspace: the pivot rows are sorted
// descending so the result does not depend on the input column order.
Mat canonical_span(const Mat& cols) {
    std::vector<int> piv = find_pivots(cols);
    std::sort(piv.begin(), piv.end(), std::greater<int>());
    const int k = cols.cols();
    const Field f = cols.field();
    Mat out(cols.rows(), k, f);
    for (int l = 0; l < k; ++l) {
        Mat p(k, k, f);
        for (int s = 0; s < k; ++s)
            for (int t = 0; t < k; ++t) p.at(s, t) = cols.at(piv[static_cast<size_t>(s)], t);
        std::vector<Scalar> rhs(static_cast<size_t>(k), Scalar::zero(f));
        rhs[static_cast<size_t>(l)] = Scalar::one(f);
        std::vector<Scalar> u = solve(p, rhs);
        std::vector<Scalar> v(static_cast<size_t>(cols.rows()), Scalar::zero(f));
        for (int t = 0; t < k; ++t) {
            if (u[static_cast<size_t>(t)].is_zero()) continue;
            for (int r = 0; r < cols.rows(); ++r) v[static_cast<size_t>(r)] += cols.at(r, t) * u[static_cast<size_t>(t)];
        }
        out.set_col(l, v);
    }
    return out;
}

} // namespace

Flag::Flag(const Mat& basis) {
    if (basis.rows() != basis.cols() || basis.rows() < 2)
        throw DimensionMismatchError("Flag: basis must be square, n >= 2");
    const int n = basis.rows();
    // Work in span-chain order (first column spans W_1): reverse, reduce,
    // reverse back.
    Mat pi = Mat::reversal(n, basis.field());
    Mat chain = basis * pi;
    std::vector<int> piv = find_pivots(chain); // throws when singular
    basis_ = canonical_columns(chain, piv) * pi;
}

Flag Flag::basepoint(int n, Field field) { return Flag(Mat::identity(n, field)); }

Flag Flag::plus_basepoint(int n, Field field) { return Flag(Mat::reversal(n, field)); }

GrassmannPoint::GrassmannPoint(int n, const Mat& columns) {
    if (columns.rows() != n || columns.cols() < 1 || columns.cols() > n)
        throw DimensionMismatchError("GrassmannPoint: bad shape");
    cols_ = canonical_span(columns);
}

ProjElement::ProjElement(const Mat& m) {
    if (m.rows() != m.cols()) throw DimensionMismatchError("ProjElement: not square");
    if (!is_invertible(m)) throw SingularMatrixError("ProjElement: singular matrix");
    mat_ = m;
    // Column-major first nonzero entry.
    Scalar e = Scalar::zero(m.field());
    for (int c = 0; c < m.cols() && e.is_zero(); ++c)
        for (int r = 0; r < m.rows() && e.is_zero(); ++r) e = m.at(r, c);
    if (m.field() == Field::H) {
        // Only real scalars act trivially over H: normalize the first nonzero
        // real component of the leading entry to 1.
        Rational comp(0);
        for (int k = 0; k < 4 && rat_is_zero(comp); ++k) comp = e.comp(k);
        mat_ = mat_.scale(Rational(1) / comp);
    } else {
        Scalar inv = e.invert();
        Mat out(m.rows(), m.cols(), m.field());
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) out.at(r, c) = inv * mat_.at(r, c);
        mat_ = out;
    }
}

Flag act(const ProjElement& g, const Flag& f) {
    if (g.n() != f.n() || g.field() != f.field()) throw DimensionMismatchError("act: mismatch");
    return Flag(g.matrix() * f.basis());
}

GrassmannPoint act(const ProjElement& g, const GrassmannPoint& w) {
    if (g.n() != w.n() || g.field() != w.field()) throw DimensionMismatchError("act: mismatch");
    return GrassmannPoint(w.n(), g.matrix() * w.columns());
}

Flag alpha(const GroupElement& g) { return Flag(g.matrix()); }

GroupElement alpha_inverse(const Flag& f) {
    const int n = f.n();
    const Field field = f.field();
    Mat c = f.basis();
    Mat u_total = Mat::identity(n, field);
    for (int k = 1; k <= n - 1; ++k) {
        const int col = n - k; // 0-based column of the new vector of W_k
        std::vector<Scalar> v = c.col(col);
        // Clear the coordinates already normalized to e_n, ..., e_{n-k+2}.
        for (int l = n - 1; l > col; --l) {
            Scalar x = v[static_cast<size_t>(l)];
            if (x.is_zero()) continue;
            for (int r = 0; r < n; ++r) v[static_cast<size_t>(r)] -= c.at(r, l) * x;
        }
        Scalar pivot = v[static_cast<size_t>(col)];
        if (pivot.is_zero())
            throw NotInChartError("alpha_inverse: W_" + std::to_string(k) +
                                  " meets W_" + std::to_string(n - k) + "^+");
        Scalar inv = pivot.invert();
        for (auto& x : v) x = x * inv;
        c.set_col(col, v);
        // u_k = I - sum_i v_i X_{i, n-k+1} sends v to e_{n-k+1} and fixes the
        // later basis vectors.
        Mat u = Mat::identity(n, field);
        for (int r = 0; r < col; ++r) u.at(r, col) = -v[static_cast<size_t>(r)];
        c = u * c;
        u_total = u * u_total;
    }
    return group_inv(GroupElement(u_total));
}

bool in_Nhat(const Flag& f) {
    const int n = f.n();
    for (int j = 1; j <= n - 1; ++j) {
        Mat probe(n, n, f.field());
        for (int t = 0; t < j; ++t)
            for (int r = 0; r < n; ++r) probe.at(r, t) = f.basis().at(r, n - 1 - t);
        for (int t = 0; t < n - j; ++t) probe.at(t, j + t) = Scalar::one(f.field());
        if (rank(probe) != n) return false;
    }
    return true;
}

GrassmannPoint pi_j(const Flag& f, int j) {
    const int n = f.n();
    if (j < 1 || j > n - 1) throw DimensionMismatchError("pi_j: j out of range");
    Mat cols(n, j, f.field());
    for (int t = 0; t < j; ++t)
        for (int r = 0; r < n; ++r) cols.at(r, t) = f.basis().at(r, n - 1 - t);
    return GrassmannPoint(n, cols);
}

Flag psi(const Flag& f) {
    // Columns of (B^{-1})^* are dual to the columns of B under the Hermitian
    // product, so they span the orthocomplements; the reversal restores the
    // flag reading convention.
    Mat c = inverse(f.basis()).conj_transpose();
    return Flag(c * Mat::reversal(f.n(), f.field()));
}

Flag dilate_flag(const Rational& r, const Flag& f) {
    if (r <= 0) throw DomainError("dilate_flag: r must be positive");
    const int n = f.n();
    std::vector<Scalar> d;
    for (int i = 1; i <= n; ++i) d.push_back(Scalar(f.field(), rational_pow(r, -i)));
    return Flag(Mat::diagonal(d) * f.basis());
}

Rational beta_squared(const GrassmannPoint& line, int j) {
    if (line.j() != 1) throw DimensionMismatchError("beta_squared: need a rank-one point");
    const int n = line.n();
    if (j < 1 || j > n - 1) throw DimensionMismatchError("beta_squared: j out of range");
    Rational num(0), den(0);
    for (int r = 0; r < n - j; ++r) num += line.columns().at(r, 0).norm_sq();
    for (int r = n - j; r < n; ++r) den += line.columns().at(r, 0).norm_sq();
    if (rat_is_zero(den)) throw UndefinedBetaError("beta_squared: line lies inside W_{n-j}^+");
    return num / den;
}

} // namespace flagrig
