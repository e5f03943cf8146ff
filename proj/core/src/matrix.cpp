#include "flagrig/matrix.hpp"

namespace flagrig {

Mat Mat::identity(int n, Field f) {
    Mat m(n, n, f);
    for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
    return m;
}

Mat Mat::reversal(int n, Field f) {
    Mat m(n, n, f);
    for (int i = 0; i < n; ++i) m.at(n - 1 - i, i) = Scalar::one(f);
    return m;
}

Mat Mat::diagonal(const std::vector<Scalar>& d) {
    if (d.empty()) throw DimensionMismatchError("diagonal: empty");
    Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()), d[0].field());
    for (size_t i = 0; i < d.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_ || field_ != o.field_)
        throw DimensionMismatchError("matrix product shape/field mismatch");
    Mat r(rows_, o.cols_, field_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Scalar& aik = at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const Scalar& bkj = o.at(k, j);
                if (bkj.is_zero()) continue;
                r.at(i, j) += aik * bkj;
            }
        }
    return r;
}

Mat Mat::operator+(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || field_ != o.field_)
        throw DimensionMismatchError("matrix sum shape/field mismatch");
    Mat r(rows_, cols_, field_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || field_ != o.field_)
        throw DimensionMismatchError("matrix difference shape/field mismatch");
    Mat r(rows_, cols_, field_);
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
    return r;
}

bool Mat::operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && data_ == o.data_;
}

Mat Mat::scale(const Rational& r) const {
    Mat m(rows_, cols_, field_);
    for (size_t i = 0; i < data_.size(); ++i) m.data_[i] = data_[i].scale(r);
    return m;
}

Mat Mat::conj_transpose() const {
    Mat m(cols_, rows_, field_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j).conjugate();
    return m;
}

std::vector<Scalar> Mat::apply(const std::vector<Scalar>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw DimensionMismatchError("apply: size mismatch");
    std::vector<Scalar> r(static_cast<size_t>(rows_), Scalar::zero(field_));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            if (at(i, j).is_zero() || v[static_cast<size_t>(j)].is_zero()) continue;
            r[static_cast<size_t>(i)] += at(i, j) * v[static_cast<size_t>(j)];
        }
    return r;
}

std::vector<Scalar> Mat::col(int c) const {
    std::vector<Scalar> v(static_cast<size_t>(rows_), Scalar::zero(field_));
    for (int i = 0; i < rows_; ++i) v[static_cast<size_t>(i)] = at(i, c);
    return v;
}

void Mat::set_col(int c, const std::vector<Scalar>& v) {
    if (static_cast<int>(v.size()) != rows_) throw DimensionMismatchError("set_col: size mismatch");
    for (int i = 0; i < rows_; ++i) at(i, c) = v[static_cast<size_t>(i)];
}

Mat Mat::cols_slice(int from, int count) const {
    Mat m(rows_, count, field_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < count; ++j) m.at(i, j) = at(i, from + j);
    return m;
}

Mat Mat::hcat(const Mat& o) const {
    if (rows_ != o.rows_ || field_ != o.field_) throw DimensionMismatchError("hcat mismatch");
    Mat m(rows_, cols_ + o.cols_, field_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
        for (int j = 0; j < o.cols_; ++j) m.at(i, cols_ + j) = o.at(i, j);
    }
    return m;
}

bool Mat::is_upper_unitriangular() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j <= i; ++j) {
            const Scalar want = i == j ? Scalar::one(field_) : Scalar::zero(field_);
            if (at(i, j) != want) return false;
        }
    return true;
}

bool Mat::is_lower_unitriangular() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = i; j < cols_; ++j) {
            const Scalar want = i == j ? Scalar::one(field_) : Scalar::zero(field_);
            if (at(i, j) != want) return false;
        }
    return true;
}

std::string Mat::to_string() const {
    std::string out;
    for (int i = 0; i < rows_; ++i) {
        out += "[ ";
        for (int j = 0; j < cols_; ++j) out += at(i, j).to_string() + " ";
        out += "]\n";
    }
    return out;
}

namespace {

// Row echelon by left row operations. Returns pivot (row, col) pairs. When
// `reduced` is set, pivots are normalized to 1 and cleared above as well.
std::vector<std::pair<int, int>> echelonize(Mat& a, bool reduced) {
    std::vector<std::pair<int, int>> pivots;
    int row = 0;
    for (int c = 0; c < a.cols() && row < a.rows(); ++c) {
        int p = -1;
        for (int r = row; r < a.rows(); ++r)
            if (!a.at(r, c).is_zero()) {
                p = r;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < a.cols(); ++j) std::swap(a.at(p, j), a.at(row, j));
        if (reduced) {
            Scalar inv = a.at(row, c).invert();
            for (int j = 0; j < a.cols(); ++j) a.at(row, j) = inv * a.at(row, j);
        }
        for (int r = 0; r < a.rows(); ++r) {
            if (r == row || (!reduced && r < row)) continue;
            if (a.at(r, c).is_zero()) continue;
            Scalar f = a.at(r, c) * a.at(row, c).invert();
            for (int j = 0; j < a.cols(); ++j) a.at(r, j) -= f * a.at(row, j);
        }
        pivots.emplace_back(row, c);
        ++row;
    }
    return pivots;
}

} // namespace

int rank(const Mat& a) {
    Mat w = a;
    return static_cast<int>(echelonize(w, false).size());
}

Mat inverse(const Mat& a) {
    if (a.rows() != a.cols()) throw DimensionMismatchError("inverse: not square");
    Mat w = a.hcat(Mat::identity(a.rows(), a.field()));
    auto piv = echelonize(w, true);
    if (static_cast<int>(piv.size()) != a.rows())
        throw SingularMatrixError("inverse: singular matrix");
    return w.cols_slice(a.cols(), a.cols());
}

bool is_invertible(const Mat& a) {
    return a.rows() == a.cols() && rank(a) == a.rows();
}

std::vector<Scalar> solve(const Mat& a, const std::vector<Scalar>& b) {
    if (static_cast<int>(b.size()) != a.rows()) throw DimensionMismatchError("solve: size mismatch");
    Mat rhs(a.rows(), 1, a.field());
    for (int i = 0; i < a.rows(); ++i) rhs.at(i, 0) = b[static_cast<size_t>(i)];
    Mat w = a.hcat(rhs);
    auto piv = echelonize(w, true);
    // Pivot in the rhs column means the system is inconsistent.
    for (const auto& [r, c] : piv)
        if (c == a.cols()) throw SingularMatrixError("solve: inconsistent system");
    std::vector<Scalar> x(static_cast<size_t>(a.cols()), Scalar::zero(a.field()));
    for (const auto& [r, c] : piv) x[static_cast<size_t>(c)] = w.at(r, a.cols());
    return x;
}

Mat null_space(const Mat& a) {
    Mat w = a;
    auto piv = echelonize(w, true);
    std::vector<bool> is_pivot(static_cast<size_t>(a.cols()), false);
    for (const auto& [r, c] : piv) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < a.cols(); ++c)
        if (!is_pivot[static_cast<size_t>(c)]) free_cols.push_back(c);
    Mat basis(a.cols(), static_cast<int>(free_cols.size()), a.field());
    for (size_t k = 0; k < free_cols.size(); ++k) {
        int f = free_cols[k];
        basis.at(f, static_cast<int>(k)) = Scalar::one(a.field());
        for (const auto& [r, c] : piv) basis.at(c, static_cast<int>(k)) = -w.at(r, f);
    }
    return basis;
}

} // namespace flagrig
