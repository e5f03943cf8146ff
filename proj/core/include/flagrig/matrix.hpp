#pragma once

#include <vector>

#include "flagrig/scalar.hpp"

namespace flagrig {

/// Dense matrix over one of the three coefficient fields. Columns of a matrix
/// span right submodules of F^n; left row operations preserve those spans, so
/// rank/solve/inverse below are implemented with left row reduction only and
/// stay correct over the quaternions.
class Mat {
  public:
    Mat() : rows_(0), cols_(0), field_(Field::R) {}
    Mat(int rows, int cols, Field f)
        : rows_(rows), cols_(cols), field_(f),
          data_(static_cast<size_t>(rows * cols), Scalar::zero(f)) {}

    static Mat identity(int n, Field f);
    /// Reversal permutation e_l -> e_{n-l+1}.
    static Mat reversal(int n, Field f);
    static Mat diagonal(const std::vector<Scalar>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Field field() const { return field_; }

    const Scalar& at(int r, int c) const { return data_[idx(r, c)]; }
    Scalar& at(int r, int c) { return data_[idx(r, c)]; }

    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    bool operator==(const Mat& o) const;
    bool operator!=(const Mat& o) const { return !(*this == o); }

    Mat scale(const Rational& r) const;
    Mat conj_transpose() const;
    std::vector<Scalar> apply(const std::vector<Scalar>& v) const;

    std::vector<Scalar> col(int c) const;
    void set_col(int c, const std::vector<Scalar>& v);
    Mat cols_slice(int from, int count) const;
    /// Horizontal concatenation [this | o].
    Mat hcat(const Mat& o) const;

    bool is_upper_unitriangular() const;
    bool is_lower_unitriangular() const;

    std::string to_string() const;

  private:
    size_t idx(int r, int c) const { return static_cast<size_t>(r) * cols_ + c; }

    int rows_, cols_;
    Field field_;
    std::vector<Scalar> data_;
};

/// Rank of the right column span (= left row rank), by exact elimination.
int rank(const Mat& a);

/// Inverse via Gauss-Jordan; throws SingularMatrixError.
Mat inverse(const Mat& a);

bool is_invertible(const Mat& a);

/// One solution x of A x = b (x are right coefficients of the columns of A);
/// free coordinates are set to zero. Throws SingularMatrixError when
/// inconsistent.
std::vector<Scalar> solve(const Mat& a, const std::vector<Scalar>& b);

/// Basis of the right null space {x : A x = 0}, one column per basis vector.
Mat null_space(const Mat& a);

} // namespace flagrig
