#pragma once

#include <map>
#include <vector>

#include "flagrig/matrix.hpp"

namespace flagrig {

/// Layer dimensions and derived invariants of the grading of n_{n,F}.
/// Layer m is spanned by the entries on the m-th superdiagonal; its real
/// dimension is (n - m) * field_dim.
struct GradingInfo {
    int n = 0;
    Field field = Field::R;
    std::vector<int> layer_dims; ///< real dimension of V_1 .. V_{n-1}
    long nu = 0;                 ///< homogeneous dimension, sum of m * dim V_m
    int ndim = 0;                ///< total real dimension
};

GradingInfo grading_info(int n, Field field);

/// One real basis vector of n_{n,F}: the matrix unit X_{ij} multiplied by the
/// field unit with index `comp` (1, i, j or k).
struct BasisIndex {
    int i = 0, j = 0, comp = 0;
    bool operator==(const BasisIndex&) const = default;
};

/// Fixed enumeration of the distinguished real basis, ordered by (i, j)
/// lexicographically and then by component.
class RealBasis {
  public:
    RealBasis(int n, Field field);

    int n() const { return n_; }
    Field field() const { return field_; }
    int size() const { return static_cast<int>(entries_.size()); }
    const BasisIndex& entry(int idx) const { return entries_[static_cast<size_t>(idx)]; }
    int index(int i, int j, int comp) const;
    int layer(int idx) const { return entries_[static_cast<size_t>(idx)].j - entries_[static_cast<size_t>(idx)].i; }

  private:
    int n_;
    Field field_;
    std::vector<BasisIndex> entries_;
};

/// Element of the graded nilpotent Lie algebra: sparse strictly-upper
/// coefficients over the coefficient field.
class LieElement {
  public:
    LieElement(int n, Field field) : n_(n), field_(field) {
        if (n < 2) throw DimensionMismatchError("LieElement: n must be >= 2");
    }

    static LieElement basis(int n, Field field, int i, int j, int comp = 0);

    int n() const { return n_; }
    Field field() const { return field_; }
    const std::map<std::pair<int, int>, Scalar>& coeffs() const { return coeffs_; }

    Scalar coeff(int i, int j) const;
    void set_coeff(int i, int j, const Scalar& v);

    bool is_zero() const { return coeffs_.empty(); }
    bool operator==(const LieElement& o) const {
        return n_ == o.n_ && field_ == o.field_ && coeffs_ == o.coeffs_;
    }

    LieElement operator+(const LieElement& o) const;
    LieElement operator-(const LieElement& o) const;
    LieElement scale(const Rational& r) const;
    /// Module action q . a with q acting on each coefficient from the left
    /// (coefficients sit left of the matrix units; see basis()).
    LieElement left_scale(const Scalar& q) const;

    /// Component in layer m (entries with j - i == m).
    LieElement layer_component(int m) const;

    Mat to_matrix() const;
    static LieElement from_matrix(const Mat& m);

    std::vector<Rational> real_coords(const RealBasis& basis) const;
    static LieElement from_real_coords(const RealBasis& basis, const std::vector<Rational>& v);

    std::string to_string() const;

  private:
    int n_;
    Field field_;
    std::map<std::pair<int, int>, Scalar> coeffs_;
};

/// Unipotent upper-triangular matrix, the group N.
class GroupElement {
  public:
    GroupElement(int n, Field field) : mat_(Mat::identity(n, field)) {}
    explicit GroupElement(Mat m);

    int n() const { return mat_.rows(); }
    Field field() const { return mat_.field(); }
    const Mat& matrix() const { return mat_; }

    bool operator==(const GroupElement& o) const { return mat_ == o.mat_; }

  private:
    Mat mat_;
};

/// Matrix commutator a b - b a; the structure constants are never hand-entered.
LieElement bracket(const LieElement& a, const LieElement& b);

/// Carnot dilation: scales layer m by r^m (conjugation by diag(r^-1,...,r^-n)).
LieElement dilate(const Rational& r, const LieElement& a);

/// Terminating matrix exponential / logarithm (nilpotency degree <= n-1).
GroupElement exp(const LieElement& a);
LieElement log(const GroupElement& g);

GroupElement group_mul(const GroupElement& g, const GroupElement& h);
GroupElement group_inv(const GroupElement& g);

/// tau on the Lie algebra: (tau A)_{ij} = -conj(A)_{n-j+1, n-i+1}.
LieElement tau(const LieElement& a);
/// tau on the group: Pi (g^*)^{-1} Pi^{-1} with Pi the reversal e_l -> e_{n-l+1}.
GroupElement tau_group(const GroupElement& g);

} // namespace flagrig
