#pragma once

#include "flagrig/nilpotent.hpp"

namespace flagrig {

/// Point of the complete flag manifold of F^n. The stored basis matrix B is
/// read as W_j = right-span of columns n, n-1, ..., n-j+1; two matrices give
/// the same flag iff they differ by right multiplication by an invertible
/// lower-triangular matrix. A unique echelon-like canonical representative is
/// computed on construction, so equality of flags is matrix equality.
class Flag {
  public:
    /// Canonicalizes an arbitrary invertible representative.
    explicit Flag(const Mat& basis);

    static Flag basepoint(int n, Field field); ///< the flag (W_j^-)
    static Flag plus_basepoint(int n, Field field); ///< the flag (W_j^+)

    int n() const { return basis_.rows(); }
    Field field() const { return basis_.field(); }
    const Mat& basis() const { return basis_; }

    bool operator==(const Flag& o) const { return basis_ == o.basis_; }
    bool operator!=(const Flag& o) const { return !(*this == o); }

  private:
    Flag() = default;
    Mat basis_;
};

/// Point of the Grassmannian G(j, n): an n x j full-column-rank matrix modulo
/// right GL(j, F), stored canonically.
class GrassmannPoint {
  public:
    GrassmannPoint(int n, const Mat& columns);

    int n() const { return cols_.rows(); }
    int j() const { return cols_.cols(); }
    Field field() const { return cols_.field(); }
    const Mat& columns() const { return cols_; }

    bool operator==(const GrassmannPoint& o) const { return cols_ == o.cols_; }
    bool operator!=(const GrassmannPoint& o) const { return !(*this == o); }

  private:
    Mat cols_;
};

/// Invertible matrix modulo scalars: all scalars over R and C, real scalars
/// only over H. Normalized so that the first nonzero entry in column-major
/// order is 1 (R/C), respectively has its first nonzero real component equal
/// to 1 (H).
class ProjElement {
  public:
    explicit ProjElement(const Mat& m);

    int n() const { return mat_.rows(); }
    Field field() const { return mat_.field(); }
    const Mat& matrix() const { return mat_; }

    ProjElement operator*(const ProjElement& o) const { return ProjElement(mat_ * o.mat_); }
    ProjElement inverse() const { return ProjElement(flagrig::inverse(mat_)); }

    bool operator==(const ProjElement& o) const { return mat_ == o.mat_; }
    bool operator!=(const ProjElement& o) const { return !(*this == o); }

  private:
    Mat mat_;
};

Flag act(const ProjElement& g, const Flag& f);
GrassmannPoint act(const ProjElement& g, const GrassmannPoint& w);

/// Orbit map alpha(g) = g . (W_j^-); a bijection of N onto the chart.
Flag alpha(const GroupElement& g);

/// Inverse of the orbit map by the inductive normal-form reduction: one
/// unipotent block factor is peeled off per level. Throws NotInChartError
/// when some W_j meets W_{n-j}^+ nontrivially.
GroupElement alpha_inverse(const Flag& f);

/// Chart membership: W_j ∩ W_{n-j}^+ = {0} for every j, decided by rank tests.
bool in_Nhat(const Flag& f);

/// Forgetful fibration remembering only W_j.
GrassmannPoint pi_j(const Flag& f, int j);

/// Orthocomplement involution psi(W_1,...,W_{n-1}) = (W_{n-1}^perp,...,W_1^perp)
/// with respect to the standard (Hermitian) product sum conj(z_i) w_i.
Flag psi(const Flag& f);

/// Left action of diag(r^{-1}, ..., r^{-n}); intertwines alpha with dilate.
Flag dilate_flag(const Rational& r, const Flag& f);

/// Square of the dilation-dynamics ratio of Lemma-style projections: the
/// rational (|v_1|^2+...+|v_{n-j}|^2) / (|v_{n-j+1}|^2+...+|v_n|^2) for a
/// spanning vector v of the line. Throws UndefinedBetaError when the line
/// lies inside W_{n-j}^+.
Rational beta_squared(const GrassmannPoint& line, int j);

} // namespace flagrig
