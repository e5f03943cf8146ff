#pragma once

#include <functional>

#include "flagrig/flag.hpp"
#include "flagrig/gradedaut.hpp"
#include "flagrig/rng.hpp"

namespace flagrig {

/// n+1 lines in F^n, any n of which span. Index 0 is the unit point.
class ProjectiveFrame {
  public:
    ProjectiveFrame(int n, std::vector<GrassmannPoint> points);

    int n() const { return n_; }
    Field field() const { return points_[0].field(); }
    const std::vector<GrassmannPoint>& points() const { return points_; }
    const GrassmannPoint& point(int i) const { return points_[static_cast<size_t>(i)]; }

  private:
    int n_;
    std::vector<GrassmannPoint> points_;
};

/// Frame plus the auxiliary line span(W^n, W^0) ∩ span(W^1, ..., W^{n-1}).
struct AugmentedFrame {
    ProjectiveFrame frame;
    GrassmannPoint extra;
};

/// Exact span test: true iff the points are rank-one and every n-element
/// subset spans F^n.
bool is_frame(const std::vector<GrassmannPoint>& points);

ProjectiveFrame standard_frame(int n, Field field);
AugmentedFrame standard_augmented_frame(int n, Field field);

/// Computes the augmentation line of a valid frame.
AugmentedFrame augment(const ProjectiveFrame& frame);

/// A g in PGL(n, F) carrying frame A to frame B pointwise. Unique as a
/// ProjElement over R and C; over H the right scalar of the unit point is
/// fixed to 1, which picks one representative of the stabilizer coset.
ProjElement solve_frame_map(const ProjectiveFrame& a, const ProjectiveFrame& b);

/// Sample pair for the affine fit: a chart point and its image in F^m.
struct AffineSample {
    std::vector<Scalar> x;
    std::vector<Scalar> y;
};

/// Fitted model phi(x)_i = a h(x_i) + b_i (h = identity over R and C).
/// zero_map marks the degenerate branch where every image coincides.
struct SpecialAffineFit {
    bool zero_map = false;
    Scalar a;
    HSpec h;
    std::vector<Scalar> offset;
};

/// Fits the diagonal affine model to exact samples after validating the
/// parallel-line hypotheses on all sampled collinear triples; every provided
/// sample must reproduce exactly under the fitted model.
SpecialAffineFit special_affine_fit(const std::vector<AffineSample>& samples, Field field, int m);

/// Map of flags defined on a chart ball: the domain is the set of flags
/// alpha(exp(u)) whose graded coordinates lie within `radius` of the center's
/// coordinates in every component.
struct FlagMapOracle {
    std::function<Flag(const Flag&)> fn;
    GroupElement center;
    Rational radius;

    FlagMapOracle(std::function<Flag(const Flag&)> f, GroupElement c, Rational r)
        : fn(std::move(f)), center(std::move(c)), radius(std::move(r)) {}

    bool contains(const Flag& f) const;
    /// Evaluates after a domain check.
    Flag eval(const Flag& f) const;
};

/// Projective reconstruction of a fibration-preserving map: verifies fiber
/// preservation on sampled pairs, shrinks an augmented frame into the domain
/// by dyadic dilations, solves the two frame normalizations, extracts the
/// diagonal affine model through the chart of lines near [e_n], and returns a
/// g agreeing with the oracle on held-out samples.
ProjElement reconstruct_from_fibration_map(const FlagMapOracle& oracle, const Flag& base, Rng& rng);

/// The escape flag of a non-identity lower-unipotent g: a flag inside the
/// chart whose g-image leaves it, built from the lowest nonzero below-diagonal
/// column of g.
Flag escape_flag(const Mat& g);

} // namespace flagrig
