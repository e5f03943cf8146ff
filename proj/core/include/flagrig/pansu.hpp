#pragma once

#include "flagrig/forms.hpp"
#include "flagrig/poly.hpp"

namespace flagrig {

/// Polynomial self-map of the group in exponential coordinates of the first
/// kind: one rational polynomial per graded real coordinate, in the source
/// coordinates (RealBasis order).
class PolyMapSpec {
  public:
    PolyMapSpec(int n, Field field, std::vector<Poly> coords);

    static PolyMapSpec identity(int n, Field field);
    /// Affine map log(h exp(phi(u))) for a fully extended graded map phi.
    static PolyMapSpec graded_affine(const GroupElement& h, const GradedMap& phi);
    /// Composition f after g, by coordinate substitution.
    static PolyMapSpec compose(const PolyMapSpec& f, const PolyMapSpec& g);

    int n() const { return n_; }
    Field field() const { return field_; }
    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<Poly>& coords() const { return coords_; }

    /// The map applied to a point of the algebra (exp coordinates).
    LieElement apply(const LieElement& u) const;

  private:
    int n_;
    Field field_;
    std::vector<Poly> coords_;
};

/// The rescaled family delta_{1/r} ∘ f_x ∘ delta_r with coefficients stored as
/// exact Laurent polynomials in r (variable 0; source coordinates follow).
struct RescaledFamily {
    int n = 0;
    Field field = Field::R;
    GroupElement base;
    std::vector<Poly> coords;

    RescaledFamily(int n_, Field f_, GroupElement b_) : n(n_), field(f_), base(std::move(b_)) {}

    bool has_negative_r_powers() const;
    /// Pointwise evaluation at a rational r.
    LieElement eval(const Rational& r, const LieElement& u) const;
};

RescaledFamily rescale(const PolyMapSpec& f, const GroupElement& x);

/// Symbolic Pansu differential: the r^0 part of the rescaled family when no
/// negative powers of r survive, verified to be a graded homomorphism.
GradedMap pansu_differential(const PolyMapSpec& f, const GroupElement& x);

LeftInvariantForm pansu_pullback(const PolyMapSpec& f, const GroupElement& x,
                                 const LeftInvariantForm& w);

/// Tensor-product bump (1 - t^2)^3 per coordinate, clamped to zero outside
/// its support box; the support must sit inside the integration box.
struct BumpSpec {
    std::vector<Rational> center;
    std::vector<Rational> box_halfwidth;
    std::vector<Rational> support_halfwidth;
};

struct QuadratureLevel {
    double h = 0;
    double residual = 0;
};

struct PullbackIdentityReport {
    PullbackHypotheses hypotheses;
    std::vector<QuadratureLevel> levels;
    /// residual(h_{k+1}) / residual(h_k)
    std::vector<double> ratios;
};

/// Midpoint-rule check of the pullback identity int f_P^*(alpha) ^ d(phi beta)
/// over the box, at the base grid and `halvings` refinements. Refuses when the
/// hypotheses fail or the bump support exceeds the box.
PullbackIdentityReport verify_pullback_identity(const PolyMapSpec& f, const LeftInvariantForm& alpha,
                                                const LeftInvariantForm& beta, const BumpSpec& bump,
                                                int cells_per_axis, int halvings);

/// Contact shear of the n = 3 Heisenberg-type group moving the first-layer
/// coordinate at (1,2) by p(second coordinate), lifted compatibly in the
/// center; p is given by coefficients of t, t^2, ... (constant term first).
PolyMapSpec contact_shear_x(const std::vector<Rational>& p);
/// The transverse shear moving the (2,3) coordinate by q(first coordinate).
PolyMapSpec contact_shear_y(const std::vector<Rational>& q);

} // namespace flagrig
