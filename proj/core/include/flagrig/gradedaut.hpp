#pragma once

#include <optional>

#include "flagrig/nilpotent.hpp"

namespace flagrig {

/// Field automorphism used by the hat-h factor: identity, complex conjugation,
/// or the quaternion automorphism h(a0 + a1 i + a2 j + a3 k) = a0 + lambda a1
/// + mu a2 + nu a3 with lambda^2 = mu^2 = (lambda mu)^2 = -1 and nu = lambda mu.
struct HSpec {
    enum class Kind { Identity, Conjugation, Quaternion };
    Kind kind = Kind::Identity;
    Scalar lambda, mu, nu;

    static HSpec identity() { return {}; }
    static HSpec conjugation();
    static HSpec quaternion(const Scalar& lambda, const Scalar& mu);

    /// Validates the constraints for the given field; throws DomainError.
    void validate(Field f) const;
    Scalar apply(const Scalar& x) const;
    bool operator==(const HSpec& o) const;
};

/// Layer-preserving real-linear self-map of the graded algebra, given by its
/// matrix on the distinguished real basis of V_1 and, when known, by the
/// matrices of its bracket-compatible extension to every layer.
class GradedMap {
  public:
    GradedMap(int n, Field field, Mat v1);

    int n() const { return n_; }
    Field field() const { return field_; }
    const Mat& v1() const { return layers_[0]; }
    bool has_extension() const { return static_cast<int>(layers_.size()) == n_ - 1; }
    const Mat& layer(int m) const;
    void set_layers(std::vector<Mat> layers);

    /// Real dimension of layer m.
    static int layer_dim(int n, Field field, int m) { return (n - m) * field_dim(field); }

    /// Applies the map; requires the extension unless the element lies in V_1.
    LieElement apply(const LieElement& a) const;

    /// Composition this ∘ other (other applied first); layerwise products.
    GradedMap compose_after(const GradedMap& other) const;

    bool operator==(const GradedMap& o) const;

  private:
    int n_;
    Field field_;
    std::vector<Mat> layers_; // layers_[m-1] acts on V_m
};

/// Classification certificate: the map equals tau^epsilon ∘ Ad_diag(lambda) ∘ hat_h,
/// with lambda normalized by lambda_n = 1.
struct AutCertificate {
    int epsilon = 0;
    std::vector<Scalar> lambda;
    HSpec h;
    bool operator==(const AutCertificate& o) const;
};

/// V_1 coordinate index of the real basis vector with unit `comp` on the
/// superdiagonal entry (i, i+1).
int v1_index(Field f, int i, int comp);

/// Builds a V_1 map from the images of the layer-one real basis vectors,
/// listed in v1_index order. Images must lie in V_1.
GradedMap graded_map_from_v1_images(int n, Field f, const std::vector<LieElement>& images);

/// Conjugation by diag(lambda): q X_{ij} -> lambda_i q lambda_j^{-1} X_{ij}.
GradedMap ad_diag(int n, const std::vector<Scalar>& lambda);

/// Coefficientwise field automorphism q X_{ij} -> h(q) X_{ij}.
GradedMap hat_h(int n, Field field, const HSpec& h);

/// tau as a graded map (its restriction to V_1 with the full extension).
GradedMap tau_graded_map(int n, Field field);

GradedMap identity_graded_map(int n, Field field);

/// tau^epsilon ∘ Ad_diag(lambda) ∘ hat_h for a certificate.
GradedMap construct_from_certificate(int n, Field field, const AutCertificate& cert);

/// Unique bracket-compatible extension of a V_1 map to all layers. Throws
/// NotAutomorphismError when the V_1 map is singular or the defining relations
/// of the higher layers are violated.
GradedMap extend_from_v1(const GradedMap& m);

/// Bracket compatibility of a fully extended (not necessarily invertible) map.
bool is_graded_homomorphism(const GradedMap& m);

bool is_graded_automorphism(const GradedMap& m);

/// Constraint-solving classification into tau^epsilon ∘ Ad_diag ∘ hat_h.
/// Requires n >= 4 over R and C, n >= 3 over H (UnsupportedRangeError below).
AutCertificate classify(const GradedMap& m);

/// Whether the map sends k_j ∩ V_1 (spanned by the lines F X_{i,i+1}, i != n-j)
/// into itself.
bool preserves_Kj(const GradedMap& m, int j);

bool preserves_all_Kj(const GradedMap& m);

} // namespace flagrig
