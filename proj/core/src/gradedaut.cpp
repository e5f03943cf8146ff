#include "flagrig/gradedaut.hpp"

namespace flagrig {

namespace {

// Real basis of layer m: (i, i+m, comp) ordered by i then comp.
int layer_index(Field f, int i, int comp) { return (i - 1) * field_dim(f) + comp; }

std::vector<Rational> layer_coords(const LieElement& a, int m) {
    const int d = field_dim(a.field());
    std::vector<Rational> v(static_cast<size_t>(GradedMap::layer_dim(a.n(), a.field(), m)), Rational(0));
    for (const auto& [ij, c] : a.coeffs()) {
        if (ij.second - ij.first != m)
            throw DimensionMismatchError("layer_coords: element not concentrated in the layer");
        for (int k = 0; k < d; ++k) v[static_cast<size_t>(layer_index(a.field(), ij.first, k))] = c.comp(k);
    }
    return v;
}

LieElement from_layer_coords(int n, Field f, int m, const std::vector<Rational>& v) {
    const int d = field_dim(f);
    LieElement a(n, f);
    for (int i = 1; i <= n - m; ++i) {
        Scalar c(f);
        bool nonzero = false;
        for (int k = 0; k < d; ++k) {
            const Rational& x = v[static_cast<size_t>(layer_index(f, i, k))];
            if (!rat_is_zero(x)) {
                c += Scalar::unit(f, k).scale(x);
                nonzero = true;
            }
        }
        if (nonzero) a.set_coeff(i, i + m, c);
    }
    return a;
}

Mat rational_column_matrix(int rows) { return Mat(rows, rows, Field::R); }

void set_rational_col(Mat& m, int col, const std::vector<Rational>& v) {
    for (size_t r = 0; r < v.size(); ++r) m.at(static_cast<int>(r), col) = Scalar(Field::R, v[r]);
}

std::vector<Rational> rational_apply(const Mat& m, const std::vector<Rational>& v) {
    std::vector<Rational> out(static_cast<size_t>(m.rows()), Rational(0));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const Rational& a = m.at(i, j).re();
            if (!rat_is_zero(a) && !rat_is_zero(v[static_cast<size_t>(j)]))
                out[static_cast<size_t>(i)] += a * v[static_cast<size_t>(j)];
        }
    return out;
}

// Builds all layer matrices of a map defined elementwise on basis vectors.
template <typename F>
std::vector<Mat> layers_from_action(int n, Field field, F&& image_of) {
    std::vector<Mat> layers;
    for (int m = 1; m <= n - 1; ++m) {
        const int dim = GradedMap::layer_dim(n, field, m);
        Mat mat = rational_column_matrix(dim);
        const int d = field_dim(field);
        for (int i = 1; i <= n - m; ++i)
            for (int k = 0; k < d; ++k) {
                LieElement img = image_of(i, i + m, k);
                set_rational_col(mat, layer_index(field, i, k), layer_coords(img, m));
            }
        layers.push_back(std::move(mat));
    }
    return layers;
}

} // namespace

HSpec HSpec::conjugation() {
    HSpec h;
    h.kind = Kind::Conjugation;
    return h;
}

HSpec HSpec::quaternion(const Scalar& lambda, const Scalar& mu) {
    HSpec h;
    h.kind = Kind::Quaternion;
    h.lambda = lambda;
    h.mu = mu;
    h.nu = lambda * mu;
    return h;
}

void HSpec::validate(Field f) const {
    switch (kind) {
        case Kind::Identity:
            return;
        case Kind::Conjugation:
            if (f != Field::C) throw DomainError("hat_h: conjugation is only available over C");
            return;
        case Kind::Quaternion: {
            if (f != Field::H) throw DomainError("hat_h: quaternion triple requires field H");
            const Scalar minus_one = -Scalar::one(Field::H);
            if (lambda * lambda != minus_one || mu * mu != minus_one ||
                (lambda * mu) * (lambda * mu) != minus_one)
                throw DomainError("hat_h: need lambda^2 = mu^2 = (lambda mu)^2 = -1");
            if (nu != lambda * mu) throw DomainError("hat_h: nu must equal lambda mu");
            return;
        }
    }
}

Scalar HSpec::apply(const Scalar& x) const {
    switch (kind) {
        case Kind::Identity:
            return x;
        case Kind::Conjugation:
            return x.conjugate();
        case Kind::Quaternion: {
            Scalar out = Scalar::one(Field::H).scale(x.comp(0));
            out += lambda.scale(x.comp(1));
            out += mu.scale(x.comp(2));
            out += nu.scale(x.comp(3));
            return out;
        }
    }
    return x;
}

bool HSpec::operator==(const HSpec& o) const {
    if (kind != o.kind) return false;
    if (kind != Kind::Quaternion) return true;
    return lambda == o.lambda && mu == o.mu && nu == o.nu;
}

GradedMap::GradedMap(int n, Field field, Mat v1) : n_(n), field_(field) {
    const int dim = layer_dim(n, field, 1);
    if (v1.rows() != dim || v1.cols() != dim || v1.field() != Field::R)
        throw DimensionMismatchError("GradedMap: V_1 matrix has wrong shape");
    layers_.push_back(std::move(v1));
}

const Mat& GradedMap::layer(int m) const {
    if (m < 1 || m > static_cast<int>(layers_.size()))
        throw DimensionMismatchError("GradedMap::layer: extension not available");
    return layers_[static_cast<size_t>(m - 1)];
}

void GradedMap::set_layers(std::vector<Mat> layers) {
    if (static_cast<int>(layers.size()) != n_ - 1)
        throw DimensionMismatchError("GradedMap::set_layers: need n-1 layers");
    layers_ = std::move(layers);
}

LieElement GradedMap::apply(const LieElement& a) const {
    if (a.n() != n_ || a.field() != field_) throw DimensionMismatchError("GradedMap::apply mismatch");
    LieElement out(n_, field_);
    for (int m = 1; m <= n_ - 1; ++m) {
        LieElement comp = a.layer_component(m);
        if (comp.is_zero()) continue;
        auto v = rational_apply(layer(m), layer_coords(comp, m));
        out = out + from_layer_coords(n_, field_, m, v);
    }
    return out;
}

GradedMap GradedMap::compose_after(const GradedMap& other) const {
    if (n_ != other.n_ || field_ != other.field_)
        throw DimensionMismatchError("GradedMap composition mismatch");
    GradedMap out(n_, field_, layer(1) * other.layer(1));
    if (has_extension() && other.has_extension()) {
        std::vector<Mat> layers;
        for (int m = 1; m <= n_ - 1; ++m) layers.push_back(layer(m) * other.layer(m));
        out.set_layers(std::move(layers));
    }
    return out;
}

bool GradedMap::operator==(const GradedMap& o) const {
    return n_ == o.n_ && field_ == o.field_ && v1() == o.v1();
}

bool AutCertificate::operator==(const AutCertificate& o) const {
    return epsilon == o.epsilon && lambda == o.lambda && h == o.h;
}

int v1_index(Field f, int i, int comp) { return layer_index(f, i, comp); }

GradedMap graded_map_from_v1_images(int n, Field f, const std::vector<LieElement>& images) {
    const int dim = GradedMap::layer_dim(n, f, 1);
    if (static_cast<int>(images.size()) != dim)
        throw DimensionMismatchError("graded_map_from_v1_images: need one image per basis vector");
    Mat mat = rational_column_matrix(dim);
    for (int c = 0; c < dim; ++c) set_rational_col(mat, c, layer_coords(images[static_cast<size_t>(c)], 1));
    return GradedMap(n, f, mat);
}

GradedMap ad_diag(int n, const std::vector<Scalar>& lambda) {
    if (static_cast<int>(lambda.size()) != n) throw DimensionMismatchError("ad_diag: need n scalars");
    const Field field = lambda[0].field();
    std::vector<Scalar> inv;
    for (const auto& l : lambda) {
        if (l.field() != field) throw FieldMismatchError("ad_diag: mixed fields");
        if (l.is_zero()) throw DomainError("ad_diag: diagonal entries must be nonzero");
        inv.push_back(l.invert());
    }
    auto layers = layers_from_action(n, field, [&](int i, int j, int comp) {
        Scalar c = lambda[static_cast<size_t>(i - 1)] * Scalar::unit(field, comp) * inv[static_cast<size_t>(j - 1)];
        return LieElement::basis(n, field, i, j).left_scale(c);
    });
    GradedMap m(n, field, layers[0]);
    m.set_layers(std::move(layers));
    return m;
}

GradedMap hat_h(int n, Field field, const HSpec& h) {
    h.validate(field);
    auto layers = layers_from_action(n, field, [&](int i, int j, int comp) {
        return LieElement::basis(n, field, i, j).left_scale(h.apply(Scalar::unit(field, comp)));
    });
    GradedMap m(n, field, layers[0]);
    m.set_layers(std::move(layers));
    return m;
}

GradedMap tau_graded_map(int n, Field field) {
    auto layers = layers_from_action(n, field, [&](int i, int j, int comp) {
        return tau(LieElement::basis(n, field, i, j, comp));
    });
    GradedMap m(n, field, layers[0]);
    m.set_layers(std::move(layers));
    return m;
}

GradedMap identity_graded_map(int n, Field field) {
    std::vector<Scalar> ones(static_cast<size_t>(n), Scalar::one(field));
    return ad_diag(n, ones);
}

GradedMap construct_from_certificate(int n, Field field, const AutCertificate& cert) {
    GradedMap m = ad_diag(n, cert.lambda).compose_after(hat_h(n, field, cert.h));
    if (cert.epsilon % 2 != 0) m = tau_graded_map(n, field).compose_after(m);
    return m;
}

GradedMap extend_from_v1(const GradedMap& m) {
    const int n = m.n();
    const Field field = m.field();
    if (!is_invertible(m.v1()))
        throw NotAutomorphismError("extend_from_v1: V_1 map is not injective");

    // phi(q X_{i,i+m}) := [phi(q X_{i,i+1}), phi(X_{i+1,i+m})], then verify all
    // remaining bracket relations between basis elements.
    std::vector<Mat> layers{m.v1()};
    const int d = field_dim(field);
    for (int lay = 2; lay <= n - 1; ++lay) {
        const int dim = GradedMap::layer_dim(n, field, lay);
        Mat mat = rational_column_matrix(dim);
        for (int i = 1; i <= n - lay; ++i)
            for (int k = 0; k < d; ++k) {
                LieElement left = LieElement::basis(n, field, i, i + 1, k);
                LieElement right = LieElement::basis(n, field, i + 1, i + lay);
                auto img_left_coords = rational_apply(layers[0], layer_coords(left, 1));
                LieElement img_left = from_layer_coords(n, field, 1, img_left_coords);
                auto img_right_coords =
                    rational_apply(layers[static_cast<size_t>(lay - 2)], layer_coords(right, lay - 1));
                LieElement img_right = from_layer_coords(n, field, lay - 1, img_right_coords);
                LieElement img = bracket(img_left, img_right);
                set_rational_col(mat, layer_index(field, i, k), layer_coords(img, lay));
            }
        layers.push_back(std::move(mat));
    }
    GradedMap full(n, field, layers[0]);
    full.set_layers(layers);
    if (!is_graded_homomorphism(full))
        throw NotAutomorphismError("extend_from_v1: bracket relations of higher layers violated");
    for (int lay = 2; lay <= n - 1; ++lay)
        if (!is_invertible(full.layer(lay)))
            throw NotAutomorphismError("extend_from_v1: extension is not bijective");
    return full;
}

// Compatibility with brackets against V_1 suffices: V_1 generates, and the
// Jacobi identity propagates the relation to deeper layer pairs by induction.
bool is_graded_homomorphism(const GradedMap& m) {
    const int n = m.n();
    const Field field = m.field();
    const int d = field_dim(field);
    for (int q = 1; q <= n - 2; ++q)
        for (int i = 1; i <= n - 1; ++i)
            for (int ci = 0; ci < d; ++ci) {
                LieElement a = LieElement::basis(n, field, i, i + 1, ci);
                LieElement ma = m.apply(a);
                for (int j = 1; j <= n - q; ++j)
                    for (int cj = 0; cj < d; ++cj) {
                        LieElement b = LieElement::basis(n, field, j, j + q, cj);
                        LieElement lhs = m.apply(bracket(a, b));
                        LieElement rhs = bracket(ma, m.apply(b));
                        if (!(lhs == rhs)) return false;
                    }
            }
    return true;
}

bool is_graded_automorphism(const GradedMap& m) {
    try {
        extend_from_v1(m);
        return true;
    } catch (const NotAutomorphismError&) {
        return false;
    }
}

namespace {

// Support lines (i, j) of the image of a V_1 basis vector under the map.
std::vector<std::pair<int, int>> image_support(const GradedMap& m, int i, int comp) {
    LieElement img = from_layer_coords(
        m.n(), m.field(), 1,
        rational_apply(m.v1(), layer_coords(LieElement::basis(m.n(), m.field(), i, i + 1, comp), 1)));
    std::vector<std::pair<int, int>> lines;
    for (const auto& [ij, c] : img.coeffs()) {
        (void)c;
        lines.push_back(ij);
    }
    return lines;
}

} // namespace

AutCertificate classify(const GradedMap& m) {
    const int n = m.n();
    const Field field = m.field();
    if ((field == Field::H && n < 3) || (field != Field::H && n < 4))
        throw UnsupportedRangeError("classify: below the rigidity threshold (n >= 4 for R/C, n >= 3 for H)");
    GradedMap full = extend_from_v1(m);

    const int d = field_dim(field);
    bool straight = true, reversed = true;
    for (int i = 1; i <= n - 1; ++i)
        for (int k = 0; k < d; ++k)
            for (const auto& line : image_support(full, i, k)) {
                if (line != std::make_pair(i, i + 1)) straight = false;
                if (line != std::make_pair(n - i, n - i + 1)) reversed = false;
            }
    int epsilon;
    if (straight)
        epsilon = 0;
    else if (reversed)
        epsilon = 1;
    else
        throw NotAutomorphismError("classify: superdiagonal lines are not permuted as an automorphism would");

    GradedMap a = epsilon ? tau_graded_map(n, field).compose_after(full) : full;

    // Back-substitution: lambda_n = 1, lambda_i = a_i lambda_{i+1}.
    std::vector<Scalar> coeff(static_cast<size_t>(n - 1), Scalar::zero(field));
    for (int i = 1; i <= n - 1; ++i) {
        LieElement img = a.apply(LieElement::basis(n, field, i, i + 1));
        coeff[static_cast<size_t>(i - 1)] = img.coeff(i, i + 1);
    }
    std::vector<Scalar> lambda(static_cast<size_t>(n), Scalar::one(field));
    for (int i = n - 1; i >= 1; --i)
        lambda[static_cast<size_t>(i - 1)] = coeff[static_cast<size_t>(i - 1)] * lambda[static_cast<size_t>(i)];

    std::vector<Scalar> lambda_inv;
    for (const auto& l : lambda) lambda_inv.push_back(l.invert());
    GradedMap b = ad_diag(n, lambda_inv).compose_after(a);

    HSpec h = HSpec::identity();
    if (field == Field::C) {
        Scalar c = b.apply(LieElement::basis(n, field, 1, 2, 1)).coeff(1, 2);
        if (c == Scalar::unit(Field::C, 1))
            h = HSpec::identity();
        else if (c == -Scalar::unit(Field::C, 1))
            h = HSpec::conjugation();
        else
            throw NotAutomorphismError("classify: residual map is neither linear nor antilinear");
    } else if (field == Field::H) {
        Scalar hl = b.apply(LieElement::basis(n, field, 1, 2, 1)).coeff(1, 2);
        Scalar hm = b.apply(LieElement::basis(n, field, 1, 2, 2)).coeff(1, 2);
        if (hl == Scalar::unit(Field::H, 1) && hm == Scalar::unit(Field::H, 2))
            h = HSpec::identity();
        else
            h = HSpec::quaternion(hl, hm);
        h.validate(field);
    }

    AutCertificate cert{epsilon, lambda, h};
    if (!(construct_from_certificate(n, field, cert) == m))
        throw NotAutomorphismError("classify: certificate does not reproduce the map");
    return cert;
}

bool preserves_Kj(const GradedMap& m, int j) {
    const int n = m.n();
    if (j < 1 || j > n - 1) throw DimensionMismatchError("preserves_Kj: j out of range");
    const int d = field_dim(m.field());
    const int excluded = n - j;
    for (int i = 1; i <= n - 1; ++i) {
        if (i == excluded) continue;
        for (int k = 0; k < d; ++k)
            for (const auto& line : image_support(m, i, k))
                if (line.first == excluded) return false;
    }
    return true;
}

bool preserves_all_Kj(const GradedMap& m) {
    for (int j = 1; j <= m.n() - 1; ++j)
        if (!preserves_Kj(m, j)) return false;
    return true;
}

} // namespace flagrig
