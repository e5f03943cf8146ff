#include "flagrig/pansu.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace flagrig {

namespace {

// Scalar with polynomial components, for matrices whose entries depend on
// symbolic coordinates.
struct SPoly {
    Field f;
    std::array<Poly, 4> c;

    SPoly(Field ff, int nvars) : f(ff), c{Poly(nvars), Poly(nvars), Poly(nvars), Poly(nvars)} {}

    static SPoly constant(Field f, int nvars, const Scalar& x) {
        SPoly s(f, nvars);
        for (int k = 0; k < field_dim(f); ++k)
            s.c[static_cast<size_t>(k)] = Poly::constant(nvars, x.comp(k));
        return s;
    }

    bool is_zero() const {
        for (const auto& p : c)
            if (!p.is_zero()) return false;
        return true;
    }

    SPoly operator+(const SPoly& o) const {
        SPoly r(f, c[0].nvars());
        for (size_t k = 0; k < 4; ++k) r.c[k] = c[k] + o.c[k];
        return r;
    }

    SPoly operator-(const SPoly& o) const {
        SPoly r(f, c[0].nvars());
        for (size_t k = 0; k < 4; ++k) r.c[k] = c[k] - o.c[k];
        return r;
    }

    SPoly operator*(const SPoly& o) const {
        const auto& a = c;
        const auto& b = o.c;
        SPoly r(f, c[0].nvars());
        switch (f) {
            case Field::R:
                r.c[0] = a[0] * b[0];
                break;
            case Field::C:
                r.c[0] = a[0] * b[0] - a[1] * b[1];
                r.c[1] = a[0] * b[1] + a[1] * b[0];
                break;
            case Field::H:
                r.c[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
                r.c[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2];
                r.c[2] = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1];
                r.c[3] = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0];
                break;
        }
        return r;
    }

    SPoly scale(const Rational& r) const {
        SPoly s(f, c[0].nvars());
        for (size_t k = 0; k < 4; ++k) s.c[k] = c[k].scale(r);
        return s;
    }
};

using PMat = std::vector<std::vector<SPoly>>;

PMat pmat_zero(int n, Field f, int nvars) {
    return PMat(static_cast<size_t>(n), std::vector<SPoly>(static_cast<size_t>(n), SPoly(f, nvars)));
}

PMat pmat_identity(int n, Field f, int nvars) {
    PMat m = pmat_zero(n, f, nvars);
    for (int i = 0; i < n; ++i)
        m[static_cast<size_t>(i)][static_cast<size_t>(i)] =
            SPoly::constant(f, nvars, Scalar::one(f));
    return m;
}

PMat pmat_mul(const PMat& a, const PMat& b) {
    const int n = static_cast<int>(a.size());
    const Field f = a[0][0].f;
    const int nvars = a[0][0].c[0].nvars();
    PMat r = pmat_zero(n, f, nvars);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[static_cast<size_t>(i)][static_cast<size_t>(k)].is_zero()) continue;
            for (int j = 0; j < n; ++j) {
                if (b[static_cast<size_t>(k)][static_cast<size_t>(j)].is_zero()) continue;
                r[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    r[static_cast<size_t>(i)][static_cast<size_t>(j)] +
                    a[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                        b[static_cast<size_t>(k)][static_cast<size_t>(j)];
            }
        }
    return r;
}

PMat pmat_add(const PMat& a, const PMat& b) {
    PMat r = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j) r[i][j] = a[i][j] + b[i][j];
    return r;
}

PMat pmat_sub(const PMat& a, const PMat& b) {
    PMat r = a;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j) r[i][j] = a[i][j] - b[i][j];
    return r;
}

PMat pmat_scale(const PMat& a, const Rational& r) {
    PMat out = a;
    for (auto& row : out)
        for (auto& e : row) e = e.scale(r);
    return out;
}

// Strictly upper-triangular matrix with the given coordinate polynomials.
PMat coords_to_matrix(const RealBasis& basis, const std::vector<Poly>& coords) {
    const int n = basis.n();
    const Field f = basis.field();
    const int nvars = coords.empty() ? 0 : coords[0].nvars();
    PMat m = pmat_zero(n, f, nvars);
    for (int a = 0; a < basis.size(); ++a) {
        const auto& e = basis.entry(a);
        m[static_cast<size_t>(e.i - 1)][static_cast<size_t>(e.j - 1)]
            .c[static_cast<size_t>(e.comp)] =
            m[static_cast<size_t>(e.i - 1)][static_cast<size_t>(e.j - 1)]
                .c[static_cast<size_t>(e.comp)] +
            coords[static_cast<size_t>(a)];
    }
    return m;
}

PMat pmat_exp(const PMat& m) {
    const int n = static_cast<int>(m.size());
    const Field f = m[0][0].f;
    const int nvars = m[0][0].c[0].nvars();
    PMat acc = pmat_identity(n, f, nvars);
    PMat term = pmat_identity(n, f, nvars);
    Rational fact(1);
    for (int k = 1; k <= n - 1; ++k) {
        term = pmat_mul(term, m);
        fact *= k;
        acc = pmat_add(acc, pmat_scale(term, Rational(1) / fact));
    }
    return acc;
}

std::vector<Poly> pmat_log_coords(const PMat& g, const RealBasis& basis) {
    const int n = static_cast<int>(g.size());
    const Field f = g[0][0].f;
    const int nvars = g[0][0].c[0].nvars();
    PMat a = pmat_sub(g, pmat_identity(n, f, nvars));
    PMat acc = pmat_zero(n, f, nvars);
    PMat term = pmat_identity(n, f, nvars);
    for (int k = 1; k <= n - 1; ++k) {
        term = pmat_mul(term, a);
        acc = pmat_add(acc, pmat_scale(term, Rational(k % 2 == 1 ? 1 : -1) / k));
    }
    std::vector<Poly> coords;
    for (int idx = 0; idx < basis.size(); ++idx) {
        const auto& e = basis.entry(idx);
        coords.push_back(acc[static_cast<size_t>(e.i - 1)][static_cast<size_t>(e.j - 1)]
                             .c[static_cast<size_t>(e.comp)]);
    }
    return coords;
}

PMat pmat_unipotent_inverse(const PMat& g) {
    const int n = static_cast<int>(g.size());
    const Field f = g[0][0].f;
    const int nvars = g[0][0].c[0].nvars();
    PMat a = pmat_sub(g, pmat_identity(n, f, nvars));
    PMat acc = pmat_identity(n, f, nvars);
    PMat term = pmat_identity(n, f, nvars);
    for (int k = 1; k <= n - 1; ++k) {
        term = pmat_mul(term, a);
        acc = pmat_add(acc, pmat_scale(term, Rational(k % 2 == 1 ? -1 : 1)));
    }
    return acc;
}

// Coordinates of f_x(u) = log(F(X)^{-1} F(X exp u)) with X a (possibly
// symbolic) group matrix; the u variables live at [u_offset, u_offset + dim).
std::vector<Poly> conjugated_coords(const PolyMapSpec& f, const PMat& x_mat, int nvars,
                                    int u_offset) {
    RealBasis basis(f.n(), f.field());
    const int dim = basis.size();

    std::vector<Poly> u_vars;
    for (int a = 0; a < dim; ++a) u_vars.push_back(Poly::variable(nvars, u_offset + a));

    PMat e_u = pmat_exp(coords_to_matrix(basis, u_vars));
    PMat p = pmat_mul(x_mat, e_u);
    std::vector<Poly> l = pmat_log_coords(p, basis);

    std::vector<Poly> w;
    for (const auto& coord : f.coords()) w.push_back(coord.substitute(l));
    PMat e2 = pmat_exp(coords_to_matrix(basis, w));

    std::vector<Poly> x_log = pmat_log_coords(x_mat, basis);
    std::vector<Poly> fx_coords;
    for (const auto& coord : f.coords()) fx_coords.push_back(coord.substitute(x_log));
    PMat f_of_x = pmat_exp(coords_to_matrix(basis, fx_coords));

    PMat q = pmat_mul(pmat_unipotent_inverse(f_of_x), e2);
    return pmat_log_coords(q, basis);
}

// Applies the r-weighting: coordinate a picks up r^{sum_b w_b e_b - w_a}.
std::vector<Poly> apply_r_weights(const std::vector<Poly>& coords, const RealBasis& basis,
                                  int u_offset) {
    std::vector<Poly> out;
    for (int a = 0; a < basis.size(); ++a) {
        const Poly& p = coords[static_cast<size_t>(a)];
        Poly q(p.nvars());
        for (const auto& [mono, c] : p.terms()) {
            int rexp = -basis.layer(a);
            for (int b = 0; b < basis.size(); ++b)
                rexp += basis.layer(b) * mono[static_cast<size_t>(u_offset + b)];
            Poly::Mono mm = mono;
            mm[0] += rexp;
            q.add_term(mm, c);
        }
        out.push_back(std::move(q));
    }
    return out;
}

} // namespace

PolyMapSpec::PolyMapSpec(int n, Field field, std::vector<Poly> coords)
    : n_(n), field_(field), coords_(std::move(coords)) {
    RealBasis basis(n, field);
    if (static_cast<int>(coords_.size()) != basis.size())
        throw DimensionMismatchError("PolyMapSpec: one polynomial per graded coordinate");
    for (const auto& p : coords_) {
        if (p.nvars() != basis.size())
            throw DimensionMismatchError("PolyMapSpec: polynomials must use the source coordinates");
        for (int v = 0; v < p.nvars(); ++v)
            if (p.min_exponent(v) < 0) throw DomainError("PolyMapSpec: negative exponents not allowed");
    }
}

PolyMapSpec PolyMapSpec::identity(int n, Field field) {
    RealBasis basis(n, field);
    std::vector<Poly> coords;
    for (int a = 0; a < basis.size(); ++a) coords.push_back(Poly::variable(basis.size(), a));
    return PolyMapSpec(n, field, std::move(coords));
}

PolyMapSpec PolyMapSpec::graded_affine(const GroupElement& h, const GradedMap& phi) {
    if (h.n() != phi.n() || h.field() != phi.field())
        throw DimensionMismatchError("graded_affine: mismatched inputs");
    if (!phi.has_extension()) throw DimensionMismatchError("graded_affine: need a full extension");
    RealBasis basis(h.n(), h.field());
    const int dim = basis.size();
    const int d = field_dim(h.field());
    // phi as linear coordinate polynomials.
    std::vector<Poly> w(static_cast<size_t>(dim), Poly(dim));
    for (int b = 0; b < dim; ++b) {
        const auto& e = basis.entry(b);
        const int lay = e.j - e.i;
        const Mat& lm = phi.layer(lay);
        for (int i2 = 1; i2 <= basis.n() - lay; ++i2)
            for (int c2 = 0; c2 < d; ++c2) {
                const Rational& v = lm.at((i2 - 1) * d + c2, (e.i - 1) * d + e.comp).re();
                if (rat_is_zero(v)) continue;
                int a = basis.index(i2, i2 + lay, c2);
                w[static_cast<size_t>(a)] =
                    w[static_cast<size_t>(a)] + Poly::variable(dim, b).scale(v);
            }
    }
    PMat e2 = pmat_exp(coords_to_matrix(basis, w));
    PMat hm = pmat_zero(h.n(), h.field(), dim);
    for (int i = 0; i < h.n(); ++i)
        for (int j = 0; j < h.n(); ++j)
            hm[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                SPoly::constant(h.field(), dim, h.matrix().at(i, j));
    return PolyMapSpec(h.n(), h.field(), pmat_log_coords(pmat_mul(hm, e2), basis));
}

PolyMapSpec PolyMapSpec::compose(const PolyMapSpec& f, const PolyMapSpec& g) {
    if (f.n() != g.n() || f.field() != g.field())
        throw DimensionMismatchError("PolyMapSpec::compose mismatch");
    std::vector<Poly> coords;
    for (const auto& p : f.coords_) coords.push_back(p.substitute(g.coords_));
    return PolyMapSpec(f.n(), f.field(), std::move(coords));
}

LieElement PolyMapSpec::apply(const LieElement& u) const {
    RealBasis basis(n_, field_);
    std::vector<Rational> x = u.real_coords(basis);
    std::vector<Rational> y;
    for (const auto& p : coords_) y.push_back(p.eval(x));
    return LieElement::from_real_coords(basis, y);
}

bool RescaledFamily::has_negative_r_powers() const {
    for (const auto& p : coords)
        if (p.min_exponent(0) < 0) return true;
    return false;
}

LieElement RescaledFamily::eval(const Rational& r, const LieElement& u) const {
    if (rat_is_zero(r)) throw DomainError("RescaledFamily::eval: r must be nonzero");
    RealBasis basis(n, field);
    std::vector<Rational> args{r};
    for (const Rational& c : u.real_coords(basis)) args.push_back(c);
    std::vector<Rational> out;
    for (const auto& p : coords) out.push_back(p.eval(args));
    return LieElement::from_real_coords(basis, out);
}

RescaledFamily rescale(const PolyMapSpec& f, const GroupElement& x) {
    if (f.n() != x.n() || f.field() != x.field()) throw DimensionMismatchError("rescale mismatch");
    RealBasis basis(f.n(), f.field());
    const int dim = basis.size();
    const int nvars = 1 + dim; // r, then u
    PMat xm = pmat_zero(f.n(), f.field(), nvars);
    for (int i = 0; i < f.n(); ++i)
        for (int j = 0; j < f.n(); ++j)
            xm[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                SPoly::constant(f.field(), nvars, x.matrix().at(i, j));
    std::vector<Poly> coords = conjugated_coords(f, xm, nvars, 1);
    RescaledFamily fam(f.n(), f.field(), x);
    fam.coords = apply_r_weights(coords, basis, 1);
    return fam;
}

namespace {

// Shared extraction of the linear r^0 data as rational coefficient columns.
// Returns per (a, b) the coefficient polynomial over the leftover variables.
struct LinearPart {
    std::vector<std::vector<Poly>> coef; // [a][b], arity = nvars of the input
    bool nonlinear = false;
};

LinearPart linear_r0_part(const std::vector<Poly>& coords, const RealBasis& basis, int u_offset) {
    const int dim = basis.size();
    LinearPart out;
    out.coef.assign(static_cast<size_t>(dim),
                    std::vector<Poly>(static_cast<size_t>(dim), Poly(coords[0].nvars())));
    for (int a = 0; a < dim; ++a) {
        Poly r0 = coords[static_cast<size_t>(a)].slice(0, 0);
        for (const auto& [mono, c] : r0.terms()) {
            int total = 0, which = -1;
            for (int b = 0; b < dim; ++b) {
                int e = mono[static_cast<size_t>(u_offset + b)];
                total += e;
                if (e > 0) which = b;
            }
            if (total != 1) {
                out.nonlinear = true;
                continue;
            }
            Poly::Mono mm = mono;
            mm[static_cast<size_t>(u_offset + which)] = 0;
            out.coef[static_cast<size_t>(a)][static_cast<size_t>(which)].add_term(mm, c);
        }
    }
    return out;
}

GradedMap graded_map_from_coefficients(
    int n, Field field, const RealBasis& basis,
    const std::function<Rational(int, int)>& entry) {
    const int d = field_dim(field);
    std::vector<Mat> layers;
    for (int m = 1; m <= n - 1; ++m) {
        const int dim_m = GradedMap::layer_dim(n, field, m);
        Mat lm(dim_m, dim_m, Field::R);
        for (int i = 1; i <= n - m; ++i)
            for (int ci = 0; ci < d; ++ci)
                for (int j = 1; j <= n - m; ++j)
                    for (int cj = 0; cj < d; ++cj) {
                        int a = basis.index(i, i + m, ci);
                        int b = basis.index(j, j + m, cj);
                        lm.at((i - 1) * d + ci, (j - 1) * d + cj) = Scalar(Field::R, entry(a, b));
                    }
        layers.push_back(std::move(lm));
    }
    GradedMap g(n, field, layers[0]);
    g.set_layers(std::move(layers));
    return g;
}

} // namespace

GradedMap pansu_differential(const PolyMapSpec& f, const GroupElement& x) {
    RescaledFamily fam = rescale(f, x);
    if (fam.has_negative_r_powers())
        throw NotPansuDifferentiableError("pansu_differential: negative powers of r persist");
    RealBasis basis(f.n(), f.field());
    LinearPart lin = linear_r0_part(fam.coords, basis, 1);
    if (lin.nonlinear)
        throw InternalConsistencyError("pansu_differential: the r^0 part is not linear");
    // Cross-layer coefficients cannot carry r^0 weight, so the layer blocks
    // below cover the whole linear part.
    GradedMap d = graded_map_from_coefficients(f.n(), f.field(), basis, [&](int a, int b) {
        const Poly& p = lin.coef[static_cast<size_t>(a)][static_cast<size_t>(b)];
        if (p.is_zero()) return Rational(0);
        return p.terms().begin()->second;
    });
    if (!is_graded_homomorphism(d))
        throw InternalConsistencyError("pansu_differential: the limit is not a homomorphism");
    return d;
}

LeftInvariantForm pansu_pullback(const PolyMapSpec& f, const GroupElement& x,
                                 const LeftInvariantForm& w) {
    return pullback_form(pansu_differential(f, x), w);
}

namespace {

struct DPoly {
    std::vector<std::pair<std::vector<int>, double>> terms;

    static DPoly from(const Poly& p) {
        DPoly d;
        for (const auto& [mono, c] : p.terms()) d.terms.emplace_back(mono, to_double(c));
        return d;
    }

    double eval(const std::vector<double>& x) const {
        double sum = 0;
        for (const auto& [mono, c] : terms) {
            double t = c;
            for (size_t v = 0; v < mono.size(); ++v)
                for (int k = 0; k < mono[v]; ++k) t *= x[v];
            sum += t;
        }
        return sum;
    }
};

int merge_sign(std::vector<int>& idx) {
    int sign = 1;
    for (size_t i = 1; i < idx.size(); ++i)
        for (size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
        }
    for (size_t i = 1; i < idx.size(); ++i)
        if (idx[i - 1] == idx[i]) return 0;
    return sign;
}

Poly poly_det(const std::vector<std::vector<Poly>>& m) {
    const size_t k = m.size();
    if (k == 1) return m[0][0];
    Poly det(m[0][0].nvars());
    for (size_t r = 0; r < k; ++r) {
        std::vector<std::vector<Poly>> minor;
        for (size_t i = 0; i < k; ++i) {
            if (i == r) continue;
            std::vector<Poly> row;
            for (size_t j = 1; j < k; ++j) row.push_back(m[i][j]);
            minor.push_back(std::move(row));
        }
        Poly term = m[r][0] * poly_det(minor);
        det = r % 2 == 0 ? det + term : det - term;
    }
    return det;
}

} // namespace

PullbackIdentityReport verify_pullback_identity(const PolyMapSpec& f, const LeftInvariantForm& alpha,
                                                const LeftInvariantForm& beta, const BumpSpec& bump,
                                                int cells_per_axis, int halvings) {
    PullbackIdentityReport report;
    report.hypotheses = check_pullback_hypotheses(alpha, beta);
    if (!report.hypotheses.all_ok())
        throw HypothesisError("verify_pullback_identity: the pullback hypotheses fail");
    if (alpha.n() != f.n() || alpha.field() != f.field())
        throw DimensionMismatchError("verify_pullback_identity: mismatched algebra");

    RealBasis basis(f.n(), f.field());
    const int dim = basis.size();
    if (static_cast<int>(bump.center.size()) != dim ||
        static_cast<int>(bump.box_halfwidth.size()) != dim ||
        static_cast<int>(bump.support_halfwidth.size()) != dim)
        throw DimensionMismatchError("verify_pullback_identity: bump arity mismatch");
    for (int i = 0; i < dim; ++i) {
        if (bump.support_halfwidth[static_cast<size_t>(i)] <= 0 ||
            bump.box_halfwidth[static_cast<size_t>(i)] <= 0)
            throw HypothesisError("verify_pullback_identity: degenerate box");
        if (bump.support_halfwidth[static_cast<size_t>(i)] > bump.box_halfwidth[static_cast<size_t>(i)])
            throw HypothesisError("verify_pullback_identity: bump support exceeds the box");
    }

    // Symbolic differential over the box: variables (r, u_1..u_dim, x_1..x_dim),
    // where u is the rescaling direction and x the base point.
    const int nvars = 1 + 2 * dim;
    std::vector<Poly> x_vars;
    for (int a = 0; a < dim; ++a) x_vars.push_back(Poly::variable(nvars, 1 + dim + a));
    PMat xm = pmat_exp(coords_to_matrix(basis, x_vars));
    std::vector<Poly> coords = apply_r_weights(conjugated_coords(f, xm, nvars, 1), basis, 1);
    for (const auto& p : coords)
        if (p.min_exponent(0) < 0)
            throw NotPansuDifferentiableError(
                "verify_pullback_identity: the map is not Pansu differentiable on the box");
    LinearPart lin = linear_r0_part(coords, basis, 1);
    if (lin.nonlinear)
        throw InternalConsistencyError("verify_pullback_identity: nonlinear r^0 part");

    // Differential coefficients as functions of the base point only.
    std::vector<std::vector<DPoly>> dcoef(static_cast<size_t>(dim),
                                          std::vector<DPoly>(static_cast<size_t>(dim)));
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            Poly p(dim);
            for (const auto& [mono, c] : lin.coef[static_cast<size_t>(a)][static_cast<size_t>(b)].terms()) {
                Poly::Mono mm(static_cast<size_t>(dim), 0);
                for (int v = 0; v < dim; ++v) mm[static_cast<size_t>(v)] = mono[static_cast<size_t>(1 + dim + v)];
                p.add_term(mm, c);
            }
            dcoef[static_cast<size_t>(a)][static_cast<size_t>(b)] = DPoly::from(p);
        }

    // Left-invariant frame fields in coordinates: column a of A(u) is the
    // t-linear part of log(exp(u) exp(t X_a)). The top theta-form equals the
    // coordinate volume exactly when det A = 1, which we assert.
    std::vector<std::vector<DPoly>> frame(static_cast<size_t>(dim),
                                          std::vector<DPoly>(static_cast<size_t>(dim)));
    {
        const int fvars = dim + 1; // u, then t
        std::vector<Poly> u_vars;
        for (int a = 0; a < dim; ++a) u_vars.push_back(Poly::variable(fvars, a));
        PMat eu = pmat_exp(coords_to_matrix(basis, u_vars));
        std::vector<std::vector<Poly>> a_mat(static_cast<size_t>(dim),
                                             std::vector<Poly>(static_cast<size_t>(dim), Poly(dim)));
        for (int a = 0; a < dim; ++a) {
            std::vector<Poly> dir(static_cast<size_t>(dim), Poly(fvars));
            dir[static_cast<size_t>(a)] = Poly::variable(fvars, dim);
            PMat et = pmat_exp(coords_to_matrix(basis, dir));
            std::vector<Poly> moved = pmat_log_coords(pmat_mul(eu, et), basis);
            for (int b = 0; b < dim; ++b) {
                Poly lin_t = moved[static_cast<size_t>(b)].slice(dim, 1);
                // Strip the t variable.
                Poly col(dim);
                for (const auto& [mono, c] : lin_t.terms()) {
                    Poly::Mono mm(static_cast<size_t>(dim), 0);
                    for (int v = 0; v < dim; ++v) mm[static_cast<size_t>(v)] = mono[static_cast<size_t>(v)];
                    col.add_term(mm, c);
                }
                a_mat[static_cast<size_t>(b)][static_cast<size_t>(a)] = col;
                frame[static_cast<size_t>(b)][static_cast<size_t>(a)] = DPoly::from(col);
            }
        }
        if (!(poly_det(a_mat) == Poly::constant(dim, 1)))
            throw InternalConsistencyError("verify_pullback_identity: frame determinant is not 1");
    }

    // Integrand bookkeeping: contributions c_J (X_a phi) beta_K with
    // J + {a} + K the full index set.
    std::vector<int> full;
    for (int a = 0; a < dim; ++a) full.push_back(a);

    auto bump_value = [&](const std::vector<double>& u, int deriv_axis) -> double {
        double prod = 1;
        for (int i = 0; i < dim; ++i) {
            double t = (u[static_cast<size_t>(i)] - to_double(bump.center[static_cast<size_t>(i)])) /
                       to_double(bump.support_halfwidth[static_cast<size_t>(i)]);
            if (t <= -1 || t >= 1) return 0;
            double base = 1 - t * t;
            if (i == deriv_axis) {
                prod *= 3 * base * base * (-2 * t) /
                        to_double(bump.support_halfwidth[static_cast<size_t>(i)]);
            } else {
                prod *= base * base * base;
            }
        }
        return prod;
    };

    auto integrand = [&](const std::vector<double>& u) -> double {
        // Pullback coefficients of alpha at this point.
        std::map<std::vector<int>, double> pulled;
        for (const auto& [idx, c] : alpha.terms()) {
            std::map<std::vector<int>, double> partial{{{}, to_double(c)}};
            for (int cov : idx) {
                std::map<std::vector<int>, double> next;
                for (const auto& [mono, pc] : partial) {
                    for (int b = 0; b < dim; ++b) {
                        if (basis.layer(b) != basis.layer(cov)) continue;
                        double v = dcoef[static_cast<size_t>(cov)][static_cast<size_t>(b)].eval(u);
                        if (v == 0) continue;
                        std::vector<int> nm = mono;
                        nm.push_back(b);
                        int sgn = merge_sign(nm);
                        if (sgn == 0) continue;
                        next[nm] += pc * v * sgn;
                    }
                }
                partial = std::move(next);
            }
            for (const auto& [mono, pc] : partial) pulled[mono] += pc;
        }
        // Wedge with d(phi beta) = sum_a (X_a phi) theta^a ^ beta.
        double total = 0;
        for (const auto& [jmono, cj] : pulled) {
            if (cj == 0) continue;
            for (int a = 0; a < dim; ++a) {
                double xaphi = 0;
                for (int b = 0; b < dim; ++b) {
                    double ab = frame[static_cast<size_t>(b)][static_cast<size_t>(a)].eval(u);
                    if (ab == 0) continue;
                    double pb = bump_value(u, b);
                    if (pb != 0) xaphi += ab * pb;
                }
                if (xaphi == 0) continue;
                for (const auto& [kmono, ck] : beta.terms()) {
                    std::vector<int> all = jmono;
                    all.push_back(a);
                    all.insert(all.end(), kmono.begin(), kmono.end());
                    if (static_cast<int>(all.size()) != dim) continue;
                    int sgn = merge_sign(all);
                    if (sgn == 0) continue;
                    total += cj * xaphi * to_double(ck) * sgn;
                }
            }
        }
        return total;
    };

    for (int level = 0; level <= halvings; ++level) {
        const long cells = static_cast<long>(cells_per_axis) << level;
        std::vector<double> lo(static_cast<size_t>(dim)), width(static_cast<size_t>(dim));
        double cellvol = 1;
        for (int i = 0; i < dim; ++i) {
            double c = to_double(bump.center[static_cast<size_t>(i)]);
            double h = to_double(bump.box_halfwidth[static_cast<size_t>(i)]);
            lo[static_cast<size_t>(i)] = c - h;
            width[static_cast<size_t>(i)] = 2 * h / static_cast<double>(cells);
            cellvol *= width[static_cast<size_t>(i)];
        }
        double sum = 0;
        std::vector<long> idx(static_cast<size_t>(dim), 0);
        std::vector<double> u(static_cast<size_t>(dim));
        for (;;) {
            for (int i = 0; i < dim; ++i)
                u[static_cast<size_t>(i)] =
                    lo[static_cast<size_t>(i)] + (static_cast<double>(idx[static_cast<size_t>(i)]) + 0.5) *
                                                      width[static_cast<size_t>(i)];
            sum += integrand(u);
            int carry = 0;
            while (carry < dim) {
                if (++idx[static_cast<size_t>(carry)] < cells) break;
                idx[static_cast<size_t>(carry)] = 0;
                ++carry;
            }
            if (carry == dim) break;
        }
        QuadratureLevel q;
        q.h = *std::max_element(width.begin(), width.end());
        q.residual = std::abs(sum * cellvol);
        report.levels.push_back(q);
    }
    for (size_t i = 1; i < report.levels.size(); ++i) {
        double prev = report.levels[i - 1].residual;
        report.ratios.push_back(prev == 0 ? 0 : report.levels[i].residual / prev);
    }
    return report;
}

namespace {

PolyMapSpec heisenberg_shear(const std::vector<Rational>& poly, bool x_direction) {
    const int n = 3;
    const Field field = Field::R;
    RealBasis basis(n, field);
    const int dim = basis.size();
    const int vx = basis.index(1, 2, 0);
    const int vy = basis.index(2, 3, 0);
    const int vz = basis.index(1, 3, 0);

    const int src = x_direction ? vy : vx;
    Poly p(dim), corr(dim);
    for (size_t k = 0; k < poly.size(); ++k) {
        if (rat_is_zero(poly[k])) continue;
        Poly mono = Poly::constant(dim, poly[k]);
        for (size_t e = 0; e <= k; ++e) mono = mono * Poly::variable(dim, src);
        p = p + mono;
        // Antiderivative term p_k t^{k+2} (1/(k+2) - 1/2), with the sign
        // flipped for the transverse direction.
        Rational coef = poly[k] * (Rational(1, static_cast<long>(k) + 2) - Rational(1, 2));
        if (!x_direction) coef = -coef;
        Poly cm = Poly::constant(dim, coef);
        for (size_t e = 0; e <= k + 1; ++e) cm = cm * Poly::variable(dim, src);
        corr = corr + cm;
    }

    std::vector<Poly> coords;
    for (int a = 0; a < dim; ++a) coords.push_back(Poly::variable(dim, a));
    if (x_direction)
        coords[static_cast<size_t>(vx)] = coords[static_cast<size_t>(vx)] + p;
    else
        coords[static_cast<size_t>(vy)] = coords[static_cast<size_t>(vy)] + p;
    coords[static_cast<size_t>(vz)] = coords[static_cast<size_t>(vz)] + corr;
    return PolyMapSpec(n, field, std::move(coords));
}

} // namespace

PolyMapSpec contact_shear_x(const std::vector<Rational>& p) { return heisenberg_shear(p, true); }

PolyMapSpec contact_shear_y(const std::vector<Rational>& q) { return heisenberg_shear(q, false); }

} // namespace flagrig
