#include "flagrig/forms.hpp"

#include <algorithm>
#include <mutex>

namespace flagrig {

namespace {

// Sign of sorting the index list; 0 coefficient on duplicates.
int sort_sign(std::vector<int>& idx) {
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

struct StructData {
    RealBasis basis;
    // coords of [X_b, X_c] for b < c
    std::map<std::pair<int, int>, std::vector<Rational>> brackets;
    explicit StructData(int n, Field f) : basis(n, f) {
        for (int b = 0; b < basis.size(); ++b)
            for (int c = b + 1; c < basis.size(); ++c) {
                const auto& eb = basis.entry(b);
                const auto& ec = basis.entry(c);
                LieElement br = bracket(LieElement::basis(n, f, eb.i, eb.j, eb.comp),
                                        LieElement::basis(n, f, ec.i, ec.j, ec.comp));
                if (!br.is_zero()) brackets[{b, c}] = br.real_coords(basis);
            }
    }
};

const StructData& structure(int n, Field f) {
    static std::map<std::pair<int, int>, StructData> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, static_cast<int>(f));
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, StructData(n, f)).first;
    return it->second;
}

} // namespace

LeftInvariantForm::LeftInvariantForm(int n, Field field, int degree)
    : n_(n), field_(field), degree_(degree) {
    if (n < 2 || n > 8) throw DimensionMismatchError("LeftInvariantForm: n out of the supported range");
    if (degree < 0) throw DimensionMismatchError("LeftInvariantForm: negative degree");
}

void LeftInvariantForm::add_term(std::vector<int> indices, const Rational& c) {
    if (static_cast<int>(indices.size()) != degree_)
        throw DimensionMismatchError("add_term: arity does not match the declared degree");
    if (rat_is_zero(c)) return;
    int sign = sort_sign(indices);
    if (sign == 0) return;
    Rational& slot = terms_[indices];
    slot += sign > 0 ? c : -c;
    if (rat_is_zero(slot)) terms_.erase(indices);
}

Rational LeftInvariantForm::coefficient(const std::vector<int>& indices) const {
    auto it = terms_.find(indices);
    return it == terms_.end() ? Rational(0) : it->second;
}

LeftInvariantForm LeftInvariantForm::operator+(const LeftInvariantForm& o) const {
    if (n_ != o.n_ || field_ != o.field_ || degree_ != o.degree_)
        throw DimensionMismatchError("form sum mismatch");
    LeftInvariantForm r = *this;
    for (const auto& [idx, c] : o.terms_) r.add_term(idx, c);
    return r;
}

LeftInvariantForm LeftInvariantForm::operator-(const LeftInvariantForm& o) const {
    return *this + o.scale(-1);
}

LeftInvariantForm LeftInvariantForm::scale(const Rational& r) const {
    LeftInvariantForm out(n_, field_, degree_);
    if (rat_is_zero(r)) return out;
    for (const auto& [idx, c] : terms_) out.terms_[idx] = c * r;
    return out;
}

bool LeftInvariantForm::operator==(const LeftInvariantForm& o) const {
    return n_ == o.n_ && field_ == o.field_ && degree_ == o.degree_ && terms_ == o.terms_;
}

std::string LeftInvariantForm::to_string() const {
    if (terms_.empty()) return "0";
    const RealBasis& basis = structure(n_, field_).basis;
    static const char* comp_names[4] = {"theta", "beta", "gamma", "eta"};
    std::string out;
    for (const auto& [idx, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += "(" + rational_to_string(c) + ")";
        for (int a : idx) {
            const auto& e = basis.entry(a);
            out += std::string(" ") + comp_names[e.comp] + "_{" + std::to_string(e.i) + "," +
                   std::to_string(e.j) + "}";
        }
    }
    return out;
}

LeftInvariantForm one_form_constant(int n, Field field) {
    LeftInvariantForm w(n, field, 0);
    w.add_term({}, 1);
    return w;
}

LeftInvariantForm theta(int n, Field field, int i, int j, int comp) {
    const RealBasis& basis = structure(n, field).basis;
    LeftInvariantForm w(n, field, 1);
    w.add_term({basis.index(i, j, comp)}, 1);
    return w;
}

LeftInvariantForm wedge(const LeftInvariantForm& a, const LeftInvariantForm& b) {
    if (a.n() != b.n() || a.field() != b.field()) throw DimensionMismatchError("wedge mismatch");
    LeftInvariantForm out(a.n(), a.field(), a.degree() + b.degree());
    for (const auto& [ia, ca] : a.terms())
        for (const auto& [ib, cb] : b.terms()) {
            std::vector<int> idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            out.add_term(std::move(idx), ca * cb);
        }
    return out;
}

LeftInvariantForm d(const LeftInvariantForm& w) {
    const StructData& sd = structure(w.n(), w.field());
    LeftInvariantForm out(w.n(), w.field(), w.degree() + 1);
    for (const auto& [idx, c] : w.terms()) {
        for (size_t l = 0; l < idx.size(); ++l) {
            const int a = idx[l];
            const Rational outer = (l % 2 == 0) ? c : -c;
            for (const auto& [bc, coords] : sd.brackets) {
                const Rational& cf = coords[static_cast<size_t>(a)];
                if (rat_is_zero(cf)) continue;
                // d theta^a contributes -cf * theta^b ^ theta^c.
                std::vector<int> nidx;
                nidx.reserve(idx.size() + 1);
                for (size_t m = 0; m < idx.size(); ++m) {
                    if (m == l) {
                        nidx.push_back(bc.first);
                        nidx.push_back(bc.second);
                    } else {
                        nidx.push_back(idx[m]);
                    }
                }
                out.add_term(std::move(nidx), -outer * cf);
            }
        }
    }
    return out;
}

WeightedDegree weighted_degree(const LeftInvariantForm& w) {
    WeightedDegree out;
    out.degree = w.degree();
    if (w.is_zero()) {
        out.minus_infinity = true;
        return out;
    }
    const RealBasis& basis = structure(w.n(), w.field()).basis;
    bool first = true;
    for (const auto& [idx, c] : w.terms()) {
        (void)c;
        long wt = 0;
        for (int a : idx) wt -= basis.layer(a);
        if (first || wt > out.weight) out.weight = wt;
        first = false;
    }
    return out;
}

LeftInvariantForm interior_product(const LieElement& x, const LeftInvariantForm& w) {
    if (x.n() != w.n() || x.field() != w.field())
        throw DimensionMismatchError("interior_product mismatch");
    if (w.degree() == 0) return LeftInvariantForm(w.n(), w.field(), 0);
    const RealBasis& basis = structure(w.n(), w.field()).basis;
    std::vector<Rational> coords = x.real_coords(basis);
    LeftInvariantForm out(w.n(), w.field(), w.degree() - 1);
    for (const auto& [idx, c] : w.terms())
        for (size_t pos = 0; pos < idx.size(); ++pos) {
            const Rational& xv = coords[static_cast<size_t>(idx[pos])];
            if (rat_is_zero(xv)) continue;
            std::vector<int> nidx;
            for (size_t m = 0; m < idx.size(); ++m)
                if (m != pos) nidx.push_back(idx[m]);
            out.add_term(std::move(nidx), (pos % 2 == 0 ? c : -c) * xv);
        }
    return out;
}

LeftInvariantForm pullback_form(const GradedMap& m, const LeftInvariantForm& w) {
    if (m.n() != w.n() || m.field() != w.field()) throw DimensionMismatchError("pullback mismatch");
    if (!m.has_extension())
        throw DimensionMismatchError("pullback_form: map extension not available");
    const RealBasis& basis = structure(w.n(), w.field()).basis;
    const int d = field_dim(w.field());

    // Sparse row of the pullback of a single covector: coefficients of the
    // map's layer matrix along the covector's row.
    auto covector_row = [&](int a) {
        const auto& e = basis.entry(a);
        const int lay = e.j - e.i;
        const Mat& lm = m.layer(lay);
        std::vector<std::pair<int, Rational>> row;
        const int r = (e.i - 1) * d + e.comp;
        for (int i2 = 1; i2 <= w.n() - lay; ++i2)
            for (int c2 = 0; c2 < d; ++c2) {
                const Rational& v = lm.at(r, (i2 - 1) * d + c2).re();
                if (!rat_is_zero(v)) row.emplace_back(basis.index(i2, i2 + lay, c2), v);
            }
        return row;
    };

    LeftInvariantForm out(w.n(), w.field(), w.degree());
    for (const auto& [idx, c] : w.terms()) {
        std::map<std::vector<int>, Rational> partial{{{}, c}};
        for (int a : idx) {
            auto row = covector_row(a);
            std::map<std::vector<int>, Rational> next;
            for (const auto& [mono, pc] : partial)
                for (const auto& [b, v] : row) {
                    auto where = std::lower_bound(mono.begin(), mono.end(), b);
                    if (where != mono.end() && *where == b) continue;
                    std::vector<int> nm = mono;
                    size_t pos = static_cast<size_t>(where - mono.begin());
                    nm.insert(nm.begin() + static_cast<long>(pos), b);
                    // Moving theta^b left past the later factors flips signs.
                    int sgn = ((mono.size() - pos) % 2 == 0) ? 1 : -1;
                    Rational& slot = next[nm];
                    slot += pc * v * sgn;
                    if (rat_is_zero(slot)) next.erase(nm);
                }
            partial = std::move(next);
        }
        for (const auto& [mono, pc] : partial) out.add_term(mono, pc);
    }
    return out;
}

LeftInvariantForm omega_plus(int n) {
    LeftInvariantForm w = one_form_constant(n, Field::R);
    for (int j = 2; j <= n; ++j) w = wedge(w, theta(n, Field::R, 1, j));
    return w;
}

LeftInvariantForm omega_minus(int n) {
    LeftInvariantForm w = one_form_constant(n, Field::R);
    for (int i = n - 1; i >= 1; --i) w = wedge(w, theta(n, Field::R, i, n));
    return w;
}

LeftInvariantForm eta_k_minus(int n, int k) {
    if (k < 2 || k > n - 1) throw DimensionMismatchError("eta_k_minus: need 2 <= k <= n-1");
    LeftInvariantForm w = one_form_constant(n, Field::R);
    for (int i = 2; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            if (i == k && j == k + 1) continue;
            w = wedge(w, theta(n, Field::R, i, j));
        }
    return w;
}

LeftInvariantForm eta_k_plus(int n, int k) {
    if (k < 1 || k > n - 2) throw DimensionMismatchError("eta_k_plus: need 1 <= k <= n-2");
    LeftInvariantForm w = one_form_constant(n, Field::R);
    for (int i = 1; i <= n - 1; ++i)
        for (int j = i + 1; j <= n - 1; ++j) {
            if (i == k && j == k + 1) continue;
            w = wedge(w, theta(n, Field::R, i, j));
        }
    return w;
}

LeftInvariantForm n4_form(const std::string& name) {
    const int n = 4;
    if (name == "alpha0") return theta(n, Field::R, 2, 3);
    if (name == "alpha1") return theta(n, Field::R, 1, 2);
    if (name == "alpha2") return theta(n, Field::R, 3, 4);
    if (name == "beta1") return theta(n, Field::R, 1, 3);
    if (name == "beta2") return theta(n, Field::R, 2, 4).scale(-1);
    if (name == "gamma") return theta(n, Field::R, 1, 4);
    throw UsageError("n4_form: unknown name '" + name + "'");
}

LeftInvariantForm n4_omega() {
    return wedge(wedge(n4_form("alpha1"), n4_form("beta1")), n4_form("gamma"));
}

LeftInvariantForm n4_eta(const std::string& which) {
    if (which == "a2b2") return wedge(n4_form("alpha2"), n4_form("beta2"));
    if (which == "a0b2") return wedge(n4_form("alpha0"), n4_form("beta2"));
    if (which == "a1b1") return wedge(n4_form("alpha1"), n4_form("beta1"));
    if (which == "a0b1") return wedge(n4_form("alpha0"), n4_form("beta1"));
    throw UsageError("n4_eta: unknown kind '" + which + "'");
}

namespace {

LeftInvariantForm quaternion_block(int n, int i, int j) {
    LeftInvariantForm w = one_form_constant(n, Field::H);
    for (int c = 0; c < 4; ++c) w = wedge(w, theta(n, Field::H, i, j, c));
    return w;
}

} // namespace

LeftInvariantForm quaternion_omega_plus(int n) {
    LeftInvariantForm w = one_form_constant(n, Field::H);
    for (int s = 2; s <= n; ++s) w = wedge(w, quaternion_block(n, 1, s));
    return w;
}

LeftInvariantForm quaternion_omega_minus(int n) {
    LeftInvariantForm w = one_form_constant(n, Field::H);
    for (int s = 1; s <= n - 1; ++s) w = wedge(w, quaternion_block(n, s, n));
    return w;
}

LeftInvariantForm quaternion_eta_minus(int n) {
    LeftInvariantForm w = one_form_constant(n, Field::H);
    for (int s = 2; s <= n; ++s)
        for (int t = s + 1; t <= n; ++t) w = wedge(w, quaternion_block(n, s, t));
    return w;
}

LeftInvariantForm quaternion_eta_plus(int n) {
    LeftInvariantForm w = one_form_constant(n, Field::H);
    for (int s = 1; s <= n - 1; ++s)
        for (int t = s + 1; t <= n - 1; ++t) w = wedge(w, quaternion_block(n, s, t));
    return w;
}

PullbackHypotheses check_pullback_hypotheses(const LeftInvariantForm& alpha,
                                             const LeftInvariantForm& beta) {
    if (alpha.n() != beta.n() || alpha.field() != beta.field())
        throw DimensionMismatchError("check_pullback_hypotheses: mismatched algebras");
    PullbackHypotheses rep;
    GradingInfo info = grading_info(alpha.n(), alpha.field());
    rep.N = info.ndim;
    rep.nu = info.nu;
    rep.alpha = weighted_degree(alpha);
    rep.beta = weighted_degree(beta);
    rep.deg_ok = rep.alpha.degree + rep.beta.degree == rep.N - 1;
    if (rep.alpha.minus_infinity || rep.beta.minus_infinity) {
        rep.wt_ok = true;
        rep.wt_eq = false;
    } else {
        long sum = rep.alpha.weight + rep.beta.weight;
        rep.wt_ok = sum <= -rep.nu + 1;
        rep.wt_eq = sum == -rep.nu + 1;
    }
    rep.closed_ok = d(alpha).is_zero() && d(beta).is_zero();
    return rep;
}

} // namespace flagrig
