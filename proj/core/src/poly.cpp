#include "flagrig/poly.hpp"

#include <cmath>

namespace flagrig {

Poly Poly::constant(int nvars, const Rational& c) {
    Poly p(nvars);
    p.add_term(Mono(static_cast<size_t>(nvars), 0), c);
    return p;
}

Poly Poly::variable(int nvars, int idx) {
    if (idx < 0 || idx >= nvars) throw DimensionMismatchError("Poly::variable: index out of range");
    Poly p(nvars);
    Mono m(static_cast<size_t>(nvars), 0);
    m[static_cast<size_t>(idx)] = 1;
    p.add_term(m, 1);
    return p;
}

void Poly::add_term(const Mono& mono, const Rational& c) {
    if (static_cast<int>(mono.size()) != nvars_)
        throw DimensionMismatchError("Poly::add_term: arity mismatch");
    if (rat_is_zero(c)) return;
    Rational& slot = terms_[mono];
    slot += c;
    if (rat_is_zero(slot)) terms_.erase(mono);
}

Poly Poly::operator+(const Poly& o) const {
    if (nvars_ != o.nvars_) throw DimensionMismatchError("Poly sum arity mismatch");
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (nvars_ != o.nvars_) throw DimensionMismatchError("Poly product arity mismatch");
    Poly r(nvars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            Mono m = ma;
            for (size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
            r.add_term(m, ca * cb);
        }
    return r;
}

Poly Poly::scale(const Rational& r) const {
    Poly out(nvars_);
    if (rat_is_zero(r)) return out;
    for (const auto& [m, c] : terms_) out.terms_[m] = c * r;
    return out;
}

Poly Poly::shift_exponent(int var, int delta) const {
    Poly out(nvars_);
    for (const auto& [m, c] : terms_) {
        Mono mm = m;
        mm[static_cast<size_t>(var)] += delta;
        out.terms_[mm] = c;
    }
    return out;
}

Poly Poly::substitute(const std::vector<Poly>& subs) const {
    if (static_cast<int>(subs.size()) != nvars_)
        throw DimensionMismatchError("Poly::substitute: need one replacement per variable");
    const int out_vars = subs.empty() ? 0 : subs[0].nvars();
    Poly out(out_vars);
    for (const auto& [m, c] : terms_) {
        Poly term = Poly::constant(out_vars, c);
        for (size_t v = 0; v < m.size(); ++v) {
            int e = m[v];
            if (e == 0) continue;
            if (e < 0) throw DomainError("Poly::substitute: negative exponent");
            for (int k = 0; k < e; ++k) term = term * subs[v];
        }
        out = out + term;
    }
    return out;
}

Rational Poly::eval(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != nvars_) throw DimensionMismatchError("Poly::eval arity");
    Rational sum(0);
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (size_t v = 0; v < m.size(); ++v)
            if (m[v] != 0) t *= rational_pow(x[v], m[v]);
        sum += t;
    }
    return sum;
}

double Poly::eval_double(const std::vector<double>& x) const {
    double sum = 0;
    for (const auto& [m, c] : terms_) {
        double t = to_double(c);
        for (size_t v = 0; v < m.size(); ++v) {
            int e = m[v];
            for (int k = 0; k < e; ++k) t *= x[v];
            for (int k = 0; k > e; --k) t /= x[v];
        }
        sum += t;
    }
    return sum;
}

int Poly::min_exponent(int var) const {
    int m = 0;
    bool first = true;
    for (const auto& [mono, c] : terms_) {
        (void)c;
        int e = mono[static_cast<size_t>(var)];
        if (first || e < m) m = e;
        first = false;
    }
    return m;
}

int Poly::max_degree_in_range(int from, int to) const {
    int best = 0;
    for (const auto& [mono, c] : terms_) {
        (void)c;
        int deg = 0;
        for (int v = from; v < to; ++v) deg += mono[static_cast<size_t>(v)];
        if (deg > best) best = deg;
    }
    return best;
}

Poly Poly::slice(int var, int e) const {
    Poly out(nvars_);
    for (const auto& [mono, c] : terms_) {
        if (mono[static_cast<size_t>(var)] != e) continue;
        Mono mm = mono;
        mm[static_cast<size_t>(var)] = 0;
        out.terms_[mm] = c;
    }
    return out;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += rational_to_string(c);
        for (size_t v = 0; v < m.size(); ++v)
            if (m[v] != 0) out += " x" + std::to_string(v) + "^" + std::to_string(m[v]);
    }
    return out;
}

} // namespace flagrig
