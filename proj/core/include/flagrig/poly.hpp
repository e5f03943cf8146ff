#pragma once

#include <map>
#include <vector>

#include "flagrig/rational.hpp"

namespace flagrig {

/// Multivariate polynomial over Q with integer exponents (negative exponents
/// are allowed, which makes the type Laurent in any designated symbol).
class Poly {
  public:
    using Mono = std::vector<int>;

    explicit Poly(int nvars) : nvars_(nvars) {}
    static Poly constant(int nvars, const Rational& c);
    static Poly variable(int nvars, int idx);

    int nvars() const { return nvars_; }
    const std::map<Mono, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Mono& mono, const Rational& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly scale(const Rational& r) const;
    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    /// Multiplies by var^delta.
    Poly shift_exponent(int var, int delta) const;

    /// Substitutes subs[v] for variable v; all subs share a variable count.
    Poly substitute(const std::vector<Poly>& subs) const;

    Rational eval(const std::vector<Rational>& x) const;
    double eval_double(const std::vector<double>& x) const;

    int min_exponent(int var) const;
    /// Total degree over the variable range [from, to).
    int max_degree_in_range(int from, int to) const;

    /// Terms whose exponent in `var` equals e, with that exponent zeroed.
    Poly slice(int var, int e) const;

    std::string to_string() const;

  private:
    int nvars_;
    std::map<Mono, Rational> terms_;
};

} // namespace flagrig
