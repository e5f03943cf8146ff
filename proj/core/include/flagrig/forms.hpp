#pragma once

#include <map>

#include "flagrig/gradedaut.hpp"
#include "flagrig/nilpotent.hpp"

namespace flagrig {

/// Degree and weight of a form; the weight of a monomial theta_I is minus the
/// sum of the layers of its factors, the weight of a form is the maximum over
/// its monomials, and the zero form has weight minus infinity.
struct WeightedDegree {
    int degree = 0;
    bool minus_infinity = false;
    long weight = 0;

    bool operator==(const WeightedDegree&) const = default;
};

/// Left-invariant exterior form with rational coefficients over the dual of
/// the distinguished real basis. Monomial keys are strictly increasing lists
/// of covector ids (RealBasis indices); zero coefficients are pruned.
class LeftInvariantForm {
  public:
    LeftInvariantForm(int n, Field field, int degree);

    int n() const { return n_; }
    Field field() const { return field_; }
    int degree() const { return degree_; }
    const std::map<std::vector<int>, Rational>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    /// Adds c * theta_I; the index list may be unsorted and is sign-corrected.
    void add_term(std::vector<int> indices, const Rational& c);
    Rational coefficient(const std::vector<int>& indices) const;

    LeftInvariantForm operator+(const LeftInvariantForm& o) const;
    LeftInvariantForm operator-(const LeftInvariantForm& o) const;
    LeftInvariantForm scale(const Rational& r) const;
    bool operator==(const LeftInvariantForm& o) const;

    std::string to_string() const;

  private:
    int n_;
    Field field_;
    int degree_;
    std::map<std::vector<int>, Rational> terms_;
};

/// Constant function 1 viewed as a 0-form.
LeftInvariantForm one_form_constant(int n, Field field);

/// Dual basis covector of the real basis vector with unit comp at (i, j).
LeftInvariantForm theta(int n, Field field, int i, int j, int comp = 0);

LeftInvariantForm wedge(const LeftInvariantForm& a, const LeftInvariantForm& b);

/// Exterior derivative via Maurer-Cartan from the computed structure
/// constants: d theta^a (X_b, X_c) = -theta^a([X_b, X_c]).
LeftInvariantForm d(const LeftInvariantForm& w);

WeightedDegree weighted_degree(const LeftInvariantForm& w);

/// Interior product i_X w for X in the algebra.
LeftInvariantForm interior_product(const LieElement& x, const LeftInvariantForm& w);

/// Pullback through a fully extended graded map.
LeftInvariantForm pullback_form(const GradedMap& m, const LeftInvariantForm& w);

// The specific closed forms of the rigidity argument (real coefficients).
LeftInvariantForm omega_plus(int n);
LeftInvariantForm omega_minus(int n);
LeftInvariantForm eta_k_minus(int n, int k); ///< 2 <= k <= n-1
LeftInvariantForm eta_k_plus(int n, int k);  ///< 1 <= k <= n-2

/// The n = 4 one-form dictionary alpha_0, alpha_1, alpha_2, beta_1, beta_2,
/// gamma dual to X_23, X_12, X_34, X_13, -X_24, X_14.
LeftInvariantForm n4_form(const std::string& name);
/// omega = alpha_1 ^ beta_1 ^ gamma.
LeftInvariantForm n4_omega();
/// The four test factors eta of the n = 4 argument:
/// "a2b2", "a0b2", "a1b1", "a0b1".
LeftInvariantForm n4_eta(const std::string& which);

// Quaternionic families (field H): blocks alpha ^ beta ^ gamma ^ eta per entry.
LeftInvariantForm quaternion_omega_plus(int n);
LeftInvariantForm quaternion_omega_minus(int n);
LeftInvariantForm quaternion_eta_minus(int n);
LeftInvariantForm quaternion_eta_plus(int n);

/// Hypothesis report for the pullback identity: degree sum N-1, weight sum
/// at most -nu+1 (the equality verdict is reported separately), both closed.
struct PullbackHypotheses {
    bool deg_ok = false;
    bool wt_ok = false;
    bool wt_eq = false;
    bool closed_ok = false;
    int N = 0;
    long nu = 0;
    WeightedDegree alpha, beta;
    bool all_ok() const { return deg_ok && wt_ok && closed_ok; }
};

PullbackHypotheses check_pullback_hypotheses(const LeftInvariantForm& alpha,
                                             const LeftInvariantForm& beta);

} // namespace flagrig
