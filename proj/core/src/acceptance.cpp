#include "flagrig/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

#include "flagrig/forms.hpp"
#include "flagrig/pansu.hpp"
#include "flagrig/rigidity.hpp"

namespace flagrig {

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    long cases = 0;
    std::string first_failure;

    void expect(bool cond, const std::string& what) {
        ++cases;
        if (!cond && ok) {
            ok = false;
            first_failure = what;
        }
    }
};

std::string count_detail(const Check& c) {
    if (c.ok) return std::to_string(c.cases) + " checks";
    return "failed: " + c.first_failure;
}

// ---- criterion 1 -----------------------------------------------------------

void algebra_config(Check& c, Rng& rng, int n, Field f, int roundtrips) {
    const int d = field_dim(f);
    std::vector<LieElement> basis;
    for (int i = 1; i < n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = 0; k < d; ++k) basis.push_back(LieElement::basis(n, f, i, j, k));
    const size_t m = basis.size();
    std::vector<std::vector<LieElement>> table(m, std::vector<LieElement>(m, LieElement(n, f)));
    for (size_t a = 0; a < m; ++a)
        for (size_t b = 0; b < m; ++b) table[a][b] = bracket(basis[a], basis[b]);
    // Grading containment on pairs.
    for (size_t a = 0; a < m; ++a)
        for (size_t b = 0; b < m; ++b) {
            const LieElement& br = table[a][b];
            if (br.is_zero()) {
                ++c.cases;
                continue;
            }
            int la = 0, lb = 0;
            for (const auto& [ij, v] : basis[a].coeffs()) { (void)v; la = ij.second - ij.first; }
            for (const auto& [ij, v] : basis[b].coeffs()) { (void)v; lb = ij.second - ij.first; }
            c.expect(br == br.layer_component(la + lb),
                     "grading containment at n=" + std::to_string(n));
        }
    // Jacobi on all basis triples.
    for (size_t a = 0; a < m; ++a)
        for (size_t b = 0; b < m; ++b)
            for (size_t e = 0; e < m; ++e) {
                LieElement jac = bracket(basis[a], table[b][e]) + bracket(basis[b], table[e][a]) +
                                 bracket(basis[e], table[a][b]);
                c.expect(jac.is_zero(), "Jacobi at n=" + std::to_string(n));
            }
    for (int t = 0; t < roundtrips; ++t) {
        LieElement x = random_lie(rng, n, f, 1000);
        c.expect(log(exp(x)) == x, "exp/log roundtrip");
    }
}

CriterionResult criterion_algebra(uint64_t seed) {
    auto t0 = Clock::now();
    Check c;
    Rng rng(seed + 1);
    for (int n = 3; n <= 6; ++n) {
        algebra_config(c, rng, n, Field::R, 65);
        algebra_config(c, rng, n, Field::C, 50);
    }
    for (int n = 3; n <= 4; ++n) algebra_config(c, rng, n, Field::H, 20);
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    bool in_budget = secs < 30.0;
    return {1, "algebra soundness (Jacobi, grading, exp/log)", c.ok && in_budget,
            count_detail(c) + (in_budget ? "" : "; exceeded 30 s budget"), secs};
}

// ---- criterion 2 -----------------------------------------------------------

CriterionResult criterion_structure_equations(uint64_t seed) {
    (void)seed;
    auto t0 = Clock::now();
    Check c;
    auto ddzero = [&](int n, Field f) {
        GradingInfo info = grading_info(n, f);
        for (int a = 0; a < info.ndim; ++a) {
            LeftInvariantForm w(n, f, 1);
            w.add_term({a}, 1);
            c.expect(d(d(w)).is_zero(), "d∘d on a basis covector");
        }
    };
    for (int n = 3; n <= 6; ++n) {
        ddzero(n, Field::R);
        ddzero(n, Field::C);
    }
    for (int n = 3; n <= 4; ++n) ddzero(n, Field::H);

    // The n = 4 dictionary equations.
    c.expect(d(n4_form("alpha0")).is_zero(), "d alpha_0 = 0");
    c.expect(d(n4_form("alpha1")).is_zero(), "d alpha_1 = 0");
    c.expect(d(n4_form("alpha2")).is_zero(), "d alpha_2 = 0");
    c.expect(d(n4_form("beta1")) == wedge(n4_form("alpha0"), n4_form("alpha1")),
             "d beta_1 = alpha_0 ^ alpha_1");
    c.expect(d(n4_form("beta2")) == wedge(n4_form("alpha0"), n4_form("alpha2")),
             "d beta_2 = alpha_0 ^ alpha_2");
    c.expect(d(n4_form("gamma")) ==
                 wedge(n4_form("alpha1"), n4_form("beta2")) + wedge(n4_form("alpha2"), n4_form("beta1")),
             "d gamma = alpha_1 ^ beta_2 + alpha_2 ^ beta_1");

    // The superdiagonal recursion for every covector.
    for (int n = 4; n <= 6; ++n)
        for (int i = 1; i < n; ++i)
            for (int j = i + 1; j <= n; ++j) {
                LeftInvariantForm rhs(n, Field::R, 2);
                for (int k = i + 1; k <= j - 1; ++k)
                    rhs = rhs - wedge(theta(n, Field::R, i, k), theta(n, Field::R, k, j));
                c.expect(d(theta(n, Field::R, i, j)) == rhs, "theta recursion");
            }

    // The four quaternionic d-formulas, all entries and both sizes.
    // Signs of the middle products per target component: row = target comp,
    // entries (component of the left factor, component of the right factor, sign).
    struct Term { int cl, cr, sign; };
    const std::vector<std::vector<Term>> rules = {
        {{0, 0, -1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}},   // d alpha
        {{0, 1, -1}, {1, 0, -1}, {2, 3, -1}, {3, 2, 1}}, // d beta
        {{0, 2, -1}, {2, 0, -1}, {3, 1, -1}, {1, 3, 1}}, // d gamma
        {{0, 3, -1}, {3, 0, -1}, {1, 2, -1}, {2, 1, 1}}, // d eta
    };
    for (int n = 3; n <= 4; ++n)
        for (int s1 = 1; s1 < n; ++s1)
            for (int s3 = s1 + 2; s3 <= n; ++s3)
                for (int comp = 0; comp < 4; ++comp) {
                    LeftInvariantForm rhs(n, Field::H, 2);
                    for (int s2 = s1 + 1; s2 < s3; ++s2)
                        for (const auto& term : rules[static_cast<size_t>(comp)]) {
                            LeftInvariantForm w = wedge(theta(n, Field::H, s1, s2, term.cl),
                                                        theta(n, Field::H, s2, s3, term.cr));
                            rhs = rhs + (term.sign > 0 ? w : w.scale(-1));
                        }
                    c.expect(d(theta(n, Field::H, s1, s3, comp)) == rhs, "quaternionic d formula");
                }

    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {2, "structure equations reproduced by Maurer-Cartan", c.ok, count_detail(c), secs};
}

// ---- criterion 3 -----------------------------------------------------------

CriterionResult criterion_pullback_hypotheses(uint64_t seed) {
    (void)seed;
    auto t0 = Clock::now();
    Check c;
    for (int n = 4; n <= 6; ++n) {
        LeftInvariantForm omega = omega_plus(n);
        for (int k = 2; k <= n - 1; ++k) {
            auto rep = check_pullback_hypotheses(omega, eta_k_minus(n, k));
            c.expect(rep.closed_ok && rep.deg_ok && rep.wt_eq,
                     "(omega_+, eta_" + std::to_string(k) + "-) at n=" + std::to_string(n));
        }
        for (int k = 1; k <= n - 2; ++k) {
            auto rep = check_pullback_hypotheses(omega, eta_k_plus(n, k));
            c.expect(rep.closed_ok && rep.deg_ok && rep.wt_eq,
                     "(omega_+, eta_" + std::to_string(k) + "+) at n=" + std::to_string(n));
        }
    }
    {
        const int n = 3;
        LeftInvariantForm omega = quaternion_omega_plus(n);
        for (auto eta : {quaternion_eta_minus(n), quaternion_eta_plus(n)}) {
            for (int i = 1; i <= 2; ++i)
                for (int comp = 0; comp < 4; ++comp) {
                    auto rep = check_pullback_hypotheses(
                        omega, interior_product(LieElement::basis(n, Field::H, i, i + 1, comp), eta));
                    c.expect(rep.deg_ok && rep.wt_ok && rep.closed_ok, "quaternionic interior pair");
                }
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    bool in_budget = secs < 10.0;
    return {3, "pullback hypotheses for the named pairs", c.ok && in_budget,
            count_detail(c) + (in_budget ? "" : "; exceeded 10 s budget"), secs};
}

// ---- criterion 4 -----------------------------------------------------------

CriterionResult criterion_classification(uint64_t seed) {
    auto t0 = Clock::now();
    Check c;
    Rng rng(seed + 4);
    struct Cfg { int n; Field f; };
    const std::vector<Cfg> cfgs{{4, Field::R}, {5, Field::R}, {4, Field::C},
                                {5, Field::C}, {3, Field::H}, {4, Field::H}};
    for (const auto& cfg : cfgs) {
        const int d = field_dim(cfg.f);
        for (int t = 0; t < 2000; ++t) {
            AutCertificate cert = random_certificate(rng, cfg.n, cfg.f, 50);
            GradedMap m = construct_from_certificate(cfg.n, cfg.f, cert);
            bool round = false, kj = false;
            try {
                AutCertificate back = classify(m);
                round = back == cert;
                kj = preserves_all_Kj(m) == (cert.epsilon == 0);
            } catch (const DomainError&) {
            }
            c.expect(round, "construct-classify roundtrip");
            c.expect(kj, "K_j biconditional");

            // One entry off the image line perturbed: the support of one
            // generator image then meets two lines, which no graded
            // automorphism allows, so the map must be rejected.
            int i = static_cast<int>(rng.next_int(1, cfg.n - 1));
            const int image_line = cert.epsilon == 0 ? i : cfg.n - i;
            int other = image_line;
            while (other == image_line) other = static_cast<int>(rng.next_int(1, cfg.n - 1));
            Mat v1 = m.v1();
            int row = v1_index(cfg.f, other, static_cast<int>(rng.next_int(0, d - 1)));
            int col = v1_index(cfg.f, i, static_cast<int>(rng.next_int(0, d - 1)));
            v1.at(row, col) += Scalar(Field::R, Rational(rng.next_int(1, 999), rng.next_int(1, 999)));
            c.expect(!is_graded_automorphism(GradedMap(cfg.n, cfg.f, v1)),
                     "perturbation rejection");
        }
        AutCertificate tau_cert = classify(tau_graded_map(cfg.n, cfg.f));
        c.expect(tau_cert.epsilon == 1, "tau has epsilon = 1");
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {4, "automorphism classification roundtrips and rejections", c.ok, count_detail(c), secs};
}

// ---- criterion 5 -----------------------------------------------------------

CriterionResult criterion_reconstruction(uint64_t seed) {
    auto t0 = Clock::now();
    Check c;
    Rng rng(seed + 5);
    struct Cfg { int n; Field f; };
    const std::vector<Cfg> cfgs{{3, Field::R}, {4, Field::R}, {5, Field::R},
                                {4, Field::C}, {3, Field::H}};
    for (const auto& cfg : cfgs) {
        for (int t = 0; t < 100; ++t) {
            Mat g = random_invertible(rng, cfg.n, cfg.f, 1000);
            while (!in_Nhat(act(ProjElement(g), Flag::basepoint(cfg.n, cfg.f))))
                g = random_invertible(rng, cfg.n, cfg.f, 1000);
            ProjElement pe(g);
            FlagMapOracle oracle([pe](const Flag& f) { return act(pe, f); },
                                 GroupElement(cfg.n, cfg.f), Rational(4));
            bool ok = false;
            try {
                ok = reconstruct_from_fibration_map(oracle, Flag::basepoint(cfg.n, cfg.f), rng) == pe;
            } catch (const DomainError&) {
            }
            c.expect(ok, "reconstruction roundtrip at n=" + std::to_string(cfg.n) + " over " +
                             field_name(cfg.f));
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {5, "projective reconstruction from action oracles", c.ok, count_detail(c), secs};
}

// ---- criterion 6 -----------------------------------------------------------

CriterionResult criterion_dilation_dynamics(uint64_t seed) {
    auto t0 = Clock::now();
    Check c;
    Rng rng(seed + 6);
    const Field fields[3] = {Field::R, Field::C, Field::H};
    for (int t = 0; t < 500; ++t) {
        const int n = static_cast<int>(rng.next_int(3, 5));
        const Field f = fields[rng.next_int(0, 2)];
        const int j = static_cast<int>(rng.next_int(1, n - 1));
        Mat v(n, 1, f);
        for (int r = 0; r < n; ++r) v.at(r, 0) = random_scalar(rng, f, 1000);
        bool bottom = false;
        for (int r = n - j; r < n; ++r)
            if (!v.at(r, 0).is_zero()) bottom = true;
        if (!bottom) v.at(n - 1, 0) = Scalar::one(f);
        GrassmannPoint line(n, v);
        Rational r = random_positive_rational_le_one(rng, 1000);
        std::vector<Scalar> diag;
        for (int i = 1; i <= n; ++i) diag.push_back(Scalar(f, rational_pow(r, -i)));
        GrassmannPoint dilated(n, Mat::diagonal(diag) * line.columns());
        c.expect(beta_squared(dilated, j) <= r * r * beta_squared(line, j),
                 "beta^2 contraction");
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {6, "dilation dynamics contraction of beta^2", c.ok, count_detail(c), secs};
}

// ---- criterion 7 -----------------------------------------------------------

CriterionResult criterion_escape_flags(uint64_t seed) {
    auto t0 = Clock::now();
    Check c;
    Rng rng(seed + 7);
    for (int n = 4; n <= 6; ++n) {
        int done = 0;
        while (done < 100) {
            Mat g = random_lower_unipotent(rng, n, Field::R, 1000);
            if (g == Mat::identity(n, Field::R)) continue;
            ++done;
            bool ok = false;
            try {
                Flag f = escape_flag(g);
                ok = in_Nhat(f) && !in_Nhat(act(ProjElement(g), f));
            } catch (const DomainError&) {
            }
            c.expect(ok, "escape flag at n=" + std::to_string(n));
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {7, "escape flags leave the chart exactly once moved", c.ok, count_detail(c), secs};
}

// ---- criterion 8 -----------------------------------------------------------

CriterionResult criterion_pansu(uint64_t seed) {
    auto t0 = Clock::now();
    Check c;
    Rng rng(seed + 8);

    // Graded-affine maps at 200 random base points.
    struct Cfg { int n; Field f; int count; };
    const std::vector<Cfg> cfgs{{3, Field::R, 60}, {3, Field::C, 40}, {3, Field::H, 40},
                                {4, Field::R, 60}};
    for (const auto& cfg : cfgs) {
        for (int t = 0; t < cfg.count; ++t) {
            GradedMap phi =
                construct_from_certificate(cfg.n, cfg.f, random_certificate(rng, cfg.n, cfg.f, 30));
            PolyMapSpec f = PolyMapSpec::graded_affine(random_group(rng, cfg.n, cfg.f, 30), phi);
            bool ok = false;
            try {
                ok = pansu_differential(f, random_group(rng, cfg.n, cfg.f, 30)) == phi;
            } catch (const DomainError&) {
            }
            c.expect(ok, "graded-affine differential");
        }
    }

    // Chain rule on 100 composable graded-affine pairs.
    for (int t = 0; t < 100; ++t) {
        const int n = 3;
        GradedMap p1 = construct_from_certificate(n, Field::R, random_certificate(rng, n, Field::R, 30));
        GradedMap p2 = construct_from_certificate(n, Field::R, random_certificate(rng, n, Field::R, 30));
        PolyMapSpec f = PolyMapSpec::graded_affine(random_group(rng, n, Field::R, 30), p1);
        PolyMapSpec g = PolyMapSpec::graded_affine(random_group(rng, n, Field::R, 30), p2);
        GroupElement x = random_group(rng, n, Field::R, 30);
        GroupElement gx = exp(g.apply(log(x)));
        bool ok = pansu_differential(PolyMapSpec::compose(f, g), x) ==
                  pansu_differential(f, gx).compose_after(pansu_differential(g, x));
        c.expect(ok, "chain rule");
    }

    // The contact-shear family is Pansu differentiable with exact
    // homomorphism checks (the check runs inside pansu_differential).
    for (int t = 0; t < 10; ++t) {
        std::vector<Rational> p{random_rational(rng, 9), random_rational(rng, 9),
                                random_rational(rng, 9)};
        PolyMapSpec fx = contact_shear_x(p);
        PolyMapSpec fy = contact_shear_y(p);
        GroupElement x = random_group(rng, 3, Field::R, 30);
        bool ok = true;
        try {
            pansu_differential(fx, x);
            pansu_differential(fy, x);
            pansu_differential(PolyMapSpec::compose(fy, fx), x);
        } catch (const DomainError&) {
            ok = false;
        }
        c.expect(ok, "contact shear differentiability");
    }

    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {8, "Pansu differentials: affine parts, chain rule, shears", c.ok, count_detail(c), secs};
}

// ---- criterion 9 -----------------------------------------------------------

CriterionResult criterion_quadrature(uint64_t seed) {
    auto t0 = Clock::now();
    Check c;
    Rng rng(seed + 9);
    BumpSpec bump;
    bump.center.assign(3, Rational(0));
    bump.box_halfwidth.assign(3, Rational(1));
    bump.support_halfwidth.assign(3, Rational(9, 10));
    LeftInvariantForm alpha = wedge(theta(3, Field::R, 2, 3), theta(3, Field::R, 1, 3));
    LeftInvariantForm beta = one_form_constant(3, Field::R);

    // Transverse contact-shear composition: three grid halvings, each
    // shrinking the residual to at most 0.3 of the previous level.
    PolyMapSpec shear = PolyMapSpec::compose(contact_shear_y({Rational(0), Rational(1)}),
                                             contact_shear_x({Rational(0), Rational(0), Rational(1)}));
    auto rep = verify_pullback_identity(shear, alpha, beta, bump, 4, 3);
    c.expect(rep.levels.size() == 4, "four quadrature levels");
    c.expect(rep.levels[0].residual > 1e-10, "nonvanishing base residual");
    for (double ratio : rep.ratios) c.expect(ratio <= 0.3, "halving ratio above 0.3");

    // Graded-affine maps: the residual is float-mode zero.
    GradedMap phi = construct_from_certificate(3, Field::R, random_certificate(rng, 3, Field::R, 5));
    PolyMapSpec affine = PolyMapSpec::graded_affine(random_group(rng, 3, Field::R, 5), phi);
    auto rep2 = verify_pullback_identity(affine, alpha, beta, bump, 8, 1);
    for (const auto& level : rep2.levels)
        c.expect(level.residual < 1e-12, "graded-affine residual above 1e-12");

    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {9, "pullback identity quadrature decay", c.ok, count_detail(c), secs};
}

// ---- criterion 10 ----------------------------------------------------------

CriterionResult criterion_chart_coherence(uint64_t seed) {
    auto t0 = Clock::now();
    Check c;
    Rng rng(seed + 10);
    for (int n = 3; n <= 6; ++n) {
        const bool has_h = n <= 4;
        const int r_count = has_h ? 200 : 250;
        const int c_count = has_h ? 200 : 250;
        const int h_count = has_h ? 100 : 0;
        auto roundtrips = [&](Field f, int count) {
            for (int t = 0; t < count; ++t) {
                GroupElement g = random_group(rng, n, f, 1000);
                c.expect(alpha_inverse(alpha(g)) == g, "alpha roundtrip");
            }
        };
        roundtrips(Field::R, r_count);
        roundtrips(Field::C, c_count);
        if (has_h) roundtrips(Field::H, h_count);
    }
    // Biconditional on 500 flags, half inside and half outside the chart.
    for (int t = 0; t < 250; ++t) {
        const int n = static_cast<int>(rng.next_int(3, 5));
        Flag inside = random_flag_in_chart(rng, n, Field::R, 50);
        bool in_ok = in_Nhat(inside);
        bool inv_ok = true;
        try {
            GroupElement g = alpha_inverse(inside);
            inv_ok = alpha(g) == inside;
        } catch (const NotInChartError&) {
            inv_ok = false;
        }
        c.expect(in_ok && inv_ok, "chart membership (inside)");

        Flag outside = random_flag_outside_chart(rng, n, Field::R, 50);
        bool out_flag = !in_Nhat(outside);
        bool out_throws = false;
        try {
            alpha_inverse(outside);
        } catch (const NotInChartError&) {
            out_throws = true;
        }
        c.expect(out_flag && out_throws, "chart membership (outside)");
    }
    // Psi involution and equivariance on 200 random (g, F).
    const Field fields[3] = {Field::R, Field::C, Field::H};
    for (int t = 0; t < 200; ++t) {
        const int n = static_cast<int>(rng.next_int(3, 5));
        const Field f = fields[rng.next_int(0, 2)];
        Flag F = random_flag_in_chart(rng, n, f, 30);
        Mat g = random_invertible(rng, n, f, 30);
        c.expect(psi(psi(F)) == F, "psi involution");
        c.expect(psi(act(ProjElement(g), F)) ==
                     act(ProjElement(inverse(g.conj_transpose())), psi(F)),
                 "psi equivariance");
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return {10, "chart coherence: alpha, membership, psi", c.ok, count_detail(c), secs};
}

} // namespace

std::vector<CriterionResult> run_acceptance(uint64_t seed, const std::vector<int>& only,
                                             const std::function<void(const CriterionResult&)>& on_result) {
    using Fn = std::function<CriterionResult(uint64_t)>;
    const std::vector<Fn> criteria{
        criterion_algebra,         criterion_structure_equations, criterion_pullback_hypotheses,
        criterion_classification,  criterion_reconstruction,      criterion_dilation_dynamics,
        criterion_escape_flags,    criterion_pansu,               criterion_quadrature,
        criterion_chart_coherence,
    };
    std::vector<CriterionResult> results;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        results.push_back(criteria[i](seed));
        if (on_result) on_result(results.back());
    }
    return results;
}

} // namespace flagrig
