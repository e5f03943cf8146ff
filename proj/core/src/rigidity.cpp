#include "flagrig/rigidity.hpp"

#include <algorithm>
#include <optional>

namespace flagrig {

namespace {

struct ShrinkNeeded {};

Mat column_matrix(Field f, const std::vector<Scalar>& v) {
    Mat m(static_cast<int>(v.size()), 1, f);
    for (size_t i = 0; i < v.size(); ++i) m.at(static_cast<int>(i), 0) = v[i];
    return m;
}

std::vector<Scalar> unit_vector(int n, Field f, int i) {
    std::vector<Scalar> v(static_cast<size_t>(n), Scalar::zero(f));
    v[static_cast<size_t>(i - 1)] = Scalar::one(f);
    return v;
}

} // namespace

ProjectiveFrame::ProjectiveFrame(int n, std::vector<GrassmannPoint> points) : n_(n) {
    if (static_cast<int>(points.size()) != n + 1)
        throw DimensionMismatchError("ProjectiveFrame: need n+1 points");
    for (const auto& p : points) {
        if (p.n() != n || p.j() != 1)
            throw DimensionMismatchError("ProjectiveFrame: points must be lines in F^n");
    }
    if (!is_frame(points)) throw DomainError("ProjectiveFrame: some n points do not span");
    points_ = std::move(points);
}

bool is_frame(const std::vector<GrassmannPoint>& points) {
    if (points.empty()) return false;
    const int n = points[0].n();
    if (static_cast<int>(points.size()) != n + 1)
        throw DimensionMismatchError("is_frame: need n+1 points");
    for (const auto& p : points)
        if (p.j() != 1 || p.n() != n) return false;
    for (size_t skip = 0; skip < points.size(); ++skip) {
        Mat m(n, n, points[0].field());
        int c = 0;
        for (size_t i = 0; i < points.size(); ++i) {
            if (i == skip) continue;
            for (int r = 0; r < n; ++r) m.at(r, c) = points[i].columns().at(r, 0);
            ++c;
        }
        if (!is_invertible(m)) return false;
    }
    return true;
}

ProjectiveFrame standard_frame(int n, Field field) {
    std::vector<GrassmannPoint> pts;
    std::vector<Scalar> ones(static_cast<size_t>(n), Scalar::one(field));
    pts.emplace_back(n, column_matrix(field, ones));
    for (int i = 1; i <= n; ++i) pts.emplace_back(n, column_matrix(field, unit_vector(n, field, i)));
    return ProjectiveFrame(n, std::move(pts));
}

AugmentedFrame augment(const ProjectiveFrame& frame) {
    const int n = frame.n();
    const Field f = frame.field();
    // Solve w_n x + w_0 y + sum_i w_i z_i = 0; the line is w_n x + w_0 y.
    Mat sys(n, n + 1, f);
    for (int r = 0; r < n; ++r) {
        sys.at(r, 0) = frame.point(n).columns().at(r, 0);
        sys.at(r, 1) = frame.point(0).columns().at(r, 0);
        for (int i = 1; i <= n - 1; ++i) sys.at(r, 1 + i) = frame.point(i).columns().at(r, 0);
    }
    Mat ns = null_space(sys);
    if (ns.cols() != 1) throw DomainError("augment: unexpected intersection rank");
    std::vector<Scalar> v(static_cast<size_t>(n), Scalar::zero(f));
    for (int r = 0; r < n; ++r)
        v[static_cast<size_t>(r)] = frame.point(n).columns().at(r, 0) * ns.at(0, 0) +
                                    frame.point(0).columns().at(r, 0) * ns.at(1, 0);
    bool zero = true;
    for (const auto& s : v)
        if (!s.is_zero()) zero = false;
    if (zero) throw DomainError("augment: degenerate intersection");
    return AugmentedFrame{frame, GrassmannPoint(n, column_matrix(f, v))};
}

AugmentedFrame standard_augmented_frame(int n, Field field) {
    AugmentedFrame a = augment(standard_frame(n, field));
    // By construction this is span(e_1 + ... + e_{n-1}).
    std::vector<Scalar> v(static_cast<size_t>(n), Scalar::one(field));
    v[static_cast<size_t>(n - 1)] = Scalar::zero(field);
    if (!(a.extra == GrassmannPoint(n, column_matrix(field, v))))
        throw InternalConsistencyError("standard_augmented_frame: unexpected augmentation");
    return a;
}

ProjElement solve_frame_map(const ProjectiveFrame& a, const ProjectiveFrame& b) {
    if (a.n() != b.n() || a.field() != b.field())
        throw DimensionMismatchError("solve_frame_map: mismatched frames");
    const int n = a.n();
    const Field f = a.field();
    Mat ma(n, n, f), mb(n, n, f);
    for (int i = 1; i <= n; ++i)
        for (int r = 0; r < n; ++r) {
            ma.at(r, i - 1) = a.point(i).columns().at(r, 0);
            mb.at(r, i - 1) = b.point(i).columns().at(r, 0);
        }
    std::vector<Scalar> y = solve(ma, a.point(0).columns().col(0));
    std::vector<Scalar> w = solve(mb, b.point(0).columns().col(0));
    Mat g(n, n, f);
    for (int i = 0; i < n; ++i) {
        if (y[static_cast<size_t>(i)].is_zero() || w[static_cast<size_t>(i)].is_zero())
            throw InternalConsistencyError("solve_frame_map: vanishing frame coordinate");
        // Right column scale z_i = w_i y_i^{-1} sends the unit point across.
        Scalar z = w[static_cast<size_t>(i)] * y[static_cast<size_t>(i)].invert();
        for (int r = 0; r < n; ++r) g.at(r, i) = mb.at(r, i) * z;
    }
    return ProjElement(g * inverse(ma));
}

namespace {

// Direction of a difference vector among the special families: axis c,
// the diagonal, or (over H) e_1 + q e_2 with q in {i, j, k}.
struct Direction {
    enum class Kind { None, Axis, Diagonal, QLine };
    Kind kind = Kind::None;
    int axis = -1;
    int qcomp = 0;
};

Direction classify_direction(const std::vector<Scalar>& delta, Field f) {
    const int m = static_cast<int>(delta.size());
    int support = 0, last = -1;
    for (int i = 0; i < m; ++i)
        if (!delta[static_cast<size_t>(i)].is_zero()) {
            ++support;
            last = i;
        }
    Direction dir;
    if (support == 0) return dir;
    if (support == 1) {
        dir.kind = Direction::Kind::Axis;
        dir.axis = last;
        return dir;
    }
    bool diagonal = support == m;
    for (int i = 1; i < m && diagonal; ++i)
        if (!(delta[static_cast<size_t>(i)] == delta[0])) diagonal = false;
    if (diagonal) {
        dir.kind = Direction::Kind::Diagonal;
        return dir;
    }
    if (f == Field::H && m >= 2 && support == 2 && !delta[0].is_zero() && !delta[1].is_zero()) {
        for (int c = 1; c <= 3; ++c)
            if (delta[1] == Scalar::unit(Field::H, c) * delta[0]) {
                dir.kind = Direction::Kind::QLine;
                dir.qcomp = c;
                return dir;
            }
    }
    return dir;
}

std::vector<Scalar> vec_sub(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
    std::vector<Scalar> out;
    out.reserve(a.size());
    for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
    return out;
}

bool vec_zero(const std::vector<Scalar>& a) {
    for (const auto& s : a)
        if (!s.is_zero()) return false;
    return true;
}

} // namespace

SpecialAffineFit special_affine_fit(const std::vector<AffineSample>& samples, Field field, int m) {
    if (static_cast<int>(samples.size()) < m + 2)
        throw InsufficientSamplesError("special_affine_fit: need at least m+2 samples");
    for (const auto& s : samples)
        if (static_cast<int>(s.x.size()) != m || static_cast<int>(s.y.size()) != m)
            throw DimensionMismatchError("special_affine_fit: sample arity mismatch");

    // Hypothesis validation on sampled pairs: differences along a special
    // direction must map to differences along the same direction.
    const size_t count = samples.size();
    for (size_t a = 0; a < count; ++a)
        for (size_t b = a + 1; b < count; ++b) {
            auto dx = vec_sub(samples[b].x, samples[a].x);
            auto dy = vec_sub(samples[b].y, samples[a].y);
            Direction dir = classify_direction(dx, field);
            if (dir.kind == Direction::Kind::Axis) {
                for (int i = 0; i < m; ++i)
                    if (i != dir.axis && !dy[static_cast<size_t>(i)].is_zero())
                        throw HypothesisError("special_affine_fit: an axis line is not preserved");
            } else if (dir.kind == Direction::Kind::Diagonal) {
                for (int i = 1; i < m; ++i)
                    if (!(dy[static_cast<size_t>(i)] == dy[0]))
                        throw HypothesisError("special_affine_fit: the diagonal line is not preserved");
            }
        }
    // Triples on a common e_1 + q e_2 line must have collinear images.
    if (field == Field::H && m >= 2) {
        for (size_t a = 0; a < count; ++a)
            for (size_t b = a + 1; b < count; ++b)
                for (size_t c = b + 1; c < count; ++c) {
                    auto d1 = vec_sub(samples[b].x, samples[a].x);
                    auto d2 = vec_sub(samples[c].x, samples[a].x);
                    Direction k1 = classify_direction(d1, field);
                    Direction k2 = classify_direction(d2, field);
                    if (k1.kind != Direction::Kind::QLine || k2.kind != Direction::Kind::QLine ||
                        k1.qcomp != k2.qcomp)
                        continue;
                    auto u = vec_sub(samples[b].y, samples[a].y);
                    auto w = vec_sub(samples[c].y, samples[a].y);
                    if (vec_zero(u)) continue;
                    Scalar t = Scalar::zero(Field::H);
                    for (int i = 0; i < m; ++i)
                        if (!u[static_cast<size_t>(i)].is_zero()) {
                            t = u[static_cast<size_t>(i)].invert() * w[static_cast<size_t>(i)];
                            break;
                        }
                    for (int i = 0; i < m; ++i)
                        if (!(w[static_cast<size_t>(i)] == u[static_cast<size_t>(i)] * t))
                            throw HypothesisError(
                                "special_affine_fit: an e_1 + q e_2 line is mapped off a line");
                }
    }

    const AffineSample* base = &samples[0];
    for (const auto& s : samples)
        if (vec_zero(s.x)) base = &s;

    bool constant = true;
    for (const auto& s : samples)
        if (!(s.y == base->y)) constant = false;
    if (constant) {
        SpecialAffineFit fit;
        fit.zero_map = true;
        fit.a = Scalar::zero(field);
        fit.offset = base->y;
        return fit;
    }

    // The scale from a rational offset along one axis (h fixes the rationals).
    std::optional<Scalar> a_opt;
    for (const auto& s : samples) {
        auto dx = vec_sub(s.x, base->x);
        Direction dir = classify_direction(dx, field);
        if (dir.kind != Direction::Kind::Axis) continue;
        const Scalar& t = dx[static_cast<size_t>(dir.axis)];
        if (field == Field::H && !t.is_real()) continue;
        Scalar dyc = s.y[static_cast<size_t>(dir.axis)] - base->y[static_cast<size_t>(dir.axis)];
        a_opt = dyc * t.invert();
        break;
    }
    if (!a_opt)
        throw InsufficientSamplesError("special_affine_fit: no axis-parallel sample to fix the scale");
    Scalar a = *a_opt;
    if (a.is_zero())
        throw HypothesisError("special_affine_fit: degenerate scale with non-constant samples");

    HSpec h = HSpec::identity();
    if (field == Field::H) {
        Scalar si = a.invert();
        std::optional<Scalar> lam, mu;
        for (const auto& s : samples) {
            auto dx = vec_sub(s.x, base->x);
            Direction dir = classify_direction(dx, field);
            if (dir.kind != Direction::Kind::Axis) continue;
            const Scalar& t = dx[static_cast<size_t>(dir.axis)];
            // Offsets q * t with rational t read off h(q).
            for (int c = 1; c <= 2; ++c) {
                Scalar qt = Scalar::unit(Field::H, c);
                // t = qt * r for rational r?
                Scalar r = (-qt) * t; // q^{-1} t for unit imaginary q
                if (!r.is_real() || r.is_zero()) continue;
                Scalar dyc = s.y[static_cast<size_t>(dir.axis)] - base->y[static_cast<size_t>(dir.axis)];
                Scalar hq = si * dyc * r.invert();
                if (c == 1)
                    lam = hq;
                else
                    mu = hq;
            }
        }
        if (!lam || !mu)
            throw InsufficientSamplesError(
                "special_affine_fit: missing imaginary axis samples for the field automorphism");
        try {
            h = HSpec::quaternion(*lam, *mu);
            h.validate(Field::H);
        } catch (const DomainError&) {
            throw HypothesisError("special_affine_fit: recovered triple is not an automorphism");
        }
    }

    SpecialAffineFit fit;
    fit.a = a;
    fit.h = h;
    for (int i = 0; i < m; ++i)
        fit.offset.push_back(base->y[static_cast<size_t>(i)] -
                             a * h.apply(base->x[static_cast<size_t>(i)]));

    for (const auto& s : samples)
        for (int i = 0; i < m; ++i) {
            Scalar model = a * h.apply(s.x[static_cast<size_t>(i)]) + fit.offset[static_cast<size_t>(i)];
            if (!(model == s.y[static_cast<size_t>(i)]))
                throw HypothesisError("special_affine_fit: samples do not satisfy the affine model");
        }
    return fit;
}

bool FlagMapOracle::contains(const Flag& f) const {
    if (f.n() != center.n() || f.field() != center.field()) return false;
    GroupElement g(f.n(), f.field());
    try {
        g = alpha_inverse(f); // succeeds exactly on the chart
    } catch (const NotInChartError&) {
        return false;
    }
    RealBasis basis(f.n(), f.field());
    std::vector<Rational> fc = log(g).real_coords(basis);
    std::vector<Rational> cc = log(center).real_coords(basis);
    for (size_t i = 0; i < fc.size(); ++i) {
        Rational diff = fc[i] - cc[i];
        if (rat_sign(diff) < 0) diff = -diff;
        if (diff > radius) return false;
    }
    return true;
}

Flag FlagMapOracle::eval(const Flag& f) const {
    if (!contains(f)) throw DomainError("FlagMapOracle: evaluation outside the declared domain");
    return fn(f);
}

namespace {

// Chain flag whose first member is lines[idx], completed with the most
// basepoint-aligned tail of the remaining frame lines.
Flag chain_flag(const std::vector<GrassmannPoint>& lines, int n, Field f, size_t idx) {
    Mat b(n, n, f);
    int col = n - 1;
    for (int r = 0; r < n; ++r) b.at(r, col) = lines[idx].columns().at(r, 0);
    --col;
    for (int i = n; i >= 1 && col >= 0; --i) {
        if (static_cast<size_t>(i) == idx) continue;
        for (int r = 0; r < n; ++r) b.at(r, col) = lines[static_cast<size_t>(i)].columns().at(r, 0);
        --col;
    }
    return Flag(b);
}

Flag random_flag_in_domain(Rng& rng, const FlagMapOracle& oracle) {
    // Chart coordinates within the radius box; such flags lie in the domain
    // by construction.
    RealBasis basis(oracle.center.n(), oracle.center.field());
    std::vector<Rational> coords = log(oracle.center).real_coords(basis);
    for (auto& c : coords) {
        long den = rng.next_int(1, 8);
        long num = rng.next_int(-den, den);
        c += oracle.radius * Rational(num, den);
    }
    return alpha(exp(LieElement::from_real_coords(basis, coords)));
}

} // namespace

ProjElement reconstruct_from_fibration_map(const FlagMapOracle& oracle, const Flag& base, Rng& rng) {
    const int n = base.n();
    const Field field = base.field();
    const int m = n - 1;
    if (!oracle.contains(base))
        throw DomainError("reconstruct: base flag is outside the oracle domain");

    Flag fbase = oracle.eval(base);
    if (!in_Nhat(fbase))
        throw NotFibrationPreservingError("reconstruct: image of the base flag leaves the chart");
    Mat bmat = alpha_inverse(base).matrix();
    Mat cmat = alpha_inverse(fbase).matrix();
    Mat cinv = inverse(cmat);
    ProjElement bP(bmat);

    // Oracle conjugated to fix the basepoint; throws ShrinkNeeded on domain misses.
    auto ev = [&](const Flag& f) -> Flag {
        Flag shifted = act(bP, f);
        if (!oracle.contains(shifted)) throw ShrinkNeeded{};
        return Flag(cinv * oracle.fn(shifted).basis());
    };

    // Fibration preservation on sampled fiber pairs (K_j cosets).
    for (int j = 1; j <= n - 1; ++j) {
        for (int trial = 0; trial < 2; ++trial) {
            bool done = false;
            for (int s = 3; s < 48 && !done; ++s) {
                Rational scale = rational_pow(Rational(1, 2), s);
                LieElement u = random_lie(rng, n, field, 4).scale(scale);
                LieElement k(n, field);
                for (int p = 1; p < n; ++p)
                    for (int q = p + 1; q <= n; ++q)
                        if (q <= n - j || p >= n - j + 1)
                            k.set_coeff(p, q, random_scalar(rng, field, 4).scale(scale));
                if (k.is_zero()) continue;
                Flag f1 = alpha(exp(u));
                Flag f2 = alpha(group_mul(exp(u), exp(k)));
                try {
                    Flag i1 = ev(f1);
                    Flag i2 = ev(f2);
                    if (!(pi_j(i1, j) == pi_j(i2, j)))
                        throw NotFibrationPreservingError(
                            "reconstruct: a pi_" + std::to_string(j) + " fiber is split by the oracle");
                    done = true;
                } catch (const ShrinkNeeded&) {
                    continue;
                }
            }
            if (!done)
                throw DomainError("reconstruct: could not fit fiber probes inside the oracle domain");
        }
    }

    // Frame lines L^i = e_i + ... + e_n (aligned with the basepoint flag) and a
    // deterministic unit point. The chain flags must already sit inside the
    // chart: dilation preserves chart membership, so shrinking cannot repair a
    // bad choice.
    std::vector<GrassmannPoint> lines0;
    for (int t = 2; lines0.empty(); ++t) {
        if (t > 16) throw InternalConsistencyError("reconstruct: no valid unit point found");
        std::vector<Scalar> v0(static_cast<size_t>(n), Scalar::zero(field));
        Rational p(1);
        for (int l = 0; l < n; ++l) {
            v0[static_cast<size_t>(l)] = Scalar(field, p);
            p *= t;
        }
        std::vector<GrassmannPoint> pts;
        pts.emplace_back(n, column_matrix(field, v0));
        for (int i = 1; i <= n; ++i) {
            std::vector<Scalar> li(static_cast<size_t>(n), Scalar::zero(field));
            for (int l = i; l <= n; ++l) li[static_cast<size_t>(l - 1)] = Scalar::one(field);
            pts.emplace_back(n, column_matrix(field, li));
        }
        if (!is_frame(pts)) continue;
        AugmentedFrame aug = augment(ProjectiveFrame(n, pts));
        pts.push_back(aug.extra);
        bool chart_ok = true;
        for (size_t i = 0; i < pts.size() && chart_ok; ++i)
            if (!in_Nhat(chain_flag(pts, n, field, i))) chart_ok = false;
        if (chart_ok) lines0 = std::move(pts);
    }

    // Shrink by dyadic dilations until all evaluation flags fit in the domain
    // and the image lines form a frame.
    std::vector<GrassmannPoint> lines_r = lines0;
    std::vector<GrassmannPoint> images;
    bool degenerate_last = false;
    bool ok = false;
    Rational r(1);
    for (int step = 0; step < 64 && !ok; ++step, r /= 2) {
        std::vector<Scalar> diag;
        for (int i = 1; i <= n; ++i) diag.push_back(Scalar(field, rational_pow(r, -i)));
        Mat gr = Mat::diagonal(diag);
        lines_r.clear();
        for (const auto& l : lines0) lines_r.emplace_back(n, gr * l.columns());
        images.clear();
        try {
            for (size_t i = 0; i < lines_r.size(); ++i)
                images.push_back(pi_j(ev(chain_flag(lines_r, n, field, i)), 1));
        } catch (const ShrinkNeeded&) {
            degenerate_last = false;
            continue;
        }
        std::vector<GrassmannPoint> image_frame_pts(images.begin(), images.end() - 1);
        if (!is_frame(image_frame_pts)) {
            degenerate_last = true;
            continue;
        }
        // A fibration-preserving map must carry the augmentation across.
        AugmentedFrame aug_img = augment(ProjectiveFrame(n, image_frame_pts));
        if (!(aug_img.extra == images.back()))
            throw NotFibrationPreservingError("reconstruct: the augmented line is not respected");
        ok = true;
    }
    if (!ok) {
        if (degenerate_last)
            throw DegenerateMapError("reconstruct: image frame stayed degenerate through 64 shrink steps");
        throw DomainError("reconstruct: could not fit the frame inside the oracle domain");
    }

    ProjectiveFrame frame_r(n, std::vector<GrassmannPoint>(lines_r.begin(), lines_r.end() - 1));
    ProjectiveFrame image_frame(n, std::vector<GrassmannPoint>(images.begin(), images.end() - 1));
    ProjElement g1 = solve_frame_map(standard_frame(n, field), frame_r);
    ProjElement g2 = solve_frame_map(image_frame, standard_frame(n, field));

    // Chart samples around [e_n]: phi(x) is the dehomogenized image of the
    // line (x, 1) under g2 ∘ f ∘ g1.
    auto sample_image = [&](const std::vector<Scalar>& x) -> std::optional<std::vector<Scalar>> {
        Mat b(n, n, field);
        for (int i = 0; i < m; ++i) b.at(i, n - 1) = x[static_cast<size_t>(i)];
        b.at(n - 1, n - 1) = Scalar::one(field);
        for (int c = 0; c < n - 1; ++c) b.at(c, c) = Scalar::one(field);
        Flag phi_flag(b);
        Flag image = act(g2, ev(act(g1, phi_flag)));
        std::vector<Scalar> v = pi_j(image, 1).columns().col(0);
        if (v[static_cast<size_t>(n - 1)].is_zero()) return std::nullopt;
        Scalar inv = v[static_cast<size_t>(n - 1)].invert();
        std::vector<Scalar> y;
        for (int i = 0; i < m; ++i) y.push_back(v[static_cast<size_t>(i)] * inv);
        return y;
    };

    std::vector<AffineSample> samples;
    {
        std::vector<std::vector<Scalar>> design;
        auto point = [&](int axis, const Scalar& value) {
            std::vector<Scalar> x(static_cast<size_t>(m), Scalar::zero(field));
            if (axis >= 0) x[static_cast<size_t>(axis)] = value;
            return x;
        };
        bool built = false;
        Rational t(1, 4);
        for (int attempt = 0; attempt < 48 && !built; ++attempt, t /= 2) {
            design.clear();
            design.push_back(point(-1, Scalar::zero(field)));
            Scalar ts(field, t);
            for (int c = 0; c < m; ++c) design.push_back(point(c, ts));
            design.push_back(point(0, -ts));
            design.push_back(point(0, Scalar(field, 2 * t)));
            std::vector<Scalar> diag1(static_cast<size_t>(m), ts);
            std::vector<Scalar> diag2(static_cast<size_t>(m), Scalar(field, 2 * t));
            design.push_back(diag1);
            design.push_back(diag2);
            if (field == Field::H) {
                for (int c = 1; c <= 3; ++c) {
                    design.push_back(point(0, Scalar::unit(field, c).scale(t)));
                    if (m >= 2) {
                        std::vector<Scalar> q1 = point(0, ts);
                        q1[1] = Scalar::unit(field, c).scale(t);
                        std::vector<Scalar> q2 = point(0, Scalar(field, 2 * t));
                        q2[1] = Scalar::unit(field, c).scale(2 * t);
                        design.push_back(q1);
                        design.push_back(q2);
                    }
                }
            }
            try {
                std::vector<AffineSample> trial;
                bool missed = false;
                for (const auto& x : design) {
                    auto y = sample_image(x);
                    if (!y) {
                        missed = true;
                        break;
                    }
                    trial.push_back(AffineSample{x, *y});
                }
                if (missed) continue;
                samples = std::move(trial);
                built = true;
            } catch (const ShrinkNeeded&) {
                continue;
            }
        }
        if (!built) throw DomainError("reconstruct: could not fit chart samples inside the domain");
    }

    SpecialAffineFit fit;
    try {
        fit = special_affine_fit(samples, field, m);
    } catch (const HypothesisError& e) {
        throw NotFibrationPreservingError(std::string("reconstruct: ") + e.what());
    }
    if (fit.zero_map || fit.a.is_zero())
        throw DegenerateMapError("reconstruct: the induced chart map collapses to a point");
    for (const auto& off : fit.offset)
        if (!off.is_zero())
            throw NotFibrationPreservingError("reconstruct: chart map fails to fix the origin");

    Mat ghat(n, n, field);
    if (field == Field::H) {
        // h is inner: find s with s i s^{-1} = lambda, s j s^{-1} = mu; then
        // diag(a s, ..., a s, s) realizes x -> a h(x) on the chart.
        Mat sys(8, 4, Field::R);
        auto fill = [&](int row0, const Scalar& q, const Scalar& lhs) {
            // (coords of x*q - lhs*x) as a linear map of x
            for (int col = 0; col < 4; ++col) {
                Scalar xb = Scalar::unit(Field::H, col);
                Scalar val = xb * q - lhs * xb;
                for (int row = 0; row < 4; ++row)
                    sys.at(row0 + row, col) = Scalar(Field::R, val.comp(row));
            }
        };
        fill(0, Scalar::unit(Field::H, 1), fit.h.apply(Scalar::unit(Field::H, 1)));
        fill(4, Scalar::unit(Field::H, 2), fit.h.apply(Scalar::unit(Field::H, 2)));
        Mat ns = null_space(sys);
        if (ns.cols() < 1)
            throw InternalConsistencyError("reconstruct: inner automorphism solve failed");
        Scalar s(Field::H, ns.at(0, 0).re(), ns.at(1, 0).re(), ns.at(2, 0).re(), ns.at(3, 0).re());
        if (s.is_zero()) throw InternalConsistencyError("reconstruct: zero conjugator");
        for (int i = 0; i < n - 1; ++i) ghat.at(i, i) = fit.a * s;
        ghat.at(n - 1, n - 1) = s;
    } else {
        for (int i = 0; i < n - 1; ++i) ghat.at(i, i) = fit.a;
        ghat.at(n - 1, n - 1) = Scalar::one(field);
    }

    Mat g_tilde = inverse(g2.matrix()) * ghat * inverse(g1.matrix());
    ProjElement result(cmat * g_tilde * inverse(bmat));

    // Held-out verification across the whole declared domain.
    for (int t = 0; t < 50; ++t) {
        Flag f = random_flag_in_domain(rng, oracle);
        if (!(oracle.fn(f) == act(result, f)))
            throw NotFibrationPreservingError("reconstruct: held-out verification failed");
    }
    return result;
}

Flag escape_flag(const Mat& g) {
    const int n = g.rows();
    const Field field = g.field();
    if (!g.is_lower_unitriangular())
        throw DomainError("escape_flag: need a lower triangular matrix with unit diagonal");
    if (g == Mat::identity(n, field)) throw NoEscapeError("escape_flag: the identity escapes nothing");

    // k: the last column with below-diagonal support; j0: the lowest nonzero row in it.
    int k = -1, j0 = -1;
    for (int col = n - 1; col >= 1 && k < 0; --col)
        for (int row = n; row > col; --row)
            if (!g.at(row - 1, col - 1).is_zero()) {
                k = col;
                j0 = row;
                break;
            }

    // v = e_k - sum_{j=k+1}^{j0} e_j g_{jk}; the flag is the identity flag with
    // the j0-th basis vector replaced by v.
    Mat b = Mat::identity(n, field);
    for (int row = 1; row <= n; ++row) b.at(row - 1, j0 - 1) = Scalar::zero(field);
    b.at(k - 1, j0 - 1) = Scalar::one(field);
    for (int j = k + 1; j <= j0; ++j) b.at(j - 1, j0 - 1) = -g.at(j - 1, k - 1);

    Flag f(b);
    if (!in_Nhat(f) || in_Nhat(act(ProjElement(g), f)))
        throw InternalConsistencyError("escape_flag: construction violated its contract");
    return f;
}

} // namespace flagrig
