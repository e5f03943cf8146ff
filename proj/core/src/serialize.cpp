#include "flagrig/serialize.hpp"

namespace flagrig {

namespace {

Rational rational_field(const Json& j, const char* key) {
    if (!j.contains(key)) throw UsageError(std::string("missing field '") + key + "'");
    return parse_rational(j.at(key).get<std::string>());
}

int int_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer())
        throw UsageError(std::string("missing integer field '") + key + "'");
    return j.at(key).get<int>();
}

} // namespace

Field field_from_json(const Json& j) {
    if (!j.is_string()) throw UsageError("field tag must be a string");
    return parse_field(j.get<std::string>());
}

Json to_json(const Scalar& s) {
    switch (s.field()) {
        case Field::R:
            return rational_to_string(s.re());
        case Field::C:
            return Json{{"re", rational_to_string(s.comp(0))}, {"im", rational_to_string(s.comp(1))}};
        default:
            return Json{{"a0", rational_to_string(s.comp(0))},
                        {"a1", rational_to_string(s.comp(1))},
                        {"a2", rational_to_string(s.comp(2))},
                        {"a3", rational_to_string(s.comp(3))}};
    }
}

Scalar scalar_from_json(Field f, const Json& j) {
    switch (f) {
        case Field::R:
            if (!j.is_string()) throw UsageError("real scalar must be a 'p/q' string");
            return Scalar(Field::R, parse_rational(j.get<std::string>()));
        case Field::C:
            return Scalar(Field::C, rational_field(j, "re"), rational_field(j, "im"));
        default:
            return Scalar(Field::H, rational_field(j, "a0"), rational_field(j, "a1"),
                          rational_field(j, "a2"), rational_field(j, "a3"));
    }
}

Json to_json(const Mat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return Json{{"field", field_name(m.field())}, {"rows", m.rows()}, {"cols", m.cols()},
                {"entries", std::move(rows)}};
}

Mat matrix_from_json(const Json& j) {
    Field f = field_from_json(j.at("field"));
    int rows = int_field(j, "rows");
    int cols = int_field(j, "cols");
    const Json& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != rows) throw UsageError("matrix: row count mismatch");
    Mat m(rows, cols, f);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(entries.at(static_cast<size_t>(r)).size()) != cols)
            throw UsageError("matrix: column count mismatch in row " + std::to_string(r));
        for (int c = 0; c < cols; ++c)
            m.at(r, c) = scalar_from_json(f, entries.at(static_cast<size_t>(r)).at(static_cast<size_t>(c)));
    }
    return m;
}

Json to_json(const LieElement& a) {
    RealBasis basis(a.n(), a.field());
    Json terms = Json::array();
    for (int idx = 0; idx < basis.size(); ++idx) {
        const auto& e = basis.entry(idx);
        Rational v = a.coeff(e.i, e.j).comp(e.comp);
        if (rat_is_zero(v)) continue;
        terms.push_back(Json{{"i", e.i}, {"j", e.j}, {"comp", e.comp},
                             {"value", rational_to_string(v)}});
    }
    return Json{{"n", a.n()}, {"field", field_name(a.field())}, {"terms", std::move(terms)}};
}

LieElement lie_from_json(const Json& j) {
    int n = int_field(j, "n");
    Field f = field_from_json(j.at("field"));
    LieElement a(n, f);
    for (const auto& t : j.at("terms")) {
        int i = int_field(t, "i");
        int jj = int_field(t, "j");
        int comp = t.contains("comp") ? int_field(t, "comp") : 0;
        Rational v = rational_field(t, "value");
        if (comp < 0 || comp >= field_dim(f)) throw UsageError("lie element: bad component index");
        Scalar c = a.coeff(i, jj) + Scalar::unit(f, comp).scale(v);
        a.set_coeff(i, jj, c);
    }
    return a;
}

Json to_json(const GroupElement& g) {
    return Json{{"n", g.n()}, {"field", field_name(g.field())}, {"matrix", to_json(g.matrix())}};
}

GroupElement group_from_json(const Json& j) { return GroupElement(matrix_from_json(j.at("matrix"))); }

Json to_json(const Flag& f) {
    return Json{{"n", f.n()}, {"field", field_name(f.field())}, {"basis", to_json(f.basis())}};
}

Flag flag_from_json(const Json& j) { return Flag(matrix_from_json(j.at("basis"))); }

Json to_json(const GrassmannPoint& w) {
    return Json{{"n", w.n()}, {"field", field_name(w.field())}, {"j", w.j()},
                {"columns", to_json(w.columns())}};
}

GrassmannPoint grassmann_from_json(const Json& j) {
    return GrassmannPoint(int_field(j, "n"), matrix_from_json(j.at("columns")));
}

Json to_json(const HSpec& h) {
    switch (h.kind) {
        case HSpec::Kind::Identity:
            return "id";
        case HSpec::Kind::Conjugation:
            return "conj";
        default:
            return Json{{"lambda", to_json(h.lambda)}, {"mu", to_json(h.mu)}, {"nu", to_json(h.nu)}};
    }
}

HSpec hspec_from_json(Field f, const Json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "id") return HSpec::identity();
        if (s == "conj") return HSpec::conjugation();
        throw UsageError("h: unknown kind '" + s + "'");
    }
    HSpec h = HSpec::quaternion(scalar_from_json(Field::H, j.at("lambda")),
                                scalar_from_json(Field::H, j.at("mu")));
    h.validate(f);
    return h;
}

Json to_json(const AutCertificate& c) {
    Json lambda = Json::array();
    for (const auto& l : c.lambda) lambda.push_back(to_json(l));
    return Json{{"epsilon", c.epsilon}, {"lambda", std::move(lambda)}, {"h", to_json(c.h)}};
}

AutCertificate certificate_from_json(Field f, const Json& j) {
    AutCertificate c;
    c.epsilon = int_field(j, "epsilon");
    for (const auto& l : j.at("lambda")) c.lambda.push_back(scalar_from_json(f, l));
    c.h = hspec_from_json(f, j.at("h"));
    return c;
}

Json graded_map_to_json(const GradedMap& m) {
    Json rows = Json::array();
    const Mat& v1 = m.v1();
    for (int r = 0; r < v1.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < v1.cols(); ++c) row.push_back(rational_to_string(v1.at(r, c).re()));
        rows.push_back(std::move(row));
    }
    return Json{{"n", m.n()}, {"field", field_name(m.field())}, {"v1", std::move(rows)}};
}

GradedMap graded_map_from_json(const Json& j) {
    int n = int_field(j, "n");
    Field f = field_from_json(j.at("field"));
    const Json& rows = j.at("v1");
    const int dim = GradedMap::layer_dim(n, f, 1);
    if (static_cast<int>(rows.size()) != dim)
        throw UsageError("graded map: V_1 matrix must be " + std::to_string(dim) + " x " +
                         std::to_string(dim));
    Mat v1(dim, dim, Field::R);
    for (int r = 0; r < dim; ++r) {
        if (static_cast<int>(rows.at(static_cast<size_t>(r)).size()) != dim)
            throw UsageError("graded map: bad row length at row " + std::to_string(r));
        for (int c = 0; c < dim; ++c)
            v1.at(r, c) = Scalar(Field::R,
                                 parse_rational(rows.at(static_cast<size_t>(r))
                                                    .at(static_cast<size_t>(c))
                                                    .get<std::string>()));
    }
    return GradedMap(n, f, v1);
}

Json to_json(const LeftInvariantForm& w) {
    Json terms = Json::array();
    for (const auto& [idx, c] : w.terms())
        terms.push_back(Json{{"indices", idx}, {"coeff", rational_to_string(c)}});
    return Json{{"n", w.n()}, {"field", field_name(w.field())}, {"degree", w.degree()},
                {"terms", std::move(terms)}};
}

LeftInvariantForm form_from_json(const Json& j) {
    LeftInvariantForm w(int_field(j, "n"), field_from_json(j.at("field")), int_field(j, "degree"));
    for (const auto& t : j.at("terms"))
        w.add_term(t.at("indices").get<std::vector<int>>(),
                   parse_rational(t.at("coeff").get<std::string>()));
    return w;
}

Json to_json(const PolyMapSpec& f) {
    Json coords = Json::array();
    for (const auto& p : f.coords()) {
        Json terms = Json::array();
        for (const auto& [mono, c] : p.terms())
            terms.push_back(Json{{"exps", mono}, {"coeff", rational_to_string(c)}});
        coords.push_back(std::move(terms));
    }
    return Json{{"n", f.n()}, {"field", field_name(f.field())}, {"coords", std::move(coords)}};
}

PolyMapSpec poly_map_from_json(const Json& j) {
    int n = int_field(j, "n");
    Field f = field_from_json(j.at("field"));
    RealBasis basis(n, f);
    std::vector<Poly> coords;
    for (const auto& terms : j.at("coords")) {
        Poly p(basis.size());
        for (const auto& t : terms) {
            auto exps = t.at("exps").get<std::vector<int>>();
            if (static_cast<int>(exps.size()) != basis.size())
                throw UsageError("map spec: exponent arity mismatch");
            p.add_term(exps, parse_rational(t.at("coeff").get<std::string>()));
        }
        coords.push_back(std::move(p));
    }
    return PolyMapSpec(n, f, std::move(coords));
}

namespace {

Json to_json(const WeightedDegree& wd) {
    Json j{{"degree", wd.degree}};
    if (wd.minus_infinity)
        j["weight"] = "-inf";
    else
        j["weight"] = wd.weight;
    return j;
}

} // namespace

Json to_json(const PullbackHypotheses& rep) {
    return Json{{"deg_ok", rep.deg_ok},   {"wt_ok", rep.wt_ok},   {"wt_eq", rep.wt_eq},
                {"closed_ok", rep.closed_ok}, {"N", rep.N},       {"nu", rep.nu},
                {"alpha", to_json(rep.alpha)}, {"beta", to_json(rep.beta)}};
}

Json to_json(const PullbackIdentityReport& rep) {
    Json levels = Json::array();
    for (const auto& l : rep.levels) levels.push_back(Json{{"h", l.h}, {"residual", l.residual}});
    return Json{{"hypotheses", to_json(rep.hypotheses)}, {"levels", std::move(levels)},
                {"ratios", rep.ratios}};
}

} // namespace flagrig
