#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "../tools/cli.hpp"
#include "flagrig/serialize.hpp"

using namespace flagrig;
namespace fs = std::filesystem;

namespace {

int cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"flagrig"};
    argv.insert(argv.end(), args.begin(), args.end());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path tmp_path(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "flagrig_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& p, const Json& j) {
    std::ofstream out(p);
    out << j.dump(2);
}

Json read_file(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return Json::parse(in);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("aut classify recognizes tau") {
    GradedMap t = tau_graded_map(4, Field::R);
    fs::path in = tmp_path("tau_v1.json");
    fs::path out = tmp_path("tau_cert.json");
    write_file(in, graded_map_to_json(t));
    CHECK(cli({"aut", "classify", "--n", "4", "--field", "R", "--in", in.c_str(), "--out",
               out.c_str()}) == 0);
    Json cert = read_file(out);
    CHECK(cert.at("epsilon") == 1);
    for (const auto& l : cert.at("lambda")) CHECK(l == Json("1"));
    CHECK(cert.at("h") == Json("id"));
}

TEST_CASE("aut classify rejects a non-automorphism with exit 1") {
    // X_12 -> X_12 + X_23 breaks the bracket relations.
    std::vector<LieElement> images;
    images.push_back(LieElement::basis(4, Field::R, 1, 2) + LieElement::basis(4, Field::R, 2, 3));
    images.push_back(LieElement::basis(4, Field::R, 2, 3));
    images.push_back(LieElement::basis(4, Field::R, 3, 4));
    fs::path in = tmp_path("bad_v1.json");
    write_file(in, graded_map_to_json(graded_map_from_v1_images(4, Field::R, images)));
    CHECK(cli({"aut", "classify", "--n", "4", "--field", "R", "--in", in.c_str()}) == 1);
}

TEST_CASE("forms check verdicts") {
    fs::path out = tmp_path("forms.json");
    CHECK(cli({"forms", "check", "--n", "5", "--pair", "omega_plus:eta_3_minus", "--out",
               out.c_str()}) == 0);
    Json rep = read_file(out);
    CHECK(rep.at("deg_ok") == true);
    CHECK(rep.at("wt_ok") == true);
    CHECK(rep.at("wt_eq") == true);
    CHECK(rep.at("closed_ok") == true);

    CHECK(cli({"forms", "check", "--n", "4", "--field", "R", "--pair", "theta_1_2:theta_1_2",
               "--out", out.c_str()}) == 1);
    CHECK(read_file(out).at("deg_ok") == false);

    CHECK(cli({"forms", "check", "--n", "3", "--pair",
               "q_omega_plus:ix_2_3_1:q_eta_minus", "--out", out.c_str()}) == 0);
}

TEST_CASE("algebra check runs clean") {
    fs::path out = tmp_path("algebra.json");
    CHECK(cli({"algebra", "check", "--n", "4", "--field", "H", "--seed", "3", "--out",
               out.c_str()}) == 0);
    Json rep = read_file(out);
    CHECK(rep.at("jacobi_ok") == true);
    CHECK(rep.at("nu") == 40);
}

TEST_CASE("frame solve on a diagonal move") {
    ProjectiveFrame s = standard_frame(3, Field::R);
    std::vector<Scalar> d{Scalar(Field::R, 1), Scalar(Field::R, 2), Scalar(Field::R, 3)};
    Mat g = Mat::diagonal(d);
    Json a = Json::array(), b = Json::array();
    for (int i = 0; i <= 3; ++i) {
        Json col_a = Json::array(), col_b = Json::array();
        std::vector<Scalar> moved = (g * s.point(i).columns()).col(0);
        for (int r = 0; r < 3; ++r) {
            col_a.push_back(to_json(s.point(i).columns().at(r, 0)));
            col_b.push_back(to_json(moved[static_cast<size_t>(r)]));
        }
        a.push_back(col_a);
        b.push_back(col_b);
    }
    fs::path in = tmp_path("frames.json");
    fs::path out = tmp_path("frame_solve.json");
    write_file(in, Json{{"a", a}, {"b", b}});
    CHECK(cli({"frame", "solve", "--n", "3", "--field", "R", "--in", in.c_str(), "--out",
               out.c_str()}) == 0);
    Mat got = matrix_from_json(read_file(out).at("matrix"));
    CHECK(ProjElement(got) == ProjElement(g));
}

TEST_CASE("dynamics beta with contraction check") {
    Mat v(3, 1, Field::R);
    v.at(0, 0) = Scalar(Field::R, 1);
    v.at(2, 0) = Scalar(Field::R, 1);
    fs::path in = tmp_path("line.json");
    fs::path out = tmp_path("beta.json");
    write_file(in, to_json(GrassmannPoint(3, v)));
    CHECK(cli({"dynamics", "beta", "--n", "3", "--field", "R", "--j", "1", "--in", in.c_str(),
               "--r", "1/2", "--out", out.c_str()}) == 0);
    Json rep = read_file(out);
    CHECK(rep.at("beta_squared") == Json("1"));
    CHECK(rep.at("contraction_ok") == true);
}

TEST_CASE("escape flag command") {
    Mat g = Mat::identity(4, Field::R);
    g.at(1, 0) = Scalar(Field::R, 1);
    fs::path in = tmp_path("escape_g.json");
    fs::path out = tmp_path("escape.json");
    write_file(in, Json{{"matrix", to_json(g)}});
    CHECK(cli({"rigidity", "escape-flag", "--n", "4", "--field", "R", "--in", in.c_str(), "--out",
               out.c_str()}) == 0);
    Json rep = read_file(out);
    CHECK(rep.at("in_chart") == true);
    CHECK(rep.at("image_in_chart") == false);

    write_file(in, Json{{"matrix", to_json(Mat::identity(4, Field::R))}});
    CHECK(cli({"rigidity", "escape-flag", "--n", "4", "--field", "R", "--in", in.c_str()}) == 1);
}

TEST_CASE("reconstruct oracles") {
    fs::path out1 = tmp_path("rec1.json");
    fs::path out2 = tmp_path("rec2.json");
    CHECK(cli({"rigidity", "reconstruct", "--n", "3", "--field", "R", "--oracle", "action",
               "--seed", "11", "--out", out1.c_str()}) == 0);
    Json rep = read_file(out1);
    CHECK(ProjElement(matrix_from_json(rep.at("matrix"))) ==
          ProjElement(matrix_from_json(rep.at("oracle_matrix"))));

    // Deterministic: identical bytes for identical seed.
    CHECK(cli({"rigidity", "reconstruct", "--n", "3", "--field", "R", "--oracle", "action",
               "--seed", "11", "--out", out2.c_str()}) == 0);
    CHECK(slurp(out1) == slurp(out2));

    CHECK(cli({"rigidity", "reconstruct", "--n", "3", "--field", "R", "--oracle", "affine",
               "--seed", "5", "--out", out1.c_str()}) == 0);

    CHECK(cli({"rigidity", "reconstruct", "--n", "3", "--field", "R", "--oracle", "psi-action",
               "--seed", "11"}) == 1);
    CHECK(cli({"rigidity", "reconstruct", "--n", "3", "--field", "R", "--oracle", "constant",
               "--seed", "11"}) == 1);
}

TEST_CASE("pansu diff on a contact shear") {
    fs::path in = tmp_path("shear.json");
    fs::path at = tmp_path("at.json");
    fs::path out = tmp_path("diff.json");
    write_file(in, to_json(contact_shear_x({Rational(0), Rational(1)})));
    LieElement base(3, Field::R);
    base.set_coeff(2, 3, Scalar(Field::R, 5));
    write_file(at, to_json(base));
    CHECK(cli({"pansu", "diff", "--in", in.c_str(), "--at", at.c_str(), "--out", out.c_str()}) == 0);
    Json rep = read_file(out);
    // First layer in basis order (1,2), (2,3): the shear column carries 2y = 10.
    CHECK(rep.at("layers").at(0).at(0).at(1) == Json("10"));
}

TEST_CASE("pansu pullback-identity through the CLI") {
    fs::path in = tmp_path("shear2.json");
    fs::path out = tmp_path("quad.json");
    write_file(in, to_json(PolyMapSpec::compose(contact_shear_y({Rational(0), Rational(1)}),
                                                contact_shear_x({Rational(0), Rational(0), Rational(1)}))));
    CHECK(cli({"pansu", "pullback-identity", "--in", in.c_str(), "--alpha", "theta_2_3^theta_1_3",
               "--beta", "one", "--cells", "4", "--halvings", "1", "--out", out.c_str()}) == 0);
    Json rep = read_file(out);
    REQUIRE(rep.at("levels").size() == 2);
    CHECK(rep.at("ratios").at(0).get<double>() <= 0.3);

    // theta_1_3 is not closed, so the hypotheses are refused.
    CHECK(cli({"pansu", "pullback-identity", "--in", in.c_str(), "--alpha", "theta_2_3",
               "--beta", "theta_1_3", "--cells", "2", "--halvings", "0"}) == 1);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(cli({"aut", "classify", "--n", "4", "--field", "R"}) == 2);
    CHECK(cli({"forms", "check", "--n", "4", "--pair", "nonsense:one"}) == 2);
    CHECK(cli({"frame", "solve", "--n", "3", "--field", "R", "--in", "/nonexistent.json"}) == 2);
}

TEST_CASE("acceptance subset through the CLI") {
    CHECK(cli({"suite", "acceptance", "--seed", "7", "--only", "6"}) == 0);
}
