#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "csv_io.hpp"
#include "errors.hpp"
#include "generate.hpp"
#include "model_io.hpp"
#include "numeric.hpp"
#include "subspace.hpp"
#include "test_support.hpp"

using namespace rsub;
using rsub::testing::vec2;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("csv parsing accepts plain and headered input") {
  PointSet plain = parse_points_csv("1.0,2.0\n3.0,4.0\n", "test");
  CHECK(plain.size() == 2);
  CHECK(plain.dim() == 2);
  CHECK(plain.point(1)[1] == 4.0);

  PointSet headered = parse_points_csv("x,y\n1,2\n", "test");
  CHECK(headered.size() == 1);
  CHECK(headered.point(0)[0] == 1.0);

  PointSet spaced = parse_points_csv(" 1 , 2 \r\n 3 ,4\n\n", "test");
  CHECK(spaced.size() == 2);

  PointSet bom = parse_points_csv("\xEF\xBB\xBF""5,6\n", "test");
  CHECK(bom.point(0)[0] == 5.0);
}

TEST_CASE("csv parsing rejects bad input with row/column diagnostics") {
  try {
    parse_points_csv("1,2\n3\n", "test");
    CHECK(false);
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(e.kind() == ErrorKind::data);
  }

  try {
    parse_points_csv("1,2\n3,oops\n", "test");
    CHECK(false);
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }

  try {
    parse_points_csv("1,2\n3,nan\n", "test");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("non-finite") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_points_csv("", "test"), Error);
  CHECK_THROWS_AS(parse_points_csv("x,y\n", "test"), Error);
  CHECK_THROWS_AS(read_points_csv("/nonexistent/path.csv"), Error);
}

TEST_CASE("csv write/read round-trips exactly") {
  PointSet pts = gen_line_outliers(20, 2, 0.05, 99);
  std::string path = temp_path("rsub_io_roundtrip.csv");
  write_points_csv(pts, path);
  PointSet back = read_points_csv(path);
  REQUIRE(back.size() == pts.size());
  for (Index i = 0; i < pts.size(); ++i) {
    CHECK((back.point(i) - pts.point(i)).norm() == 0.0);
  }
  std::remove(path.c_str());
}

TEST_CASE("distance TSV format is pinned") {
  CHECK(distances_to_tsv({1.0, 2.5}) == "1\t1.0\n2\t2.5\n");
  CHECK(distances_to_tsv({}) == "");
}

TEST_CASE("format_double always reads back as a float literal") {
  CHECK(format_double(1.0) == "1.0");
  CHECK(format_double(2.5) == "2.5");
  CHECK(format_double(-0.125) == "-0.125");
  CHECK(format_double(1e300).find('e') != std::string::npos);
}

TEST_CASE("generator output is deterministic and exactly sized") {
  PointSet a = gen_line_outliers(50, 2, 0.01, 7);
  PointSet b = gen_line_outliers(50, 2, 0.01, 7);
  CHECK(a.size() == 52);
  CHECK(points_to_csv(a) == points_to_csv(b));

  PointSet c = gen_line_outliers(50, 2, 0.01, 8);
  CHECK(points_to_csv(a) != points_to_csv(c));
}

TEST_CASE("noiseless inliers are exactly collinear") {
  PointSet pts = gen_line_outliers(10, 0, 0.0, 0);
  CHECK(pts.size() == 10);
  for (Index i = 0; i < pts.size(); ++i) {
    CHECK(pts.point(i)[0] == pts.point(i)[1]);
  }
}

TEST_CASE("outliers sit at the documented offsets") {
  PointSet pts = gen_line_outliers(3, 2, 0.0, 1);
  CHECK((pts.point(3) - vec2(1.0, -0.5)).norm() == 0.0);
  CHECK((pts.point(4) - vec2(0.9, -0.4)).norm() == 0.0);
}

TEST_CASE("apply_drift matches the closed form") {
  SUBCASE("last point of an N=633 sequence gets coefficient 1/8") {
    Matrix cols = Matrix::Zero(3, 633);
    Rng rng(5, "drift_fill");
    for (Index j = 0; j < 633; ++j) cols.col(j) = rng.gaussian_vector(3);
    PointSet pts = PointSet::from_columns(cols);
    PointSet drifted = apply_drift(pts);
    Vector x = pts.point(632);
    Vector expected = 0.75 * x + (1.0 / 8.0) * (Vector::Ones(3) + x);
    CHECK((drifted.point(632) - expected).norm() <= 1e-15);
  }
  SUBCASE("the all-minus-ones point maps to -3/4 ones for every index") {
    Matrix cols = Matrix::Constant(2, 4, -1.0);
    // perturb the others so the set is not all identical
    cols(0, 1) = 2.0;
    cols(1, 2) = 5.0;
    PointSet pts = PointSet::from_columns(cols);
    PointSet drifted = apply_drift(pts);
    CHECK((drifted.point(0) - Vector::Constant(2, -0.75)).norm() <= 1e-15);
    CHECK((drifted.point(3) - Vector::Constant(2, -0.75)).norm() <= 1e-15);
  }
  SUBCASE("indices are 1-based: the first point gets 1/(8N)") {
    PointSet pts = PointSet::from_vectors({vec2(1, 2), vec2(3, 4)});
    PointSet drifted = apply_drift(pts);
    double c = 1.0 / 16.0;
    Vector expected = 0.75 * pts.point(0) + c * (Vector::Ones(2) + pts.point(0));
    CHECK((drifted.point(0) - expected).norm() <= 1e-15);
  }
}

TEST_CASE("model documents round-trip exactly") {
  PointSet pts = gen_line_outliers(25, 2, 0.01, 17);
  SubspaceModel model = fit_subspace(pts, 1, OffsetPolicy::median(), FitConfig{});
  ModelDocument doc{model, R"({"subcommand":"fit","seed":17})"};

  std::string path = temp_path("rsub_model_roundtrip.json");
  write_model_document(doc, path);
  ModelDocument back = read_model_document(path);

  CHECK(back.model.method == model.method);
  CHECK((back.model.offset - model.offset).norm() == 0.0);
  REQUIRE(back.model.k() == model.k());
  for (Index k = 0; k < model.k(); ++k) {
    CHECK((back.model.basis.column(k).vec() - model.basis.column(k).vec()).norm() == 0.0);
  }
  REQUIRE(back.model.energies.size() == model.energies.size());
  for (std::size_t i = 0; i < model.energies.size(); ++i) {
    CHECK(back.model.energies[i] == model.energies[i]);
  }
  REQUIRE(back.model.stages.size() == model.stages.size());
  for (std::size_t i = 0; i < model.stages.size(); ++i) {
    CHECK(back.model.stages[i].iterations == model.stages[i].iterations);
    CHECK(back.model.stages[i].status == model.stages[i].status);
    CHECK(back.model.stages[i].final_step_norm == model.stages[i].final_step_norm);
    CHECK(back.model.stages[i].energy == model.stages[i].energy);
  }
  CHECK(!back.config_json.empty());
  CHECK(back.config_json.find("\"seed\":17") != std::string::npos);

  // writing the reread document reproduces the bytes
  std::string path2 = temp_path("rsub_model_roundtrip2.json");
  write_model_document(back, path2);
  CHECK(slurp(path) == slurp(path2));
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("model documents carry K direction arrays of length dim") {
  Rng rng(77, "threed");
  std::vector<Vector> pts;
  for (int i = 0; i < 30; ++i) {
    Vector v(3);
    v << 2.0 * rng.gaussian(), rng.gaussian(), 0.3 * rng.gaussian();
    pts.push_back(v);
  }
  SubspaceModel model = fit_subspace(PointSet::from_vectors(pts), 2, OffsetPolicy::mean(),
                                     FitConfig{});
  std::string text = model_document_to_json({model, ""});
  auto parsed = model_document_from_json(text, "inline");
  CHECK(parsed.model.k() == 2);
  CHECK(parsed.model.dim() == 3);
  CHECK(parsed.config_json.empty());
}

TEST_CASE("malformed model documents are rejected") {
  CHECK_THROWS_AS(model_document_from_json("{", "inline"), Error);
  CHECK_THROWS_AS(model_document_from_json(R"({"format":"other"})", "inline"), Error);
  CHECK_THROWS_AS(model_document_from_json(R"({"format":"rsub-model","model":{}})", "inline"),
                  Error);
}
