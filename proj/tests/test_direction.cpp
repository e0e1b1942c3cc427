#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "direction.hpp"
#include "errors.hpp"
#include "generate.hpp"
#include "rng.hpp"
#include "subspace.hpp"
#include "test_support.hpp"
#include "validate.hpp"

using namespace rsub;
using rsub::testing::angle_between_lines;
using rsub::testing::vec2;

namespace {

UnitDirection diag2() { return sphere_project(vec2(1, 1)); }

}  // namespace

TEST_CASE("energy on hand instances") {
  PointSet on_line = PointSet::from_vectors({vec2(1, 1), vec2(-2, -2), vec2(0.5, 0.5)});
  CHECK(energy(diag2(), DirectionProblem(on_line)) <= 1e-14);

  PointSet axes = PointSet::from_vectors({vec2(1, 0), vec2(0, 1)});
  CHECK(energy(UnitDirection(vec2(1, 0)), DirectionProblem(axes)) == doctest::Approx(1.0));

  PointSet single = PointSet::from_vectors({vec2(1, 1)});
  CHECK(energy(UnitDirection(vec2(1, 0)), DirectionProblem(single)) == doctest::Approx(1.0));
}

TEST_CASE("energy is exactly sign-invariant") {
  Rng rng(5, "sign_invariance");
  for (int t = 0; t < 20; ++t) {
    PointSet pts = rsub::testing::random_instance(100 + t, 3, 40, 2, 6);
    DirectionProblem p(pts);
    UnitDirection a = sphere_project(rng.gaussian_vector(pts.dim()));
    CHECK(energy(a, p) == energy(a.negated(), p));
  }
}

TEST_CASE("detect_anchor flags aligned points, either sign") {
  PointSet pts = PointSet::from_vectors({vec2(2, 1), vec2(0, 3)});
  DirectionProblem p(pts);

  UnitDirection a0 = sphere_project(pts.point(0));
  auto K = detect_anchor(a0, p);
  REQUIRE(K.has_value());
  CHECK(K->indices == std::vector<Index>{0});
  CHECK(K->alpha == doctest::Approx(pts.point(0).norm()).epsilon(1e-14));

  auto K_neg = detect_anchor(a0.negated(), p);
  REQUIRE(K_neg.has_value());
  CHECK(K_neg->indices == std::vector<Index>{0});
}

TEST_CASE("detect_anchor stays quiet 10 degrees away from every point") {
  PointSet pts = PointSet::from_vectors({vec2(1, 0), vec2(-1, 0), vec2(2, 0)});
  double t = 10.0 * M_PI / 180.0;
  UnitDirection a(vec2(std::cos(t), std::sin(t)));
  CHECK_FALSE(detect_anchor(a, DirectionProblem(pts)).has_value());
}

TEST_CASE("step_nonanchor strictly decreases energy off fixed points") {
  PointSet cross = PointSet::from_vectors({vec2(2, 0), vec2(-2, 0), vec2(0, 1), vec2(0, -1)});
  DirectionProblem p(cross);
  UnitDirection a = diag2();
  UnitDirection next = step_nonanchor(a, p);
  CHECK(energy(next, p) < energy(a, p));
  CHECK(std::abs(next.vec()[0]) > std::abs(next.vec()[1]));  // moved toward the heavy axis
}

TEST_CASE("step_nonanchor fixes critical points of symmetric data") {
  PointSet cross = PointSet::from_vectors({vec2(1, 0), vec2(-1, 0), vec2(0, 1), vec2(0, -1)});
  DirectionProblem p(cross);
  UnitDirection a = diag2();  // equal pull from both axes
  UnitDirection next = step_nonanchor(a, p);
  CHECK((next.vec() - a.vec()).norm() <= 1e-14);
}

TEST_CASE("step_nonanchor escapes the orthogonal direction of a near-pair") {
  PointSet pair = PointSet::from_vectors({vec2(1, 0), vec2(1, 1e-3)});
  DirectionProblem p(pair);
  UnitDirection a(vec2(0, 1));
  double e0 = energy(a, p);
  CHECK(e0 == doctest::Approx(2.0).epsilon(1e-3));
  UnitDirection next = step_nonanchor(a, p);
  CHECK(energy(next, p) < e0);
}

TEST_CASE("step_nonanchor rejects anchors and degenerate scatters") {
  PointSet pts = PointSet::from_vectors({vec2(3, 0)});
  DirectionProblem p(pts);
  CHECK_THROWS_AS(step_nonanchor(UnitDirection(vec2(1, 0)), p), Error);  // anchored
  CHECK_THROWS_AS(step_nonanchor(UnitDirection(vec2(0, 1)), p), Error);  // C_a a = 0
}

TEST_CASE("anchor_gradient on hand instances") {
  SUBCASE("single point: empty non-anchor sum") {
    PointSet pts = PointSet::from_vectors({vec2(1, 0)});
    DirectionProblem p(pts);
    UnitDirection a(vec2(1, 0));
    auto K = detect_anchor(a, p);
    REQUIRE(K);
    StepInfo info = anchor_gradient(a, *K, p);
    CHECK(info.gradient.norm() == 0.0);
    CHECK(K->alpha == doctest::Approx(1.0));
    CHECK_FALSE(info.step_scale_defined);
  }
  SUBCASE("orthogonal companion contributes nothing") {
    PointSet pts = PointSet::from_vectors({vec2(1, 0), vec2(0, 2)});
    DirectionProblem p(pts);
    UnitDirection a(vec2(1, 0));
    auto K = detect_anchor(a, p);
    REQUIRE(K);
    CHECK(K->indices == std::vector<Index>{0});
    StepInfo info = anchor_gradient(a, *K, p);
    CHECK(info.gradient.norm() == 0.0);
  }
  SUBCASE("diagonal companion gives the unit tangent") {
    PointSet pts = PointSet::from_vectors({vec2(1, 0), vec2(1, 1)});
    DirectionProblem p(pts);
    UnitDirection a(vec2(1, 0));
    auto K = detect_anchor(a, p);
    REQUIRE(K);
    StepInfo info = anchor_gradient(a, *K, p);
    CHECK((info.scatter_apply - vec2(1, 1)).norm() <= 1e-15);
    CHECK((info.gradient - vec2(0, 1)).norm() <= 1e-15);
    CHECK(info.step_scale == doctest::Approx(1.0));
  }
}

TEST_CASE("anchor_local_min_test on hand instances") {
  SUBCASE("single point is a global minimum") {
    PointSet pts = PointSet::from_vectors({vec2(1, 0)});
    DirectionProblem p(pts);
    UnitDirection a(vec2(1, 0));
    auto K = detect_anchor(a, p);
    REQUIRE(K);
    CHECK(anchor_local_min_test(a, *K, p));
    CHECK(energy(a, p) == 0.0);
  }
  SUBCASE("boundary ||G|| == alpha still terminates") {
    PointSet pts = PointSet::from_vectors({vec2(1, 0), vec2(1, 1)});
    DirectionProblem p(pts);
    UnitDirection a(vec2(1, 0));
    auto K = detect_anchor(a, p);
    REQUIRE(K);
    StepInfo info = anchor_gradient(a, *K, p);
    CHECK(info.gradient.norm() == doctest::Approx(1.0));
    CHECK(K->alpha == doctest::Approx(1.0));
    CHECK(anchor_local_min_test(a, *K, p));
  }
  SUBCASE("dominant point with symmetric companions") {
    PointSet pts = PointSet::from_vectors({vec2(10, 0), vec2(1, 1), vec2(1, -1)});
    DirectionProblem p(pts);
    UnitDirection a(vec2(1, 0));
    auto K = detect_anchor(a, p);
    REQUIRE(K);
    StepInfo info = anchor_gradient(a, *K, p);
    CHECK(info.gradient.norm() <= 1e-14);
    CHECK(K->alpha == doctest::Approx(10.0));
    CHECK(anchor_local_min_test(a, *K, p));
  }
}

TEST_CASE("step_anchor decreases energy at a non-minimizing anchor") {
  PointSet pts = PointSet::from_vectors({vec2(0.1, 0), vec2(1, 1), vec2(1, 0.9)});
  DirectionProblem p(pts);
  UnitDirection a(vec2(1, 0));
  auto K = detect_anchor(a, p);
  REQUIRE(K);
  CHECK(K->indices == std::vector<Index>{0});
  StepInfo info = anchor_gradient(a, *K, p);
  REQUIRE(info.gradient.norm() > K->alpha);
  UnitDirection next = step_anchor(a, info, p);
  CHECK(energy(next, p) < energy(a, p));
  CHECK(next.vec().dot(a.vec()) > 0.0);
}

TEST_CASE("step_anchor near the termination boundary moves barely") {
  // companion (1,1) gives ||G|| = 1; anchor norm just below makes the
  // inequality fail by 1e-9
  const double t = 1.0 / (1.0 + 1e-9);
  PointSet pts = PointSet::from_vectors({vec2(t, 0), vec2(1, 1)});
  DirectionProblem p(pts);
  UnitDirection a(vec2(1, 0));
  auto K = detect_anchor(a, p);
  REQUIRE(K);
  StepInfo info = anchor_gradient(a, *K, p);
  REQUIRE(info.gradient.norm() > K->alpha);
  UnitDirection next = step_anchor(a, info, p);
  CHECK((next.vec() - a.vec()).norm() <= 1e-8);
  CHECK(energy(next, p) <= energy(a, p) + 1e-12);
}

TEST_CASE("step_anchor refuses terminated anchors") {
  PointSet pts = PointSet::from_vectors({vec2(10, 0), vec2(1, 1), vec2(1, -1)});
  DirectionProblem p(pts);
  UnitDirection a(vec2(1, 0));
  auto K = detect_anchor(a, p);
  REQUIRE(K);
  StepInfo info = anchor_gradient(a, *K, p);
  CHECK_THROWS_AS(step_anchor(a, info, p), Error);
}

TEST_CASE("step_anchor never flips the hemisphere") {
  Rng rng(17, "anchor_hemisphere");
  int exercised = 0;
  for (int t = 0; t < 50; ++t) {
    PointSet pts = rsub::testing::random_instance(500 + t, 3, 20, 2, 5);
    DirectionProblem p(pts);
    Index j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(pts.size())));
    UnitDirection a = sphere_project(p.points().point(j % p.size()));
    auto K = detect_anchor(a, p);
    if (!K) continue;
    StepInfo info = anchor_gradient(a, *K, p);
    if (!info.step_scale_defined || info.gradient.norm() <= K->alpha) continue;
    UnitDirection next = step_anchor(a, info, p);
    CHECK(next.vec().dot(a.vec()) > 0.0);
    ++exercised;
  }
  CHECK(exercised > 0);
}

TEST_CASE("fit_direction recovers the line under outliers") {
  PointSet pts = gen_line_outliers(50, 2, 0.01, 7);
  DirectionProblem p(pts.centered(pts.mean()));
  auto [dir, trace] = fit_direction(p, top_scatter_eigenvector(p.points()));
  Vector truth = vec2(1, 1);
  double robust_angle = angle_between_lines(dir.vec(), truth);
  CHECK(robust_angle < 3.0 * M_PI / 180.0);

  UnitDirection pca = top_scatter_eigenvector(p.points());
  CHECK(robust_angle < angle_between_lines(pca.vec(), truth));
}

TEST_CASE("fit_direction on exact-line data stops at once") {
  Vector u = sphere_project(vec2(2, -1)).vec();
  PointSet pts = PointSet::from_vectors({0.5 * u, -1.5 * u, 3.0 * u});
  DirectionProblem p(pts);
  auto [dir, trace] = fit_direction(p, diag2());
  CHECK(angle_between_lines(dir.vec(), u) <= 1e-9);
  CHECK(trace.final_energy() <= 1e-12);
  CHECK(trace.iterations() <= 2);
  CHECK(trace.status == TerminalStatus::anchor_local_min);
}

TEST_CASE("fit_direction matches the 2D grid oracle on structured instances") {
  for (int t = 0; t < 10; ++t) {
    PointSet pts = rsub::testing::structured_2d_instance(7000 + static_cast<std::uint64_t>(t));
    FitConfig config;
    config.restarts = 8;
    config.seed = 5;
    SubspaceModel model = fit_subspace(pts, 1, OffsetPolicy::none(), config);
    auto oracle = oracle_direction_2d(pts, GridSpec{10000, 2, 100});
    CHECK(model.energies[0] <= oracle.energy + 1e-8);
  }
}

TEST_CASE("fit_direction terminates immediately at a dominant anchor") {
  PointSet pts = PointSet::from_vectors({vec2(10, 0), vec2(1, 1), vec2(1, -1)});
  DirectionProblem p(pts);
  auto [dir, trace] = fit_direction(p, UnitDirection(vec2(1, 0)));
  CHECK(trace.status == TerminalStatus::anchor_local_min);
  CHECK(trace.records.size() == 1);
  CHECK(trace.records[0].step_norm == 0.0);
  CHECK((dir.vec() - vec2(1, 0)).norm() == 0.0);
}

TEST_CASE("fit_direction rejects empty data and strips zero rows") {
  PointSet with_zero = PointSet::from_vectors({vec2(0, 0), vec2(1, 2)});
  DirectionProblem p(with_zero);
  CHECK(p.size() == 1);
  CHECK(p.stripped_indices() == std::vector<Index>{0});

  PointSet zeros = PointSet::from_vectors({vec2(0, 0), vec2(0, 0)});
  CHECK_THROWS_AS(DirectionProblem{zeros}, Error);
}

TEST_CASE("strict descent along fit traces") {
  // Lemma-style property: energies never increase, and strictly decrease
  // for any step the floating-point energies can resolve
  for (int t = 0; t < 100; ++t) {
    PointSet pts = rsub::testing::random_instance(t, 3, 60, 2, 8);
    DirectionProblem p(pts, 1e-10, 10000);
    auto fit = fit_direction(p, top_scatter_eigenvector(p.points()));
    double prev = fit.trace.initial_energy;
    for (const auto& rec : fit.trace.records) {
      CHECK(rec.energy <= prev + 1e-12);
      if (rec.step_norm > 1e-13) CHECK(rec.energy < prev + 1e-12);
      prev = rec.energy;
    }
  }
}

TEST_CASE("a returned step equal to its input certifies a critical point") {
  for (int t = 0; t < 40; ++t) {
    PointSet pts = rsub::testing::random_instance(9000 + t, 3, 40, 2, 6);
    DirectionProblem p(pts);
    auto fit = fit_direction(p, top_scatter_eigenvector(p.points()));
    if (fit.trace.status == TerminalStatus::anchor_local_min) {
      auto K = detect_anchor(fit.direction, p);
      REQUIRE(K);
      CHECK(anchor_local_min_test(fit.direction, *K, p));
    } else if (fit.trace.status == TerminalStatus::converged) {
      auto K = detect_anchor(fit.direction, p);
      if (!K) {
        StepInfo info = nonanchor_gradient(fit.direction, p);
        CHECK(info.gradient.norm() <= 1e-8 * info.step_scale +
                                          100.0 * p.tolerance() * info.step_scale);
      }
    }
  }
}

TEST_CASE("vanishing steps at convergence") {
  for (int t = 0; t < 30; ++t) {
    PointSet pts = rsub::testing::random_instance(11000 + t, 3, 50, 2, 6);
    DirectionProblem p(pts);
    auto fit = fit_direction(p, top_scatter_eigenvector(p.points()));
    if (fit.trace.status == TerminalStatus::converged) {
      CHECK(fit.trace.final_step_norm() < p.tolerance());
    }
  }
}

TEST_CASE("fit_direction canonicalizes the sign of its result") {
  for (int t = 0; t < 20; ++t) {
    PointSet pts = rsub::testing::random_instance(13000 + t, 3, 40, 2, 5);
    DirectionProblem p(pts);
    UnitDirection a0 = top_scatter_eigenvector(p.points());
    auto plus = fit_direction(p, a0);
    auto minus = fit_direction(p, a0.negated());
    CHECK((plus.direction.vec() - minus.direction.vec()).norm() <= 1e-9);
  }
}

TEST_CASE("fitted directions live in the span of the data") {
  for (int t = 0; t < 10; ++t) {
    // rank-2 data embedded in R^5
    Rng rng(static_cast<std::uint64_t>(t), "span_embed");
    Matrix factors(5, 2);
    factors.col(0) = rng.gaussian_vector(5);
    factors.col(1) = rng.gaussian_vector(5);
    Matrix cols(5, 30);
    for (Index j = 0; j < 30; ++j) cols.col(j) = factors * rng.gaussian_vector(2);
    PointSet pts = PointSet::from_columns(cols);
    DirectionProblem p(pts);
    auto fit = fit_direction(p, top_scatter_eigenvector(p.points()));
    CHECK(span_residual(fit.direction.vec(), pts) < 1e-10);
  }
}

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(23, "grad_draw");
  for (int t = 0; t < 25; ++t) {
    PointSet pts = rsub::testing::random_instance(15000 + t, 3, 50, 2, 10);
    DirectionProblem p(pts);
    UnitDirection a = sphere_project(rng.gaussian_vector(pts.dim()));
    bool near_anchor = false;
    for (Index i = 0; i < p.size(); ++i) {
      auto y = p.points().point(i);
      if ((y - a.vec() * a.vec().dot(y)).norm() <= 100.0 * p.anchor_eps() * y.norm()) {
        near_anchor = true;
      }
    }
    if (near_anchor) continue;
    CHECK(fd_gradient_check(a, p, 1e-6, 10, 42) < 1e-5);
  }
}

TEST_CASE("scaling the data scales energies and preserves the minimizer") {
  for (int t = 0; t < 10; ++t) {
    PointSet pts = rsub::testing::random_instance(17000 + t, 3, 30, 2, 5);
    const double c = 3.5;
    PointSet scaled = PointSet::from_columns(c * pts.columns());
    DirectionProblem p(pts), ps(scaled);
    UnitDirection a0 = top_scatter_eigenvector(p.points());
    CHECK(energy(a0, ps) == doctest::Approx(c * energy(a0, p)).epsilon(1e-12));
    auto base = fit_direction(p, a0);
    auto big = fit_direction(ps, a0);
    CHECK((base.direction.vec() - big.direction.vec()).norm() <= 1e-8);
  }
}

TEST_CASE("contraction ratio approaches ||G||/alpha at an attracting anchor") {
  // anchor y_1 = (2,0); companions give G = (0,1), so the limit is 1/2
  PointSet pts = PointSet::from_vectors(
      {vec2(2, 0), vec2(1, 1), vec2(1, 0.5), vec2(1, -1)});
  DirectionProblem p(pts);
  UnitDirection anchor(vec2(1, 0));
  auto K = detect_anchor(anchor, p);
  REQUIRE(K);
  StepInfo info = anchor_gradient(anchor, *K, p);
  double rho_star = info.gradient.norm() / K->alpha;
  CHECK(rho_star == doctest::Approx(0.5).epsilon(1e-12));

  double last = 0.0;
  for (double delta : {1e-3, 1e-4, 1e-5}) {
    std::vector<UnitDirection> probes{sphere_project(vec2(1.0, delta))};
    last = contraction_ratio(probes, anchor, *K, p);
  }
  CHECK(std::abs(last - rho_star) <= 1e-2);
}

TEST_CASE("contraction ratio collapses to zero for a single point") {
  PointSet pts = PointSet::from_vectors({vec2(3, 0)});
  DirectionProblem p(pts);
  UnitDirection anchor(vec2(1, 0));
  auto K = detect_anchor(anchor, p);
  REQUIRE(K);
  std::vector<UnitDirection> probes{sphere_project(vec2(1.0, 1e-4))};
  CHECK(contraction_ratio(probes, anchor, *K, p) <= 1e-12);
}

TEST_CASE("repelling anchors show ratios above one") {
  // tiny anchored mass, strong off-axis pull
  PointSet pts = PointSet::from_vectors({vec2(0.1, 0), vec2(1, 1)});
  DirectionProblem p(pts);
  UnitDirection anchor(vec2(1, 0));
  auto K = detect_anchor(anchor, p);
  REQUIRE(K);
  StepInfo info = anchor_gradient(anchor, *K, p);
  REQUIRE(info.gradient.norm() / K->alpha > 1.0);
  std::vector<UnitDirection> probes{sphere_project(vec2(1.0, 1e-4))};
  CHECK(contraction_ratio(probes, anchor, *K, p) > 1.0);
}

TEST_CASE("contraction_ratio rejects probes equal to the anchor") {
  PointSet pts = PointSet::from_vectors({vec2(2, 0), vec2(1, 1)});
  DirectionProblem p(pts);
  UnitDirection anchor(vec2(1, 0));
  auto K = detect_anchor(anchor, p);
  REQUIRE(K);
  std::vector<UnitDirection> probes{anchor};
  CHECK_THROWS_AS(contraction_ratio(probes, anchor, *K, p), Error);
}
