#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "riesz/corpus.hpp"
#include "riesz/error.hpp"
#include "riesz/radial.hpp"
#include "riesz/stability.hpp"

using namespace riesz;
using std::numbers::pi;

namespace {

const Kernel kCoulomb(3, 1.0);

VoxelSet ball(int cells, double side = 3.0, double R = 1.0) {
  return binarize(rasterize_ball({R, {0.0, 0.0, 0.0}}, Grid::centered(3, cells, side), 4));
}

bool origin_symmetric(const VoxelSet& set) {
  const Grid& g = set.grid();
  bool ok = true;
  for_each_cell(g, [&](std::size_t i, const Index& idx) {
    Index m = idx;
    for (int k = 0; k < g.n(); ++k) m[k] = g.extent(k) - 1 - idx[k];
    if (set[i] != set[g.flat(m)]) ok = false;
  });
  return ok;
}

}  // namespace

TEST_CASE("constants") {
  // 2^{3/2} / 3^{7/2}
  CHECK(theorem_main_constant(3) == doctest::Approx(std::pow(2.0, 1.5) / std::pow(3.0, 3.5)).epsilon(1e-14));
  CHECK(theorem_main_constant(3) == doctest::Approx(0.06047).epsilon(1e-3));
  CHECK(theorem_main_constant(4) == doctest::Approx(2.0 * 4.0 / std::pow(4.0, 4.0)).epsilon(1e-14));
  for (double a : {0.0, 0.1, 0.5, 1.0}) {
    CHECK(lemma_max_factor(kCoulomb, a) == doctest::Approx(1.0 - 2.0 / 9.0 * a * a).epsilon(1e-14));
  }
}

TEST_CASE("report convention") {
  StabilityReport r;
  r.lhs = 1.0;
  r.rhs = 1.05;
  r.tolerance = 0.1;
  finalize(r);
  CHECK(r.margin == doctest::Approx(-0.05));
  CHECK(r.pass);
  CHECK(r.status == Status::pass);
  r.tolerance = 0.01;
  finalize(r);
  CHECK_FALSE(r.pass);
  CHECK(r.status == Status::fail);
  finalize(r, true);
  CHECK(r.status == Status::inconclusive);
}

TEST_CASE("ball") {
  const VoxelSet b = ball(64);
  const Measures m = measure(b, kCoulomb);
  CHECK(std::abs(m.deficit.raw) < 0.02);
  CHECK(m.deficit.value >= 0);

  const auto sharp = check_theorem_sharp3(b, m);
  CHECK(sharp.status == Status::inconclusive);
  const auto main = check_theorem_main(b, kCoulomb, m);
  CHECK(main.pass);
  CHECK(std::abs(main.margin) < 0.02);

  const auto lmax = check_lemma_max(b, kCoulomb, m);
  CHECK(lmax.pass);
  CHECK(std::abs(lmax.lhs - lmax.rhs) < 0.02 * lmax.lhs);

  const auto yg = check_alpha_yg(b, kCoulomb, m);
  CHECK(yg.status == Status::inconclusive);
  CHECK(yg.lhs >= 0);

  CHECK(check_talenti(b, kCoulomb).pass);
  CHECK(check_talenti_integrated(b, kCoulomb).pass);
  CHECK(check_poisson(b, kCoulomb).pass);
  const auto dom = check_domination(b, b, kCoulomb);
  CHECK(dom.pass);
  CHECK(std::abs(dom.margin) < dom.tolerance);
}

TEST_CASE("tolerances cover the ball at every resolution") {
  for (int cells : {32, 48, 64}) {
    CAPTURE(cells);
    const VoxelSet b = ball(cells);
    const Measures m = measure(b, kCoulomb);
    CHECK(check_theorem_main(b, kCoulomb, m).pass);
    CHECK(check_lemma_max(b, kCoulomb, m).pass);
    CHECK(check_talenti(b, kCoulomb).pass);
    CHECK(check_lemma_key3(b, kCoulomb).pass);
  }
}

TEST_CASE("deficit of the voxelized annulus matches the radial value") {
  const RadialSet ann = annulus_perturbation(0.1);
  const VoxelSet v = voxelize(ann, Grid::centered(3, 64, 3.0));
  const double expected = deficit_radial(ann, kCoulomb);
  CHECK(std::abs(deficit(v, kCoulomb).raw - expected) < 0.005);
}

TEST_CASE("lemma max is strict on a perturbed set") {
  const VoxelSet v = voxelize(annulus_perturbation(0.3), Grid::centered(3, 48, 3.0));
  const auto r = check_lemma_max(v, kCoulomb);
  CHECK(r.pass);
  CHECK(r.margin > 0);
}

TEST_CASE("main bound on the annulus") {
  const VoxelSet v = voxelize(annulus_perturbation(0.2), Grid::centered(3, 48, 3.0));
  const auto r = check_theorem_main(v, kCoulomb);
  CHECK(r.pass);
  CHECK(r.rhs < 1e-4);
  CHECK(r.margin > 10 * r.rhs);
  CHECK_THROWS_AS(check_theorem_main(v, Kernel(3, 1.5)), Error);
  CHECK(check_theorem_main_radial(annulus_perturbation(0.2, 4), Kernel(4, 2.0)).pass);
}

TEST_CASE("key3") {
  SUBCASE("A = B_r") {
    const VoxelSet b = ball(48);
    const auto r = check_lemma_key3(b, kCoulomb);
    CHECK(r.pass);
    CHECK(std::abs(r.margin) < 0.03 * r.lhs);
  }
  SUBCASE("thinned ball is strict") {
    VoxelSet b = ball(48);
    const Grid& g = b.grid();
    std::vector<std::uint8_t> occ(b.occupancy().begin(), b.occupancy().end());
    for_each_cell(g, [&](std::size_t i, const Index& idx) {
      if ((idx[0] + idx[1]) % 2) occ[i] = 0;
    });
    const VoxelSet thin(g, std::move(occ));
    REQUIRE(origin_symmetric(thin));
    const auto r = check_lemma_key3(thin, kCoulomb);
    CHECK(r.pass);
    CHECK(r.margin > r.tolerance);
  }
  SUBCASE("nonsymmetric input is refused") {
    const VoxelSet b = binarize(rasterize_ball({0.8, {0.3, 0.0, 0.0}}, Grid::centered(3, 32, 3.0), 4));
    try {
      check_lemma_key3(b, kCoulomb);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::precondition);
      CHECK(std::string(e.what()).find("symmetry precondition") != std::string::npos);
    }
  }
  SUBCASE("boundary expansion") {
    const VoxelSet b = ball(48);
    const auto x = key3_expansion(b, kCoulomb, {0.02, 0.05});
    const double omega = 4.0 * pi / 3.0;
    // n = 3, lambda = 1: omega (-2 + 3 / sqrt 2) at R_A = 1
    CHECK(x.predicted / std::pow(b.volume_radius(), 2) == doctest::Approx(omega * (-2 + 3 / std::sqrt(2.0))));
    CHECK(std::abs(x.slope - x.predicted) < 0.25 * std::abs(x.predicted));
    for (std::size_t i = 0; i < x.eps.size(); ++i) {
      CHECK(x.bound_gap[i] > 0);
      CHECK(x.measured_gap[i] >= x.bound_gap[i]);
    }
  }
}

TEST_CASE("reflection positivity on seeded blobs") {
  const Grid g = Grid::centered(3, 24, 4.0);
  SuiteOptions opt;
  int failures = 0;
  int delta_failures = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const VoxelSet b = make_blob(g, seed, 10, 0.2, 0.4);
    const auto r = check_reflection_positivity(b, static_cast<int>(seed % 3), kCoulomb, opt);
    if (!r.pass) ++failures;
    if (r.values.at("delta_sum_ok") != 1.0) ++delta_failures;
  }
  CHECK(failures == 0);
  CHECK(delta_failures == 0);
}

TEST_CASE("reflection positivity is an equality on symmetric sets") {
  const VoxelSet e = make_ellipsoid(Grid::centered(3, 32, 4.0), {1.5, 1.0, 0.7});
  for (int axis = 0; axis < 3; ++axis) {
    const auto r = check_reflection_positivity(e, axis, kCoulomb);
    CHECK(r.pass);
    CHECK(std::abs(r.margin) < 1e-9 * r.rhs);
  }
  CHECK_THROWS_AS(check_reflection_positivity(e, 0, Kernel(3, 0.5)), Error);
}

TEST_CASE("full symmetrization deficit") {
  const VoxelSet b = make_blob(Grid::centered(3, 32, 4.0), 5);
  const auto r = check_fmp_deficit(b, kCoulomb);
  CHECK(r.pass);
}

TEST_CASE("talenti") {
  const VoxelSet two = make_two_balls(Grid::centered(3, 48, 4.0), 0.6, 2.0);
  const auto r = check_talenti(two, kCoulomb);
  CHECK(r.pass);
  CHECK(r.values.at("interior_min_margin") > 0);
  const auto ri = check_talenti_integrated(two, kCoulomb);
  CHECK(ri.pass);
  CHECK(ri.margin > 0);
  CHECK_THROWS_AS(check_talenti(two, Kernel(3, 1.5)), Error);
}

TEST_CASE("domination across sets") {
  const Grid g = Grid::centered(3, 40, 4.0);
  const VoxelSet a = make_two_balls(g, 0.6, 2.0);
  const VoxelSet e = make_box(g, {1.0, 1.0, 1.0});
  CHECK(check_domination(a, e, kCoulomb).pass);
  CHECK(check_domination(e, a, kCoulomb).pass);
  CHECK_THROWS_AS(check_domination(a, make_box(Grid::centered(3, 32, 4.0), {1.0, 1.0, 1.0}), kCoulomb), Error);
}

TEST_CASE("alpha-YG middle term") {
  std::vector<double> lower, upper;
  for (double a : {0.1, 0.2, 0.3}) {
    const VoxelSet v = voxelize(annulus_perturbation(a), Grid::centered(3, 40, 3.0));
    const auto r = check_alpha_yg(v, kCoulomb);
    CHECK(r.status == Status::pass);
    CHECK(r.lhs >= 0);
    CHECK(std::isfinite(r.values.at("ratio_lower")));
    CHECK(std::isfinite(r.values.at("ratio_upper")));
    lower.push_back(r.values.at("ratio_lower"));
    upper.push_back(r.values.at("ratio_upper"));
  }
  for (double v : lower) CHECK(v > 0);
}

TEST_CASE("truncation") {
  SUBCASE("set inside the ball is unchanged") {
    const VoxelSet b = ball(32);
    const auto r = check_truncation(b, kCoulomb, 0.5);
    CHECK(r.pass);
    CHECK(r.margin == 0.0);
    CHECK(r.values.at("removed") == 0);
  }
  SUBCASE("ball with a far satellite") {
    // unit ball plus a 2% volume ball at distance 5
    const Grid g({72, 24, 24}, 0.1, {-1.55, -1.15, -1.15});
    const VoxelSet main = make_ball(g, 1.0);
    const VoxelSet sat = make_ball(g, std::cbrt(0.02), {5.0, 0.0, 0.0});
    const VoxelSet a = set_union(main, sat);
    const auto r = check_truncation(a, kCoulomb, 0.5);
    CHECK(r.pass);
    CHECK(r.lhs >= r.rhs);
    CHECK(r.values.at("removed") > 0);
  }
  SUBCASE("precondition") {
    const VoxelSet two = make_two_balls(Grid::centered(3, 32, 4.0), 0.6, 2.6);
    CHECK_THROWS_AS(check_truncation(two, kCoulomb, 0.5), Error);
  }
}

TEST_CASE("poisson") {
  const auto r = check_poisson(ball(48), kCoulomb);
  CHECK(r.pass);
  CHECK(r.values.at("target") == doctest::Approx(4 * pi));
  CHECK(r.values.at("interior_cells") > 0);
}

TEST_CASE("fit exponent") {
  std::vector<double> a;
  for (int i = 0; i < 10; ++i) a.push_back(0.02 + 0.02 * i);
  const auto s = sweep_annulus(a, kCoulomb);
  CHECK(s.fitted == 10);
  CHECK(s.slope == doctest::Approx(2.0).epsilon(0.025));
  // δ/α^{n+2} grows without bound as a -> 0
  CHECK(s.points.front().ratio_theorem_main > 100 * s.points.back().ratio_theorem_main);
  for (std::size_t i = 1; i < s.points.size(); ++i) CHECK(s.points[i].delta > s.points[i - 1].delta);

  CHECK_THROWS_AS(fit_exponent("one", kCoulomb, {s.points.front()}), Error);
  CHECK_THROWS_AS(fit_exponent("floor", kCoulomb, s.points, 1.0), Error);
}

TEST_CASE("lambda scan") {
  const auto s = sweep_lambda({0.9, 1.0, 1.1}, 0.1);
  REQUIRE(s.points.size() == 3);
  for (const auto& p : s.points) CHECK(p.ratio_quadratic > 0);
  CHECK(std::isnan(s.slope));
}

TEST_CASE("scale invariance") {
  // the same cells on a grid with twice the spacing
  const VoxelSet small = make_ellipsoid(Grid::centered(3, 32, 4.0), {1.4, 1.0, 0.7});
  const VoxelSet large = make_ellipsoid(Grid::centered(3, 32, 8.0), {2.8, 2.0, 1.4});
  REQUIRE(small.count() == large.count());
  const Measures ms = measure(small, kCoulomb);
  const Measures ml = measure(large, kCoulomb);
  CHECK(ml.fraenkel.alpha == doctest::Approx(ms.fraenkel.alpha).epsilon(1e-6));
  CHECK(ml.deficit.raw == doctest::Approx(ms.deficit.raw).epsilon(1e-8));
}

TEST_CASE("deficit is nonnegative up to grid error on the corpus") {
  for (const auto& e : standard_corpus(24)) {
    CAPTURE(e.name);
    CHECK(deficit(e.set, kCoulomb).raw >= -0.02);
  }
}
