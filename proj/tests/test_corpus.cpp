#include <algorithm>
#include <set>
#include <string>

#include "doctest.h"
#include "riesz/corpus.hpp"
#include "riesz/error.hpp"

using namespace riesz;

TEST_CASE("standard corpus") {
  const auto a = standard_corpus(24);
  const auto b = standard_corpus(24);
  REQUIRE(a.size() == 36);
  REQUIRE(b.size() == a.size());
  std::set<std::string> names;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CAPTURE(a[i].name);
    names.insert(a[i].name);
    CHECK(a[i].name == b[i].name);
    CHECK(a[i].set == b[i].set);
    CHECK_FALSE(a[i].set.empty());
    CHECK(a[i].set.n() == 3);
    CHECK(a[i].set.grid() == Grid::centered(3, 24, 4.0));
  }
  CHECK(names.size() == a.size());
  for (const char* prefix : {"ball", "annulus", "ellipsoid", "two-balls", "box", "blob"}) {
    CHECK(std::count_if(names.begin(), names.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; }) > 0);
  }
}

TEST_CASE("generators") {
  const Grid g = Grid::centered(3, 32, 4.0);
  SUBCASE("box is exact on an aligned grid") {
    const VoxelSet b = make_box(g, {2.0, 1.0, 1.5});
    CHECK(b.volume() == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("ball volume") {
    const VoxelSet b = make_ball(g, 1.0);
    CHECK(b.volume() == doctest::Approx(4.0 * 3.14159265358979 / 3).epsilon(0.03));
  }
  SUBCASE("two balls are mirror images") {
    const VoxelSet t = make_two_balls(g, 0.6, 2.0);
    CHECK(reflect(t, 0) == t);
    CHECK(t.volume() == doctest::Approx(2 * make_ball(g, 0.6, {1.0, 0.0, 0.0}).volume()).epsilon(1e-12));
  }
  SUBCASE("blob is seeded and connected") {
    const VoxelSet a = make_blob(g, 11);
    CHECK(a == make_blob(g, 11));
    CHECK_FALSE(a == make_blob(g, 12));
    // flood fill from one occupied cell reaches every occupied cell
    std::vector<std::size_t> stack;
    std::vector<std::uint8_t> seen(g.size(), 0);
    for (std::size_t i = 0; i < g.size() && stack.empty(); ++i) {
      if (a[i]) {
        stack.push_back(i);
        seen[i] = 1;
      }
    }
    std::size_t reached = 0;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      ++reached;
      const Index idx = g.unflat(i);
      for (int k = 0; k < 3; ++k) {
        for (int d : {-1, 1}) {
          Index m = idx;
          m[k] += d;
          if (m[k] < 0 || m[k] >= g.extent(k)) continue;
          const std::size_t j = g.flat(m);
          if (a[j] && !seen[j]) {
            seen[j] = 1;
            stack.push_back(j);
          }
        }
      }
    }
    CHECK(reached == a.count());
  }
}
