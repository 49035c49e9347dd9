#include <cmath>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "riesz/corpus.hpp"
#include "riesz/error.hpp"
#include "riesz/io.hpp"

using namespace riesz;

namespace {

Errc code_of(const json& j) {
  try {
    set_from_json(j);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("base64") {
  // RFC 4648 test vectors
  const std::vector<std::pair<std::string, std::string>> vectors{
      {"", ""}, {"f", "Zg=="}, {"fo", "Zm8="}, {"foo", "Zm9v"}, {"foob", "Zm9vYg=="}, {"fooba", "Zm9vYmE="},
      {"foobar", "Zm9vYmFy"}};
  for (const auto& [plain, coded] : vectors) {
    const std::vector<std::uint8_t> bytes(plain.begin(), plain.end());
    CHECK(base64_encode(bytes) == coded);
    CHECK(base64_decode(coded) == bytes);
  }
  std::vector<std::uint8_t> all(256);
  for (int i = 0; i < 256; ++i) all[i] = static_cast<std::uint8_t>(i);
  CHECK(base64_decode(base64_encode(all)) == all);
  CHECK_THROWS_AS(base64_decode("Zm9v!"), Error);
  CHECK_THROWS_AS(base64_decode("Zm9"), Error);
}

TEST_CASE("voxel roundtrip") {
  const VoxelSet b = make_blob(Grid::centered(3, 17, 4.0), 3);
  const json j = to_json(b);
  CHECK(j.at("n") == 3);
  CHECK(j.at("shape") == std::vector<int>{17, 17, 17});
  const VoxelSet back = voxel_from_json(json::parse(j.dump()));
  CHECK(back == b);
  const auto any = set_from_json(j);
  REQUIRE(std::holds_alternative<VoxelSet>(any));
  CHECK(std::get<VoxelSet>(any) == b);
}

TEST_CASE("cells variant") {
  const json j = json::parse(R"({"n": 2, "shape": [3, 2], "spacing": 0.5, "origin": [0, 0],
                                 "cells": [[0, 0], [2, 1]]})");
  const VoxelSet v = voxel_from_json(j);
  CHECK(v.count() == 2);
  CHECK(v[0]);
  CHECK(v[5]);
  CHECK(v.volume() == doctest::Approx(0.5));
  // the packed form: bits 0 and 5 of one byte
  CHECK(to_json(v).at("occupancy") == base64_encode({0x21}));
}

TEST_CASE("radial roundtrip") {
  const RadialSet a = annulus_perturbation(0.1);
  const json j = to_json(a);
  const RadialSet back = radial_from_json(json::parse(j.dump()));
  CHECK(back.n() == 3);
  REQUIRE(back.shells().size() == a.shells().size());
  for (std::size_t i = 0; i < a.shells().size(); ++i) {
    CHECK(back.shells()[i].inner == a.shells()[i].inner);
    CHECK(back.shells()[i].outer == a.shells()[i].outer);
  }
  CHECK(std::holds_alternative<RadialSet>(set_from_json(j)));
}

TEST_CASE("bad input") {
  CHECK(code_of(json::parse(R"({"n": 3})")) == Errc::io);
  CHECK(code_of(json::parse(R"({"n": 3, "shape": [2, 2, 2], "spacing": 1, "origin": [0, 0, 0]})")) == Errc::io);
  CHECK(code_of(json::parse(R"({"n": 3, "shape": "x", "spacing": 1, "origin": [0, 0, 0], "cells": []})")) ==
        Errc::io);
  CHECK(code_of(json::parse(R"({"n": 1, "shape": [2], "spacing": 1, "origin": [0], "cells": [[5]]})")) ==
        Errc::io);
  CHECK(code_of(json::parse(R"({"n": 3, "shells": [[0.5, 0.2]]})")) == Errc::io);
  CHECK_THROWS_AS(read_set("/nonexistent/set.json"), Error);

  const auto path = std::filesystem::temp_directory_path() / "riesz_test_io_bad.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  try {
    read_set(path.string());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io);
  }
  std::filesystem::remove(path);
}

TEST_CASE("report and sweep output") {
  StabilityReport r;
  r.check = "main";
  r.set = "ball";
  r.lhs = 0.5;
  r.rhs = 0.25;
  r.tolerance = 0.01;
  r.values = {{"alpha", 0.1}, {"ratio", std::nan("")}};
  finalize(r);
  const json j = to_json(std::vector<StabilityReport>{r});
  REQUIRE(j.is_array());
  CHECK(j[0].at("margin") == 0.25);
  CHECK(j[0].at("pass") == true);
  CHECK(j[0].at("status") == "pass");
  CHECK(j[0].at("values").at("alpha") == 0.1);

  FamilySweep s;
  s.family = "annulus";
  s.points = {{0.1, 0.07, 0.004, 0.8, 1e5, std::nan("")}};
  std::ostringstream csv;
  write_sweep_csv(csv, s);
  const std::string text = csv.str();
  CHECK(text.rfind("param,alpha,delta,ratio_quadratic,ratio_theorem_main,middle_yg\n", 0) == 0);
  CHECK(text.find(",nan") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}
