#include "riesz/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "riesz/error.hpp"

namespace riesz {

namespace {

constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

// Validation failures of a parsed set are input errors.
template <class F>
auto as_io(F&& make) {
  try {
    return make();
  } catch (const Error& e) {
    if (e.code() == Errc::io) throw;
    throw Error(Errc::io, std::string("invalid set: ") + e.what());
  }
}

json kernel_json(const Kernel& k) { return {{"n", k.n()}, {"lambda", k.lambda()}}; }

json grid_json(const Grid& g) {
  return {{"n", g.n()}, {"shape", g.shape()}, {"spacing", g.spacing()}, {"origin", g.origin()}};
}

// NaN and infinities become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(Errc::io, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::io, std::string("bad field \"") + key + "\": " + e.what());
  }
}

}  // namespace

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    const std::uint32_t b0 = bytes[i];
    const std::uint32_t b1 = i + 1 < bytes.size() ? bytes[i + 1] : 0;
    const std::uint32_t b2 = i + 2 < bytes.size() ? bytes[i + 2] : 0;
    const std::uint32_t w = (b0 << 16) | (b1 << 8) | b2;
    out += kAlphabet[(w >> 18) & 63];
    out += kAlphabet[(w >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(w >> 6) & 63] : '=';
    out += i + 2 < bytes.size() ? kAlphabet[w & 63] : '=';
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  if (text.size() % 4 != 0) throw Error(Errc::io, "base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        v[k] = 0;
        ++pad;
        continue;
      }
      if (pad > 0 || (v[k] = value(c)) < 0) throw Error(Errc::io, "invalid base64 character");
    }
    const std::uint32_t w = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    out.push_back(static_cast<std::uint8_t>(w >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(w >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(w));
  }
  return out;
}

json to_json(const RadialSet& set) {
  json shells = json::array();
  for (const Shell& s : set.shells()) shells.push_back({s.inner, s.outer});
  return {{"n", set.n()}, {"shells", shells}};
}

RadialSet radial_from_json(const json& j) {
  const int n = field<int>(j, "n");
  std::vector<Shell> shells;
  for (const auto& s : field<std::vector<std::vector<double>>>(j, "shells")) {
    if (s.size() != 2) throw Error(Errc::io, "a shell is a pair [inner, outer]");
    shells.push_back({s[0], s[1]});
  }
  return as_io([&] { return RadialSet(n, std::move(shells)); });
}

json to_json(const VoxelSet& set) {
  const auto& occ = set.occupancy();
  std::vector<std::uint8_t> bits((occ.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (occ[i]) bits[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  json j = grid_json(set.grid());
  j["occupancy"] = base64_encode(bits);
  return j;
}

VoxelSet voxel_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::io, "a set must be a JSON object");
  const int n = field<int>(j, "n");
  const auto shape = field<std::vector<int>>(j, "shape");
  const double h = field<double>(j, "spacing");
  const auto origin = field<std::vector<double>>(j, "origin");
  if (shape.size() != static_cast<std::size_t>(n) || origin.size() != static_cast<std::size_t>(n)) {
    throw Error(Errc::io, "shape and origin must have n entries");
  }
  const Grid g = as_io([&] { return Grid(shape, h, origin); });
  VoxelSet set(g);
  if (j.contains("occupancy")) {
    const auto bits = base64_decode(field<std::string>(j, "occupancy"));
    if (bits.size() != (g.size() + 7) / 8) throw Error(Errc::io, "occupancy size does not match the shape");
    for (std::size_t i = 0; i < g.size(); ++i) set.set(i, (bits[i / 8] >> (i % 8)) & 1u);
  } else if (j.contains("cells")) {
    for (const auto& c : field<std::vector<std::vector<int>>>(j, "cells")) {
      if (c.size() != static_cast<std::size_t>(n)) throw Error(Errc::io, "cell index has the wrong dimension");
      Index idx{};
      for (int k = 0; k < n; ++k) {
        if (c[k] < 0 || c[k] >= shape[k]) throw Error(Errc::io, "cell index outside the grid");
        idx[k] = c[k];
      }
      set.set(g.flat(idx), true);
    }
  } else {
    throw Error(Errc::io, "a voxel set needs \"occupancy\" or \"cells\"");
  }
  return set;
}

json to_json(const PotentialField& field) {
  json j = grid_json(field.grid);
  j["kernel"] = kernel_json(field.kernel);
  j["values"] = field.values;
  return j;
}

json to_json(const StabilityReport& r) {
  json values = json::object();
  for (const auto& [k, v] : r.values) values[k] = number(v);
  return {{"check", r.check},
          {"kernel", kernel_json(r.kernel)},
          {"set", r.set},
          {"lhs", number(r.lhs)},
          {"rhs", number(r.rhs)},
          {"margin", number(r.margin)},
          {"tolerance", number(r.tolerance)},
          {"resolution", {{"shape", r.shape}, {"spacing", r.spacing}}},
          {"pass", r.pass},
          {"status", to_string(r.status)},
          {"values", values},
          {"note", r.note}};
}

json to_json(const std::vector<StabilityReport>& reports) {
  json a = json::array();
  for (const auto& r : reports) a.push_back(to_json(r));
  return a;
}

json to_json(const FamilySweep& s) {
  double min_ratio = INFINITY;
  for (const auto& p : s.points) {
    if (std::isfinite(p.ratio_quadratic)) min_ratio = std::min(min_ratio, p.ratio_quadratic);
  }
  return {{"family", s.family},         {"kernel", kernel_json(s.kernel)}, {"points", s.points.size()},
          {"fitted", s.fitted},         {"slope", number(s.slope)},       {"intercept", number(s.intercept)},
          {"min_ratio_quadratic", number(min_ratio)}};
}

void write_sweep_csv(std::ostream& out, const FamilySweep& s) {
  auto cell = [](double v) {
    if (!std::isfinite(v)) return std::string("nan");
    std::ostringstream o;
    o.precision(17);
    o << v;
    return o.str();
  };
  out << "param,alpha,delta,ratio_quadratic,ratio_theorem_main,middle_yg\n";
  for (const auto& p : s.points) {
    out << cell(p.param) << ',' << cell(p.alpha) << ',' << cell(p.delta) << ',' << cell(p.ratio_quadratic) << ','
        << cell(p.ratio_theorem_main) << ',' << cell(p.middle_yg) << '\n';
  }
}

AnySet set_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::io, "a set must be a JSON object");
  if (j.contains("shells")) return radial_from_json(j);
  return voxel_from_json(j);
}

AnySet read_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::io, path + ": " + e.what());
  }
  return set_from_json(j);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot write " + path);
  out << j.dump(1) << '\n';
  if (!out) throw Error(Errc::io, "write failed for " + path);
}

}  // namespace riesz
