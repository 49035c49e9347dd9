#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riesz/corpus.hpp"
#include "riesz/error.hpp"
#include "riesz/io.hpp"
#include "riesz/stability.hpp"

using namespace riesz;

namespace {

struct RunConfig {
  int n = 3;
  double lambda = 1.0;
  int grid = 64;
  double side = 4.0;
  int subsamples = 4;
  double tol = 1.0;
  std::uint64_t seed = 7;
  std::string out;
  bool json_out = false;
  bool nearfield = false;
};

void validate(const RunConfig& c) {
  if (c.grid < 8) throw Error(Errc::invalid_argument, "--grid must be at least 8");
  if (!(c.lambda > 0 && c.lambda < c.n)) throw Error(Errc::invalid_kernel, "--lambda must lie in (0, n)");
  if (c.subsamples < 1) throw Error(Errc::invalid_argument, "--subsamples must be positive");
  if (!(c.tol > 0)) throw Error(Errc::invalid_argument, "--tol must be positive");
}

SuiteOptions suite_options(const RunConfig& c) {
  SuiteOptions o;
  o.tol.scale = c.tol;
  o.subsamples = c.subsamples;
  o.engine.nearfield = c.nearfield;
  return o;
}

// "lo:hi:count" or a comma separated list.
std::vector<double> parse_range(const std::string& text) {
  if (text.empty()) throw Error(Errc::invalid_argument, "empty range");
  std::vector<double> out;
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<std::string> parts;
      std::stringstream ss(text);
      for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
      if (parts.size() != 3) throw Error(Errc::invalid_argument, "range must be lo:hi:count");
      const double lo = std::stod(parts[0]);
      const double hi = std::stod(parts[1]);
      const int count = std::stoi(parts[2]);
      if (count < 1) throw Error(Errc::invalid_argument, "range count must be positive");
      for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    } else {
      std::stringstream ss(text);
      for (std::string p; std::getline(ss, p, ',');) out.push_back(std::stod(p));
    }
  } catch (const std::logic_error&) {
    throw Error(Errc::invalid_argument, "cannot parse range \"" + text + "\"");
  }
  if (out.empty()) throw Error(Errc::invalid_argument, "empty range");
  return out;
}

std::vector<double> parse_list(const std::string& text, int n, const char* what) {
  auto v = parse_range(text);
  if (v.size() == 1) v.assign(n, v[0]);
  if (v.size() != static_cast<std::size_t>(n)) {
    throw Error(Errc::invalid_argument, std::string(what) + " needs 1 or n values");
  }
  return v;
}

void emit(const RunConfig& c, const json& j) {
  if (!c.out.empty()) write_json(c.out, j);
  if (c.json_out || c.out.empty()) std::cout << j.dump(1) << '\n';
}

VoxelSet as_voxels(const AnySet& s, const RunConfig& c) {
  if (const auto* v = std::get_if<VoxelSet>(&s)) return *v;
  const auto& r = std::get<RadialSet>(s);
  const double side = std::max(c.side, 2.5 * r.outer_radius());
  return voxelize(r, Grid::centered(r.n(), c.grid, side));
}

// ---- gen ----

struct GenArgs {
  std::string shape;
  std::optional<double> R;  ///< 1 for a ball, 0.6 for two balls
  double a = 0.1;
  double separation = 2.0;
  std::string axes = "1.5,1,0.6666666666666666";
  std::string sides = "1.6";
};

int run_gen(const GenArgs& g, const RunConfig& c) {
  validate(c);
  if (g.shape == "annulus") {
    emit(c, to_json(annulus_perturbation(g.a, c.n)));
    return 0;
  }
  const Grid grid = Grid::centered(c.n, c.grid, c.side);
  VoxelSet set(grid);
  if (g.shape == "ball") {
    set = binarize_volume(rasterize_ball({g.R.value_or(1.0), std::vector<double>(c.n, 0.0)}, grid, c.subsamples));
  } else if (g.shape == "ellipsoid") {
    set = make_ellipsoid(grid, parse_list(g.axes, c.n, "--axes"));
  } else if (g.shape == "two-balls") {
    set = make_two_balls(grid, g.R.value_or(0.6), g.separation);
  } else if (g.shape == "box") {
    set = make_box(grid, parse_list(g.sides, c.n, "--sides"));
  } else if (g.shape == "blob") {
    set = make_blob(grid, c.seed);
  } else {
    throw Error(Errc::invalid_argument, "unknown shape \"" + g.shape + "\"");
  }
  require_nonempty(set);
  emit(c, to_json(set));
  return 0;
}

// ---- verify ----

struct VerifyArgs {
  std::string check;
  std::string file;
  std::optional<int> axis;
  std::optional<double> r;
  double c = 0.5;
  std::string with;
};

const std::vector<std::string> kChecks{"sharp3",  "main",       "lemma-max", "key3", "reflection",        "talenti",
                                       "alpha-yg", "truncation", "poisson",   "dom",  "talenti-integrated"};

int run_verify(const VerifyArgs& v, RunConfig c, bool n_given) {
  if (std::find(kChecks.begin(), kChecks.end(), v.check) == kChecks.end()) {
    throw Error(Errc::invalid_argument, "unknown check \"" + v.check + "\"");
  }
  const AnySet any = read_set(v.file);
  const int set_n = std::visit([](const auto& s) { return s.n(); }, any);
  if (n_given && c.n != set_n) throw Error(Errc::invalid_dimension, "--n differs from the set dimension");
  c.n = set_n;
  validate(c);
  const Kernel kernel(c.n, c.lambda);
  const SuiteOptions opt = suite_options(c);
  const std::string name = std::filesystem::path(v.file).stem().string();

  std::vector<StabilityReport> reports;
  if (v.check == "main" && std::holds_alternative<RadialSet>(any) && c.n != 3) {
    reports.push_back(check_theorem_main_radial(std::get<RadialSet>(any), kernel));
  } else {
    const VoxelSet set = as_voxels(any, c);
    require_nonempty(set);
    if (v.check == "sharp3") {
      if (c.n != 3 || c.lambda != 1.0) throw Error(Errc::invalid_kernel, "sharp3 is the n = 3, lambda = 1 check");
      reports.push_back(check_theorem_sharp3(set, opt));
    } else if (v.check == "main") {
      reports.push_back(check_theorem_main(set, kernel, opt));
    } else if (v.check == "lemma-max") {
      reports.push_back(check_lemma_max(set, kernel, opt));
    } else if (v.check == "key3") {
      reports.push_back(check_lemma_key3(set, kernel, v.r, opt));
    } else if (v.check == "reflection") {
      for (int axis = 0; axis < c.n; ++axis) {
        if (!v.axis || *v.axis == axis) reports.push_back(check_reflection_positivity(set, axis, kernel, opt));
      }
      if (reports.empty()) throw Error(Errc::invalid_argument, "--axis out of range");
      reports.push_back(check_fmp_deficit(set, kernel, opt));
    } else if (v.check == "talenti") {
      reports.push_back(check_talenti(set, kernel, opt));
    } else if (v.check == "talenti-integrated") {
      reports.push_back(check_talenti_integrated(set, kernel, opt));
    } else if (v.check == "alpha-yg") {
      reports.push_back(check_alpha_yg(set, kernel, opt));
    } else if (v.check == "truncation") {
      reports.push_back(check_truncation(set, kernel, v.c, opt));
    } else if (v.check == "poisson") {
      reports.push_back(check_poisson(set, kernel, opt));
    } else if (v.check == "dom") {
      const VoxelSet other = v.with.empty() ? set : as_voxels(read_set(v.with), c);
      reports.push_back(check_domination(set, other, kernel, opt));
    }
  }
  for (auto& r : reports) r.set = name;

  const json j = to_json(reports);
  if (!c.out.empty()) write_json(c.out, j);
  if (c.json_out) {
    std::cout << j.dump(1) << '\n';
  } else {
    for (const auto& r : reports) {
      std::cout << r.check << ' ' << r.set << ": " << to_string(r.status) << "  lhs " << r.lhs << "  rhs " << r.rhs
                << "  margin " << r.margin << "  tolerance " << r.tolerance;
      if (!r.note.empty()) std::cout << "  (" << r.note << ')';
      std::cout << '\n';
    }
  }
  const bool failed = std::any_of(reports.begin(), reports.end(), [](const auto& r) { return r.status == Status::fail; });
  return failed ? 1 : 0;
}

// ---- sweep ----

struct SweepArgs {
  std::string family;
  std::optional<std::string> a;
  std::string e = "0.05:0.5:8";
  std::string separation = "1.3:2.6:6";
  std::string lambdas = "0.8:1.2:9";
};

int run_sweep(const SweepArgs& s, const RunConfig& c) {
  validate(c);
  const Kernel kernel(c.n, c.lambda);
  const SuiteOptions opt = suite_options(c);
  FamilySweep sweep;
  if (s.family == "annulus") {
    sweep = sweep_annulus(parse_range(s.a.value_or("0.02:0.2:10")), kernel);
  } else if (s.family == "ellipsoid") {
    sweep = sweep_ellipsoid(parse_range(s.e), kernel, c.grid, opt);
  } else if (s.family == "two-balls") {
    sweep = sweep_two_balls(parse_range(s.separation), kernel, c.grid, opt);
  } else if (s.family == "lambda-scan") {
    const auto a = parse_range(s.a.value_or("0.1"));
    if (a.size() != 1) throw Error(Errc::invalid_argument, "lambda-scan takes a single --a");
    if (c.n != 3) throw Error(Errc::unsupported_dimension, "lambda-scan is for n = 3");
    sweep = sweep_lambda(parse_range(s.lambdas), a[0]);
  } else {
    throw Error(Errc::invalid_argument, "unknown family \"" + s.family + "\"");
  }

  const json summary = to_json(sweep);
  if (c.out.empty()) {
    write_sweep_csv(std::cout, sweep);
    std::cerr << summary.dump() << '\n';
    return 0;
  }
  std::ofstream csv(c.out);
  if (!csv) throw Error(Errc::io, "cannot write " + c.out);
  write_sweep_csv(csv, sweep);
  if (c.json_out) {
    std::cout << summary.dump(1) << '\n';
  } else {
    std::cout << sweep.family << ": " << sweep.points.size() << " points, slope " << sweep.slope << ", intercept "
              << sweep.intercept << '\n';
  }
  return 0;
}

void add_common(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--n", c.n, "Dimension")->check(CLI::Range(2, 4));
  cmd->add_option("--lambda", c.lambda, "Riesz exponent, 0 < lambda < n");
  cmd->add_option("--grid", c.grid, "Cells per axis");
  cmd->add_option("--side", c.side, "Side of the grid box");
  cmd->add_option("--subsamples", c.subsamples, "Subsamples per axis for ball coverage");
  cmd->add_option("--tol", c.tol, "Multiplier of every tolerance");
  cmd->add_option("--seed", c.seed, "Seed for random shapes");
  cmd->add_option("--out", c.out, "Output path");
  cmd->add_flag("--json", c.json_out, "Machine-readable JSON on stdout");
  cmd->add_flag("--nearfield", c.nearfield, "Exact cell integrals for nearby cells");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riesz energies, asymmetry and stability checks"};
  app.require_subcommand(1);
  RunConfig config;

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a set");
  g->add_option("shape", gen.shape, "ball, annulus, ellipsoid, two-balls, box or blob")->required();
  g->add_option("--R", gen.R, "Ball radius");
  g->add_option("--a", gen.a, "Annulus parameter");
  g->add_option("--separation", gen.separation, "Center distance of the two balls");
  g->add_option("--axes", gen.axes, "Ellipsoid semi-axes, comma separated");
  g->add_option("--sides", gen.sides, "Box sides, comma separated");
  add_common(g, config);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Run a stability check on a set file");
  v->add_option("check", verify.check, "Check name")->required();
  v->add_option("set", verify.file, "Set JSON")->required();
  v->add_option("--axis", verify.axis, "Symmetrization axis (reflection)");
  v->add_option("--r", verify.r, "Ball radius (key3)");
  v->add_option("--c", verify.c, "Truncation constant (truncation)");
  v->add_option("--with", verify.with, "Second set (dom)");
  add_common(v, config);

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Sweep a family and fit log delta against log alpha");
  s->add_option("family", sweep.family, "annulus, ellipsoid, two-balls or lambda-scan")->required();
  s->add_option("--a", sweep.a, "Annulus parameters lo:hi:count or a list");
  s->add_option("--e", sweep.e, "Ellipsoid elongations");
  s->add_option("--separation", sweep.separation, "Two-ball separations");
  s->add_option("--lambdas", sweep.lambdas, "Exponents for lambda-scan");
  add_common(s, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (g->parsed()) return run_gen(gen, config);
    if (v->parsed()) return run_verify(verify, config, v->count("--n") > 0);
    return run_sweep(sweep, config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
