#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "harmex/cli.hpp"

using namespace harmex;

namespace {

struct FunctionFlags {
  std::string kind;
  int n = 2;
  int K = 200;
  double kernel_beta = 0.0;
  double rho0 = 1.0;
  double p_order = 1.0;
  std::vector<double> coeffs;
  std::optional<std::uint64_t> seed;
  double decay = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--kind", kind, "poisson | q_kernel | p_alpha | polynomial | random")->required();
    app->add_option("--n", n, "dimension");
    app->add_option("--K", K, "truncation degree");
    app->add_option("--kernel-beta", kernel_beta, "q_kernel order");
    app->add_option("--rho0", rho0, "q_kernel pole radius");
    app->add_option("--p-order", p_order, "p_alpha order");
    app->add_option("--coeffs", coeffs, "polynomial coefficients")->delimiter(',');
    app->add_option("--seed", seed, "random seed");
    app->add_option("--decay", decay, "random coefficient decay");
  }

  TestFunctionSpec spec() const {
    nlohmann::json j{{"kind", kind}, {"n", n}, {"K", K}, {"beta", kernel_beta}, {"rho0", rho0},
                     {"alpha", p_order}, {"coeffs", coeffs}, {"decay", decay}};
    if (seed) j["seed"] = *seed;
    return j.get<TestFunctionSpec>();
  }
};

struct GridFlags {
  std::optional<int> levels, panels, points, tail;

  void attach(CLI::App* app) {
    app->add_option("--levels", levels, "dyadic annuli J");
    app->add_option("--panels", panels, "panels per annulus M");
    app->add_option("--points", points, "Gauss points per panel");
    app->add_option("--tail", tail, "tail annuli T");
  }

  void apply(RadialGridSpec& g) const {
    if (levels) g.levels = *levels;
    if (panels) g.panels = *panels;
    if (points) g.points = *points;
    if (tail) g.tail_annuli = *tail;
  }
};

struct ConfigFlags {
  std::string config_path;
  std::optional<std::string> format, output;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> theorems;
  std::optional<double> alpha, p, t, beta, c_max, grid_tol, floor;
  std::optional<int> max_degree, embedding_functions;
  GridFlags grid;

  void attach_common(CLI::App* app) {
    app->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    app->add_option("--format", format, "csv | json");
    app->add_option("--output", output, "output file, - for stdout");
    app->add_option("--seed", seed, "seed of random corpora");
    grid.attach(app);
  }

  ExperimentConfig load() const {
    ExperimentConfig c = ExperimentConfig::defaults();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      c = nlohmann::json::parse(in).get<ExperimentConfig>();
    }
    if (format) c.format = *format;
    if (output) c.output = *output;
    if (seed) c.seed = *seed;
    if (!theorems.empty()) {
      c.theorems.clear();
      for (const auto& tag : theorems) c.theorems.push_back(theorem_from_string(tag));
    }
    if (alpha) c.params.alpha = *alpha;
    if (p) c.params.p = *p;
    if (t) c.params.t = *t;
    if (beta) c.params.beta = *beta;
    if (c_max) c.c_max = *c_max;
    if (grid_tol) c.grid_tol = *grid_tol;
    if (floor) c.floor = *floor;
    if (max_degree) c.max_degree = *max_degree;
    if (embedding_functions) c.embedding_functions = *embedding_functions;
    grid.apply(c.grid);
    return c;
  }
};

int emit(const std::string& path, const std::function<int(std::ostream&)>& body) {
  if (path.empty() || path == "-") return body(std::cout);
  std::ostringstream buffer;
  const int code = body(buffer);
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return kExitUsage;
  }
  file << buffer.str();
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Level-set distance experiments for harmonic function spaces"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ConfigFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "run the identity and inequality checks");
  verify_flags.attach_common(verify);
  verify->add_option("--embedding-functions", verify_flags.embedding_functions, "random functions per space");

  ConfigFlags distance_flags;
  auto* distance = app.add_subcommand("distance", "distance estimates for every corpus function and theorem");
  distance_flags.attach_common(distance);
  distance->add_option("--theorem", distance_flags.theorems, "T3 | T4 | T5 | T6 | Tfinal (repeatable)");
  distance->add_option("--alpha", distance_flags.alpha, "default alpha");
  distance->add_option("--p", distance_flags.p, "default p");
  distance->add_option("--t", distance_flags.t, "T4 kernel order");
  distance->add_option("--beta", distance_flags.beta, "Tfinal beta");
  distance->add_option("--c-max", distance_flags.c_max, "largest acceptable ratio");
  distance->add_option("--grid-tol", distance_flags.grid_tol, "ratio tolerance below 1");
  distance->add_option("--floor", distance_flags.floor, "s1 bound when epsilon* = 0");
  distance->add_option("--max-degree", distance_flags.max_degree, "degree cap of f1");

  FunctionFlags profile_fn;
  GridFlags profile_grid;
  ProfileRequest profile_req;
  std::string profile_q = "1";
  std::string profile_output = "-";
  auto* profile = app.add_subcommand("profile", "tabulate a radial profile of a test function");
  profile_fn.attach(profile);
  profile_grid.attach(profile);
  profile->add_option("--functional", profile_req.functional, "M (integral mean) | A (ball average)")->required();
  profile->add_option("--q", profile_q, "exponent of M, or inf");
  profile->add_option("--alpha", profile_req.alpha, "weight exponent inside A");
  profile->add_option("--weight", profile_req.weight, "outer factor (1-r)^weight");
  profile->add_option("--output", profile_output, "output file, - for stdout");

  FunctionFlags decompose_fn;
  DecomposeRequest decompose_req;
  std::vector<std::string> decompose_L;
  std::string decompose_output = "-";
  auto* decompose = app.add_subcommand("decompose", "dump the splitting multipliers w_k");
  decompose_fn.attach(decompose);
  decompose->add_option("--order", decompose_req.order, "kernel order")->required();
  decompose->add_option("--L", decompose_L, "interval a:b of the level set (repeatable)")->required();
  decompose->add_option("--kmax", decompose_req.K, "largest degree");
  decompose->add_option("--output", decompose_output, "output file, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify) {
      const auto config = verify_flags.load();
      return emit(config.output, [&](std::ostream& out) { return cmd_verify(config, out, std::cerr); });
    }
    if (*distance) {
      const auto config = distance_flags.load();
      return emit(config.output, [&](std::ostream& out) { return cmd_distance(config, out, std::cerr); });
    }
    if (*profile) {
      profile_req.function = profile_fn.spec();
      profile_req.q = profile_q == "inf" ? std::numeric_limits<double>::infinity() : std::stod(profile_q);
      profile_grid.apply(profile_req.grid);
      return emit(profile_output, [&](std::ostream& out) { return cmd_profile(profile_req, out, std::cerr); });
    }
    decompose_req.function = decompose_fn.spec();
    for (const auto& text : decompose_L) {
      const auto iv = parse_interval(text);
      decompose_req.L.add(iv.lo, iv.hi);
    }
    return emit(decompose_output, [&](std::ostream& out) { return cmd_decompose(decompose_req, out, std::cerr); });
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
