#ifndef HARMEX_CLI_HPP
#define HARMEX_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "harmex/extremal.hpp"
#include "harmex/harmonic_model.hpp"
#include "harmex/interval_set.hpp"
#include "harmex/norms.hpp"

namespace harmex {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitPass = 0, kExitNumericFailure = 1, kExitUsage = 2 };

/// One test function with optional per-entry theorem parameters.
struct CorpusEntry {
  TestFunctionSpec function;
  std::optional<double> alpha;
  std::optional<double> p;
  std::optional<double> t;
  std::optional<double> beta;

  TheoremParams params(const TheoremParams& defaults) const;
};

struct ExperimentConfig {
  std::vector<CorpusEntry> corpus;
  std::vector<Theorem> theorems{Theorem::T3};
  TheoremParams params;               // defaults for corpus entries
  std::vector<SpaceParams> spaces;    // embedding checks of the verify suite
  RadialGridSpec grid;
  int max_degree = 1500;
  double c_max = 50.0;                // distance: largest acceptable s1_upper / epsilon_star
  double grid_tol = 0.05;             // distance: smallest acceptable ratio is 1 - grid_tol
  double floor = 1e-6;                // distance: s1_upper bound when epsilon_star = 0
  int embedding_functions = 10;
  std::uint64_t seed = 2024;
  std::string format = "csv";         // csv | json
  std::string output = "-";

  /// Default corpus and spaces.
  static ExperimentConfig defaults();
  /// Throws std::invalid_argument naming the violated range.
  void validate() const;
};

void to_json(nlohmann::json& j, const CorpusEntry& entry);
void from_json(const nlohmann::json& j, CorpusEntry& entry);
void to_json(nlohmann::json& j, const ExperimentConfig& config);
/// Missing keys keep their defaults().
void from_json(const nlohmann::json& j, ExperimentConfig& config);

/// 64-bit FNV-1a of the canonical JSON text, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

/// RFC 4180 quoting when the field holds a comma, quote or line break.
std::string csv_field(const std::string& text);
/// Shortest round-trip decimal form; nan / inf / -inf for non-finite values.
std::string format_double(double v);

/// Runs the verify suite. Returns kExitPass iff every check passes.
int cmd_verify(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// One row per (corpus function, theorem). Returns kExitPass iff every
/// non-rejected row passes the ratio rule.
int cmd_distance(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

struct ProfileRequest {
  TestFunctionSpec function;
  std::string functional = "M";  // M: (1-r)^weight M_q(f, r); A: (1-r)^weight A_alpha(f, r)
  double q = 1.0;
  double alpha = 0.0;
  double weight = 0.0;
  RadialGridSpec grid;
};
void to_json(nlohmann::json& j, const ProfileRequest& request);

/// CSV "r,value" at the grid nodes.
int cmd_profile(const ProfileRequest& request, std::ostream& out, std::ostream& err);

struct DecomposeRequest {
  TestFunctionSpec function;
  double order = 1.0;
  IntervalSet L;
  int K = 20;
};
void to_json(nlohmann::json& j, const DecomposeRequest& request);

/// CSV "k,a_k,w_k,f1_k,f2_k" for k = 0..K.
int cmd_decompose(const DecomposeRequest& request, std::ostream& out, std::ostream& err);

/// Parses "a:b" into [a, b).
Interval parse_interval(const std::string& text);

}  // namespace harmex

#endif  // HARMEX_CLI_HPP
