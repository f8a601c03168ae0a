#include "harmex/cli.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "harmex/parallel.hpp"
#include "harmex/verify.hpp"

namespace harmex {

namespace {

using nlohmann::json;

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string params_text(std::initializer_list<std::pair<const char*, double>> items) {
  std::string out;
  for (const auto& [name, value] : items) {
    if (!out.empty()) out += ';';
    out += name;
    out += '=';
    out += format_double(value);
  }
  return out;
}

void write_header(std::ostream& out, const std::string& format, const json& canonical) {
  const std::string hash = config_hash(canonical);
  if (format == "json") {
    out << json{{"harmex_version", kVersion}, {"config_hash", hash}}.dump() << '\n';
  } else {
    out << "# harmex-version=" << kVersion << " config-hash=" << hash << '\n';
  }
}

json hashed_view(const ExperimentConfig& config) {
  json j = config;
  j.erase("output");
  return j;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void validate_grid(const RadialGridSpec& g) {
  require(g.panels >= 1, "grid.panels must be >= 1");
  require(g.points >= 1, "grid.points must be >= 1");
  require(g.tail_annuli >= 2, "grid.tail must be >= 2");
  require(g.levels >= g.tail_annuli + 2, "grid.levels must exceed grid.tail by at least 2");
  require(g.levels <= 60, "grid.levels must be <= 60");
}

json grid_json(const RadialGridSpec& g) {
  return json{{"levels", g.levels}, {"panels", g.panels}, {"points", g.points}, {"tail", g.tail_annuli}};
}

RadialGridSpec grid_from(const json& j, RadialGridSpec g) {
  g.levels = j.value("levels", g.levels);
  g.panels = j.value("panels", g.panels);
  g.points = j.value("points", g.points);
  g.tail_annuli = j.value("tail", g.tail_annuli);
  return g;
}

std::vector<IncreasingFunction> increasing_family() {
  return {IncreasingFunction::constant(1.0), IncreasingFunction::identity(), IncreasingFunction::step(0.5),
          IncreasingFunction::blow_up(0.25), IncreasingFunction::zero()};
}

CheckReport agreement(std::string check, std::string params, double got, double want, double tol) {
  CheckReport report;
  report.check = std::move(check);
  report.params = std::move(params);
  report.tolerance = tol;
  report.max_violation = std::abs(got - want) / std::max(1.0, std::abs(want));
  report.pass = report.max_violation <= tol;
  report.extra["library"] = got;
  report.extra["oracle"] = want;
  return report;
}

CheckReport embedding_suite(const SpaceParams& space, int count, std::uint64_t seed, const RadialGrid& grid) {
  CheckReport total;
  total.check = "embedding";
  total.params = params_text({{"p", space.p}, {"q", space.q}, {"alpha", space.alpha}, {"functions", count + 1.0}});
  total.tolerance = 1e-10;
  const auto one = check_embedding(HarmonicFunction(ZonalExpansion(2, {1.0})), space.p, space.q, space.alpha, grid);
  total.extra["constant_gap"] = std::abs(one.max_violation);
  total.pass = one.pass && std::abs(one.max_violation) <= 1e-10;
  total.max_violation = one.max_violation;
  total.fitted_C = one.fitted_C;
  for (int i = 0; i < count; ++i) {
    const auto f = TestFunctionSpec::random(2 + i % 3, 6 + 2 * (i % 4), seed + static_cast<std::uint64_t>(i),
                                            0.5 + 0.25 * (i % 3))
                       .function();
    const auto r = check_embedding(f, space.p, space.q, space.alpha, grid);
    total.pass = total.pass && r.pass;
    total.max_violation = std::max(total.max_violation, r.max_violation);
    if (std::isfinite(r.fitted_C)) total.fitted_C = std::max(total.fitted_C, r.fitted_C);
  }
  return total;
}

std::string row_status(const DistancePair& d, const ExperimentConfig& config) {
  if (d.rejected) return "rejected";
  if (d.epsilon_star > 0.0) {
    const double ratio = d.ratio();
    return ratio >= 1.0 - config.grid_tol && ratio <= config.c_max ? "pass" : "fail";
  }
  return d.s1_upper <= config.floor ? "pass" : "fail";
}

const EpsilonRow* best_row(const DistancePair& d) {
  for (const auto& row : d.rows) {
    if (row.admissible && row.epsilon == d.best_epsilon) return &row;
  }
  return nullptr;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumericFailure;
  }
}

}  // namespace

TheoremParams CorpusEntry::params(const TheoremParams& defaults) const {
  TheoremParams out = defaults;
  if (alpha) out.alpha = *alpha;
  if (p) out.p = *p;
  if (t) out.t = *t;
  if (beta) out.beta = *beta;
  return out;
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  c.corpus.push_back(CorpusEntry{TestFunctionSpec::q_kernel(2, 0.0, 1.0), 1.0, {}, {}, {}});
  c.corpus.push_back(CorpusEntry{TestFunctionSpec::polynomial(2, {1.0, 0.5, -0.25}), {}, {}, {}, {}});
  for (double p : {0.5, 1.0, 2.0}) {
    for (double q : {1.0, 2.0}) {
      for (double alpha : {0.5, 1.0, 2.0}) c.spaces.push_back(SpaceParams::B(p, q, alpha));
    }
  }
  return c;
}

void ExperimentConfig::validate() const {
  require(!corpus.empty(), "corpus must not be empty");
  require(!theorems.empty(), "theorems must not be empty");
  for (const auto& entry : corpus) {
    entry.function.validate();
    const auto tp = entry.params(params);
    for (Theorem th : theorems) {
      try {
        tp.validate(th);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(entry.function.label() + " under " + to_string(th) + ": " + e.what());
      }
    }
  }
  for (const auto& space : spaces) {
    space.validate();
    require(space.family == Family::B_pq, "embedding spaces must be B_pq, got " + to_string(space.family));
  }
  validate_grid(grid);
  require(max_degree >= 1, "max_degree must be >= 1");
  require(c_max >= 1.0, "c_max must be >= 1");
  require(grid_tol >= 0.0 && grid_tol < 1.0, "grid_tol must be in [0, 1)");
  require(floor > 0.0, "floor must be > 0");
  require(embedding_functions >= 0, "embedding_functions must be >= 0");
  require(format == "csv" || format == "json", "format must be csv or json, got '" + format + "'");
}

void to_json(json& j, const CorpusEntry& entry) {
  j = json{{"function", entry.function}};
  if (entry.alpha) j["alpha"] = *entry.alpha;
  if (entry.p) j["p"] = *entry.p;
  if (entry.t) j["t"] = *entry.t;
  if (entry.beta) j["beta"] = *entry.beta;
}

void from_json(const json& j, CorpusEntry& entry) {
  entry = CorpusEntry{};
  entry.function = j.at("function").get<TestFunctionSpec>();
  entry.alpha = read_optional(j, "alpha");
  entry.p = read_optional(j, "p");
  entry.t = read_optional(j, "t");
  entry.beta = read_optional(j, "beta");
}

void to_json(json& j, const ExperimentConfig& c) {
  json theorems = json::array();
  for (Theorem th : c.theorems) theorems.push_back(to_string(th));
  j = json{{"corpus", c.corpus},
           {"theorems", theorems},
           {"params",
            {{"alpha", c.params.alpha},
             {"p", c.params.p},
             {"t", number_or_null(c.params.t)},
             {"beta", c.params.beta}}},
           {"spaces", c.spaces},
           {"grid", grid_json(c.grid)},
           {"max_degree", c.max_degree},
           {"c_max", c.c_max},
           {"grid_tol", c.grid_tol},
           {"floor", c.floor},
           {"embedding_functions", c.embedding_functions},
           {"seed", c.seed},
           {"format", c.format},
           {"output", c.output}};
}

void from_json(const json& j, ExperimentConfig& c) {
  c = ExperimentConfig::defaults();
  if (j.contains("corpus")) c.corpus = j.at("corpus").get<std::vector<CorpusEntry>>();
  if (j.contains("theorems")) {
    c.theorems.clear();
    for (const auto& tag : j.at("theorems")) c.theorems.push_back(theorem_from_string(tag.get<std::string>()));
  }
  if (j.contains("params")) {
    const auto& p = j.at("params");
    c.params.alpha = p.value("alpha", c.params.alpha);
    c.params.p = p.value("p", c.params.p);
    c.params.beta = p.value("beta", c.params.beta);
    if (auto t = read_optional(p, "t")) c.params.t = *t;
  }
  if (j.contains("spaces")) c.spaces = j.at("spaces").get<std::vector<SpaceParams>>();
  if (j.contains("grid")) c.grid = grid_from(j.at("grid"), c.grid);
  c.max_degree = j.value("max_degree", c.max_degree);
  c.c_max = j.value("c_max", c.c_max);
  c.grid_tol = j.value("grid_tol", c.grid_tol);
  c.floor = j.value("floor", c.floor);
  c.embedding_functions = j.value("embedding_functions", c.embedding_functions);
  c.seed = j.value("seed", c.seed);
  c.format = j.value("format", c.format);
  c.output = j.value("output", c.output);
}

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int cmd_verify(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    const RadialGrid grid(config.grid);
    const auto family = increasing_family();
    const auto points = random_points(20, 0.6, config.seed);

    std::vector<std::function<CheckReport()>> jobs;
    for (int n : {2, 3, 4}) {
      for (double alpha : {0.25, 0.5, 1.0, 2.5}) jobs.push_back([=] { return check_partition_of_unity(n, alpha, 50); });
    }
    for (int n : {2, 3}) jobs.push_back([=, &config] { return check_poisson_closed_form(n, 1000, 0.9, config.seed); });
    for (int n : {2, 3}) {
      for (double alpha : {0.0, 0.5, 2.0}) {
        jobs.push_back([=, &config, &points] {
          const auto f = TestFunctionSpec::random(n, 10, config.seed + n, 1.0).expansion();
          return check_reproducing(f, alpha, points);
        });
      }
    }
    for (int n : {2, 3}) {
      for (double alpha : {0.5, 1.0, 1.5}) jobs.push_back([=] { return check_lemma1(1, alpha, n); });
      for (double beta : {-0.5, 0.0, 1.0}) jobs.push_back([=] { return check_lemma1(2, beta, n); });
      for (double m : {n - 0.5, n + 1.0}) jobs.push_back([=] { return check_lemma1(3, m, n); });
    }
    for (const auto& [beta, s, gamma, p] : std::vector<std::array<double, 4>>{
             {0.5, 0.0, 2.0, 0.5}, {0.0, 1.0, 1.0, 1.0}, {1.0, 0.5, 1.5, 0.5}}) {
      jobs.push_back([=, &family] { return check_lemma2(family, beta, s, gamma, p); });
    }
    for (double beta : {0.5, 1.0, 3.0}) jobs.push_back([=, &family] { return check_lemma3(family, beta); });
    for (const auto& space : config.spaces) {
      jobs.push_back([=, &config, &grid] {
        return embedding_suite(space, config.embedding_functions, config.seed, grid);
      });
    }
    jobs.push_back([&config] {
      const auto spec = TestFunctionSpec::random(2, 8, config.seed, 1.0);
      const double got = integral_mean(spec.function(), 1.0, Radius::from_value(0.7));
      const double want = bruteforce_oracle_n2(spec, BruteForceQuery::mean(1.0, 0.7));
      return agreement("bruteforce_mean", params_text({{"n", 2}, {"p", 1}, {"r", 0.7}}), got, want, 1e-8);
    });
    jobs.push_back([&config] {
      const auto spec = TestFunctionSpec::random(2, 8, config.seed + 1, 1.0);
      const double got = space_norm(spec.function(), SpaceParams::A(1.0, 1.0)).value;
      const double want = bruteforce_oracle_n2(spec, BruteForceQuery::ball_norm(1.0, 1.0));
      return agreement("bruteforce_ball_norm", params_text({{"n", 2}, {"p", 1}, {"alpha", 1}}), got, want, 1e-8);
    });
    jobs.push_back([] {
      const IntervalSet L{{0.0, 0.5}};
      const double got = split_multipliers(2, 1.0, L, 0)[0];
      const double want =
          bruteforce_oracle_n2(TestFunctionSpec::polynomial(2, {1.0}), BruteForceQuery::kernel_integral(1.0, L, 0.0, 0.0));
      return agreement("bruteforce_split", params_text({{"n", 2}, {"alpha", 1}, {"L_hi", 0.5}}), got, want, 1e-8);
    });

    std::vector<CheckReport> reports(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) { reports[i] = jobs[i](); });

    write_header(out, config.format, hashed_view(config));
    if (config.format == "csv") out << csv_header() << '\n';
    bool all = true;
    for (const auto& r : reports) {
      all = all && r.pass;
      if (config.format == "csv") {
        out << csv_row(r) << '\n';
      } else {
        out << json(r).dump() << '\n';
      }
    }
    return all ? kExitPass : kExitNumericFailure;
  });
}

int cmd_distance(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    DistanceOptions options;
    options.grid = config.grid;
    options.max_degree = config.max_degree;

    struct Job {
      const CorpusEntry* entry;
      Theorem theorem;
    };
    std::vector<Job> jobs;
    for (const auto& entry : config.corpus) {
      for (Theorem th : config.theorems) jobs.push_back({&entry, th});
    }
    std::vector<DistancePair> results(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
      results[i] = distance_report(jobs[i].entry->function, jobs[i].theorem, jobs[i].entry->params(config.params),
                                   options);
    });

    write_header(out, config.format, hashed_view(config));
    if (config.format == "csv") {
      out << "function,theorem,alpha,p,t,beta,status,ambient_norm,epsilon_star,s2_estimate,s1_upper,ratio,"
             "best_epsilon,f1_degree,diagnostic,majorant,note\n";
    }
    bool all = true;
    for (const auto& d : results) {
      const std::string status = row_status(d, config);
      all = all && status != "fail";
      const EpsilonRow* best = best_row(d);
      if (config.format == "json") {
        json j = d;
        j["status"] = status;
        out << j.dump() << '\n';
        continue;
      }
      const double t = d.params.kernel_order(Theorem::T4);
      std::string diagnostic = "";
      if (best && (d.theorem == Theorem::T4 || d.theorem == Theorem::T6)) {
        diagnostic = format_double(best->diagnostic.value);
      }
      const std::vector<std::string> fields{
          csv_field(d.function),
          to_string(d.theorem),
          format_double(d.params.alpha),
          format_double(d.params.p),
          d.theorem == Theorem::T4 ? format_double(t) : "",
          d.theorem == Theorem::Tfinal ? format_double(d.params.beta) : "",
          status,
          format_double(d.ambient_norm),
          format_double(d.epsilon_star),
          format_double(d.s2_estimate),
          format_double(d.s1_upper),
          format_double(d.ratio()),
          format_double(d.best_epsilon),
          best ? std::to_string(best->degree) : "",
          diagnostic,
          best && std::isfinite(best->majorant) ? format_double(best->majorant) : "",
          csv_field(d.note)};
      for (std::size_t k = 0; k < fields.size(); ++k) out << (k ? "," : "") << fields[k];
      out << '\n';
    }
    return all ? kExitPass : kExitNumericFailure;
  });
}

void to_json(json& j, const ProfileRequest& request) {
  j = json{{"function", request.function},
           {"functional", request.functional},
           {"q", number_or_null(request.q)},
           {"alpha", request.alpha},
           {"weight", request.weight},
           {"grid", grid_json(request.grid)}};
  if (std::isinf(request.q)) j["q"] = "inf";
}

int cmd_profile(const ProfileRequest& request, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    request.function.validate();
    validate_grid(request.grid);
    require(request.functional == "M" || request.functional == "A",
            "functional must be M or A, got '" + request.functional + "'");
    require(request.q > 0.0, "q must be > 0");
    require(request.functional != "A" || request.alpha > -1.0, "alpha must be > -1");
    require(request.weight >= 0.0, "weight must be >= 0");
    const RadialGrid grid(request.grid);
    const auto f = request.function.function();
    RadialProfile profile;
    if (request.functional == "M") {
      profile = weighted_mean_profile(f, request.q, request.weight, grid);
    } else {
      profile = ball_average_profile(f, request.alpha, grid);
      for (std::size_t i = 0; i < profile.values.size(); ++i) {
        profile.values[i] *= std::pow(profile.radii[i].gap, request.weight);
      }
    }
    write_header(out, "csv", json(request));
    out << "r,value\n";
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
      out << format_double(profile.radii[i].value) << ',' << format_double(profile.values[i]) << '\n';
    }
    return kExitPass;
  });
}

void to_json(json& j, const DecomposeRequest& request) {
  json L = json::array();
  for (const auto& iv : request.L.intervals()) L.push_back({iv.lo, iv.hi});
  j = json{{"function", request.function}, {"order", request.order}, {"L", L}, {"K", request.K}};
}

int cmd_decompose(const DecomposeRequest& request, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    request.function.validate();
    require(request.K >= 0, "K must be >= 0");
    require(request.order > 0.0, "order must be > 0");
    const auto w = split_multipliers(request.function.n, request.order, request.L, request.K);
    write_header(out, "csv", json(request));
    out << "k,a_k,w_k,f1_k,f2_k\n";
    for (int k = 0; k <= request.K; ++k) {
      const double a = request.function.coefficient(k);
      out << k << ',' << format_double(a) << ',' << format_double(w[k]) << ',' << format_double(a * w[k]) << ','
          << format_double(a * (1.0 - w[k])) << '\n';
    }
    return kExitPass;
  });
}

Interval parse_interval(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, "interval '" + text + "' must look like a:b");
  double lo = 0.0;
  double hi = 0.0;
  const auto a = std::from_chars(text.data(), text.data() + colon, lo);
  const auto b = std::from_chars(text.data() + colon + 1, text.data() + text.size(), hi);
  require(a.ec == std::errc{} && a.ptr == text.data() + colon && b.ec == std::errc{} &&
              b.ptr == text.data() + text.size(),
          "interval '" + text + "' must look like a:b");
  require(0.0 <= lo && lo < hi && hi <= 1.0, "interval '" + text + "' must satisfy 0 <= a < b <= 1");
  return {lo, hi};
}

}  // namespace harmex
