// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvxsub/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cvxsub/rng.hpp"
#include "json.hpp"

namespace cvxsub {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Ratings ingestion.

namespace {

struct RatingRow {
  long long user;
  long long movie;
  double rating;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

RatingsMatrix ingest_movielens(const std::string& path, int u, int v) {
  if (u <= 0 || v <= 0) throw PreconditionError("user and movie counts must be positive");
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ratings file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  {
    const auto header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "userId" || header[1] != "movieId" ||
        header[2] != "rating" || header[3] != "timestamp")
      throw DataError(path + ":1: expected header userId,movieId,rating,timestamp");
  }

  std::vector<RatingRow> rows;
  long long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected 4 comma-separated fields");
    RatingRow r{};
    try {
      std::size_t pos = 0;
      r.user = std::stoll(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument("trailing");
      r.movie = std::stoll(fields[1], &pos);
      if (pos != fields[1].size()) throw std::invalid_argument("trailing");
      r.rating = std::stod(fields[2], &pos);
      if (pos != fields[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": malformed row");
    }
    if (!(r.rating >= 0.0 && r.rating <= 5.0))
      throw DataError(path + ":" + std::to_string(line_no) + ": rating outside [0,5]");
    rows.push_back(r);
  }

  // Most-rated movies first, smaller id on ties.
  std::map<long long, long long> movie_counts;
  for (const auto& r : rows) ++movie_counts[r.movie];
  if (static_cast<int>(movie_counts.size()) < v)
    throw SizeError("ratings file has fewer than the requested number of movies");
  std::vector<std::pair<long long, long long>> movies(movie_counts.begin(), movie_counts.end());
  std::sort(movies.begin(), movies.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  movies.resize(static_cast<std::size_t>(v));
  std::map<long long, int> movie_col;
  std::vector<long long> movie_ids(static_cast<std::size_t>(v));
  for (int j = 0; j < v; ++j) {
    movie_col[movies[static_cast<std::size_t>(j)].first] = j;
    movie_ids[static_cast<std::size_t>(j)] = movies[static_cast<std::size_t>(j)].first;
  }

  // Users with the most ratings restricted to the selected movies.
  std::map<long long, long long> user_counts;
  for (const auto& r : rows) {
    if (!user_counts.count(r.user)) user_counts[r.user] = 0;
    if (movie_col.count(r.movie)) ++user_counts[r.user];
  }
  if (static_cast<int>(user_counts.size()) < u)
    throw SizeError("ratings file has fewer than the requested number of users");
  std::vector<std::pair<long long, long long>> users(user_counts.begin(), user_counts.end());
  std::sort(users.begin(), users.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  users.resize(static_cast<std::size_t>(u));
  std::map<long long, int> user_row;
  std::vector<long long> user_ids(static_cast<std::size_t>(u));
  for (int i = 0; i < u; ++i) {
    user_row[users[static_cast<std::size_t>(i)].first] = i;
    user_ids[static_cast<std::size_t>(i)] = users[static_cast<std::size_t>(i)].first;
  }

  RatingsMatrix m;
  m.users = u;
  m.items = v;
  m.values.assign(static_cast<std::size_t>(u) * v, 0.0);
  m.observed.assign(static_cast<std::size_t>(u) * v, 0);
  m.user_ids = std::move(user_ids);
  m.movie_ids = std::move(movie_ids);
  for (const auto& r : rows) {
    const auto ui = user_row.find(r.user);
    const auto mj = movie_col.find(r.movie);
    if (ui == user_row.end() || mj == movie_col.end()) continue;
    const std::size_t at = static_cast<std::size_t>(ui->second) * v + mj->second;
    m.values[at] = r.rating;  // duplicate (user,movie) rows: last one wins
    m.observed[at] = 1;
  }

  // Row-mean imputation; global mean for users with no observed cells.
  double global_sum = 0.0;
  long long global_cnt = 0;
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    if (m.observed[i]) {
      global_sum += m.values[i];
      ++global_cnt;
    }
  }
  const double global_mean = global_cnt ? global_sum / global_cnt : 0.0;
  for (int i = 0; i < u; ++i) {
    double row_sum = 0.0;
    int row_cnt = 0;
    for (int j = 0; j < v; ++j) {
      const std::size_t at = static_cast<std::size_t>(i) * v + j;
      if (m.observed[at]) {
        row_sum += m.values[at];
        ++row_cnt;
      }
    }
    const double fill = row_cnt ? row_sum / row_cnt : global_mean;
    for (int j = 0; j < v; ++j) {
      const std::size_t at = static_cast<std::size_t>(i) * v + j;
      if (!m.observed[at]) m.values[at] = fill;
    }
  }
  return m;
}

void write_ratings_matrix_json(const RatingsMatrix& m, const std::string& path) {
  json j;
  j["schema"] = 1;
  j["users"] = m.user_ids;
  j["movies"] = m.movie_ids;
  j["values"] = m.values;
  j["observed"] = m.observed;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << "\n";
}

RatingsMatrix read_ratings_matrix_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  RatingsMatrix m;
  try {
    m.user_ids = j.at("users").get<std::vector<long long>>();
    m.movie_ids = j.at("movies").get<std::vector<long long>>();
    m.values = j.at("values").get<std::vector<double>>();
    m.observed = j.at("observed").get<std::vector<std::uint8_t>>();
  } catch (const std::exception& e) {
    throw DataError(path + ": bad ratings document: " + e.what());
  }
  m.users = static_cast<int>(m.user_ids.size());
  m.items = static_cast<int>(m.movie_ids.size());
  if (m.values.size() != static_cast<std::size_t>(m.users) * m.items)
    throw DataError(path + ": value matrix shape mismatch");
  return m;
}

// ---------------------------------------------------------------------------
// Instance construction.

ProblemInstance generate_synthetic_case(int m, int n, int k, double lambda, std::uint64_t seed) {
  if (m <= 0 || n <= 0 || k < 0) throw PreconditionError("m, n must be positive and k >= 0");
  if (k > n) throw PreconditionError("k must not exceed n");
  rng::Engine eng = rng::make_engine(seed);
  ConvexFacilityLocationSpec spec;
  spec.block_size = m;
  spec.num_blocks = n;
  spec.lambda = lambda;
  spec.q.resize(static_cast<std::size_t>(n) * n);
  std::vector<double> a(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (double& e : a) e = std::abs(rng::uniform_unit(eng));
      std::vector<double> q(static_cast<std::size_t>(m) * m, 0.0);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
          double acc = 0.0;
          for (int t = 0; t < m; ++t)
            acc += a[static_cast<std::size_t>(t) * m + r] * a[static_cast<std::size_t>(t) * m + c];
          q[static_cast<std::size_t>(r) * m + c] = acc + (r == c ? 0.1 : 0.0);
        }
      spec.q[static_cast<std::size_t>(i) * n + j] = std::move(q);
    }
  }
  ProblemInstance inst;
  inst.objective = build_convex_facility_location(spec);
  inst.constraint = MatroidConstraint::uniform(n, k);
  inst.region = FeasibleRegion::product_of_balls(std::vector<int>(static_cast<std::size_t>(n), m),
                                                 std::vector<double>(static_cast<std::size_t>(n), 1.0),
                                                 /*nonnegative=*/true);
  return inst;
}

ProblemInstance build_attack_case(const RatingsMatrix& ratings, int k, double budget_fraction) {
  if (!(budget_fraction > 0.0 && budget_fraction <= 1.0))
    throw PreconditionError("budget fraction must lie in (0,1]");
  RecommenderAttackSpec spec;
  spec.users = ratings.users;
  spec.items = ratings.items;
  spec.baseline = ratings.values;
  spec.epsilon = budget_fraction * ratings.users * ratings.items;
  ProblemInstance inst;
  inst.objective = build_recommender_attack(spec);
  inst.constraint = MatroidConstraint::uniform(ratings.items, k);
  inst.region = FeasibleRegion::frobenius_ball_intersect_box(Vector(ratings.values), spec.epsilon,
                                                             spec.rating_lower, spec.rating_upper);
  return inst;
}

// ---------------------------------------------------------------------------
// Configuration.

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown field \"" + it.key() + "\" in " + where);
  }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const std::exception&) {
    throw ConfigError(std::string("field \"") + key + "\" has the wrong type");
  }
}

SolverSettings parse_solver_settings(const json& obj, SolverSettings base,
                                     const std::string& where) {
  check_keys(obj,
             {"horizon", "step_kind", "step_c", "trace_every", "estimator_samples",
              "estimator_antithetic", "exact_extension", "allow_unsafe_step", "l_y_override"},
             where);
  base.horizon = get_or(obj, "horizon", base.horizon);
  base.step_kind = get_or<std::string>(obj, "step_kind", base.step_kind);
  base.step_c = get_or(obj, "step_c", base.step_c);
  base.trace_every = get_or(obj, "trace_every", base.trace_every);
  base.estimator_samples = get_or(obj, "estimator_samples", base.estimator_samples);
  base.estimator_antithetic = get_or(obj, "estimator_antithetic", base.estimator_antithetic);
  base.exact_extension = get_or(obj, "exact_extension", base.exact_extension);
  base.allow_unsafe_step = get_or(obj, "allow_unsafe_step", base.allow_unsafe_step);
  if (obj.contains("l_y_override") && !obj.at("l_y_override").is_null())
    base.l_y_override = obj.at("l_y_override").get<double>();
  if (base.step_kind != "c_over_sqrt_t" && base.step_kind != "constant")
    throw ConfigError("step_kind must be c_over_sqrt_t or constant");
  if (base.horizon < 1) throw ConfigError("horizon must be at least 1");
  return base;
}

const std::vector<std::string> kKnownAlgorithms = {"gg", "egg", "grg", "egrg", "egce"};

json config_to_json(const ExperimentConfig& cfg) {
  json e;
  e["kind"] = cfg.kind;
  if (cfg.kind == "synthetic_case") {
    e["m"] = cfg.m;
    e["n"] = cfg.n;
    e["k"] = cfg.k;
    e["lambda"] = cfg.lambda;
    e["seed"] = cfg.instance_seed.value_or(cfg.seed);
  } else {
    e["ratings"] = cfg.ratings_path;
    e["users"] = cfg.users;
    e["movies"] = cfg.movies;
    e["k"] = cfg.attack_k;
    e["budget_fraction"] = cfg.budget_fraction;
  }
  const auto solver_json = [](const SolverSettings& s) {
    json o;
    o["horizon"] = s.horizon;
    o["step_kind"] = s.step_kind;
    o["step_c"] = s.step_c;
    o["trace_every"] = s.trace_every;
    o["estimator_samples"] = s.estimator_samples;
    o["estimator_antithetic"] = s.estimator_antithetic;
    o["exact_extension"] = s.exact_extension;
    o["allow_unsafe_step"] = s.allow_unsafe_step;
    if (s.l_y_override)
      o["l_y_override"] = *s.l_y_override;
    else
      o["l_y_override"] = nullptr;
    return o;
  };
  json j;
  j["schema"] = 1;
  j["experiment"] = e;
  j["algorithms"] = cfg.algorithms;
  j["solver_defaults"] = solver_json(cfg.solver_defaults);
  json per;
  for (const auto& [name, s] : cfg.per_algorithm) per[name] = solver_json(s);
  j["per_algorithm"] = per;
  j["output_dir"] = cfg.output_dir;
  json emit = json::array();
  if (cfg.emit_csv) emit.push_back("csv");
  if (cfg.emit_json) emit.push_back("json");
  j["emit"] = emit;
  j["seed"] = cfg.seed;
  j["opt_reference"] = {
      {"compute", cfg.compute_opt_reference}, {"tol", cfg.opt_tol}, {"max_iters", cfg.opt_max_iters}};
  return j;
}

ExperimentConfig parse_config_json(const json& j) {
  check_keys(j,
             {"schema", "experiment", "algorithms", "solver_defaults", "per_algorithm",
              "output_dir", "emit", "seed", "opt_reference"},
             "the top-level config");
  if (j.contains("schema") && j.at("schema").get<int>() != 1)
    throw ConfigError("unsupported config schema version");
  ExperimentConfig cfg;
  cfg.seed = get_or<std::uint64_t>(j, "seed", 0);

  if (!j.contains("experiment")) throw ConfigError("missing \"experiment\" block");
  const json& e = j.at("experiment");
  cfg.kind = get_or<std::string>(e, "kind", "");
  if (cfg.kind == "synthetic_case") {
    check_keys(e, {"kind", "m", "n", "k", "lambda", "seed"}, "experiment");
    cfg.m = get_or(e, "m", cfg.m);
    cfg.n = get_or(e, "n", cfg.n);
    cfg.k = get_or(e, "k", cfg.k);
    cfg.lambda = get_or(e, "lambda", cfg.lambda);
    if (e.contains("seed")) cfg.instance_seed = e.at("seed").get<std::uint64_t>();
    if (cfg.m <= 0 || cfg.n <= 0 || cfg.k <= 0 || !(cfg.lambda > 0.0))
      throw ConfigError("synthetic_case needs positive m, n, k, lambda");
  } else if (cfg.kind == "movielens_attack") {
    check_keys(e, {"kind", "ratings", "users", "movies", "k", "budget_fraction"}, "experiment");
    cfg.ratings_path = get_or<std::string>(e, "ratings", "");
    cfg.users = get_or(e, "users", cfg.users);
    cfg.movies = get_or(e, "movies", cfg.movies);
    cfg.attack_k = get_or(e, "k", cfg.attack_k);
    cfg.budget_fraction = get_or(e, "budget_fraction", cfg.budget_fraction);
    if (cfg.ratings_path.empty()) throw ConfigError("movielens_attack needs a ratings path");
    if (cfg.users <= 0 || cfg.movies <= 0 || cfg.attack_k <= 0)
      throw ConfigError("movielens_attack needs positive users, movies, k");
    if (!(cfg.budget_fraction > 0.0 && cfg.budget_fraction <= 1.0))
      throw ConfigError("budget_fraction must lie in (0,1]");
  } else {
    throw ConfigError("experiment kind must be synthetic_case or movielens_attack");
  }

  cfg.algorithms = get_or<std::vector<std::string>>(j, "algorithms", {"gg"});
  if (cfg.algorithms.empty()) throw ConfigError("algorithm list must not be empty");
  for (const auto& a : cfg.algorithms)
    if (std::find(kKnownAlgorithms.begin(), kKnownAlgorithms.end(), a) == kKnownAlgorithms.end())
      throw ConfigError("unknown algorithm \"" + a + "\"");

  if (j.contains("solver_defaults"))
    cfg.solver_defaults = parse_solver_settings(j.at("solver_defaults"), SolverSettings{},
                                                "solver_defaults");
  if (j.contains("per_algorithm")) {
    for (auto it = j.at("per_algorithm").begin(); it != j.at("per_algorithm").end(); ++it) {
      if (std::find(kKnownAlgorithms.begin(), kKnownAlgorithms.end(), it.key()) ==
          kKnownAlgorithms.end())
        throw ConfigError("per_algorithm entry for unknown algorithm \"" + it.key() + "\"");
      cfg.per_algorithm[it.key()] =
          parse_solver_settings(it.value(), cfg.solver_defaults, "per_algorithm." + it.key());
    }
  }

  cfg.output_dir = get_or<std::string>(j, "output_dir", cfg.output_dir);
  if (j.contains("emit")) {
    cfg.emit_csv = false;
    cfg.emit_json = false;
    for (const auto& f : j.at("emit")) {
      const std::string s = f.get<std::string>();
      if (s == "csv")
        cfg.emit_csv = true;
      else if (s == "json")
        cfg.emit_json = true;
      else
        throw ConfigError("emit formats are csv and json");
    }
  }
  if (j.contains("opt_reference")) {
    const json& o = j.at("opt_reference");
    check_keys(o, {"compute", "tol", "max_iters"}, "opt_reference");
    cfg.compute_opt_reference = get_or(o, "compute", cfg.compute_opt_reference);
    cfg.opt_tol = get_or(o, "tol", cfg.opt_tol);
    cfg.opt_max_iters = get_or(o, "max_iters", cfg.opt_max_iters);
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  return parse_config_json(j);
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

ProblemInstance build_instance(const ExperimentConfig& cfg) {
  if (cfg.kind == "synthetic_case")
    return generate_synthetic_case(cfg.m, cfg.n, cfg.k, cfg.lambda,
                                   cfg.instance_seed.value_or(cfg.seed));
  const RatingsMatrix m = ingest_movielens(cfg.ratings_path, cfg.users, cfg.movies);
  return build_attack_case(m, cfg.attack_k, cfg.budget_fraction);
}

SolverConfig make_solver_config(const ExperimentConfig& cfg, const std::string& algorithm) {
  SolverSettings s = cfg.solver_defaults;
  const auto it = cfg.per_algorithm.find(algorithm);
  if (it != cfg.per_algorithm.end()) s = it->second;
  SolverConfig out;
  out.horizon = s.horizon;
  out.schedule = (s.step_kind == "constant") ? StepSchedule::constant(s.step_c)
                                             : StepSchedule::constant_over_sqrt_t(s.step_c);
  out.trace_every = s.trace_every > 0 ? s.trace_every : std::max(1, s.horizon / 200);
  out.estimator.samples = s.estimator_samples;
  out.estimator.antithetic = s.estimator_antithetic;
  out.exact_extension = s.exact_extension;
  out.allow_unsafe_step = s.allow_unsafe_step;
  out.l_y_override = s.l_y_override;
  // Independent deterministic stream per algorithm.
  std::uint64_t h = 1469598103934665603ull;
  for (char c : algorithm) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
  out.seed = rng::derive_seed(cfg.seed, h);
  out.estimator.seed = out.seed;
  return out;
}

SolveResult run_algorithm(const std::string& algorithm, const ProblemInstance& inst,
                          const SolverConfig& scfg) {
  SolverConfig cfg = scfg;
  if (algorithm == "egce" && cfg.schedule.is_constant() && cfg.schedule.c <= 0.0) {
    // step_c = 0 asks for the largest certified step.
    const double l_y =
        cfg.l_y_override ? *cfg.l_y_override
                         : default_extension_smoothness(*inst.objective).value_or(0.0);
    const double l_max = std::max(inst.objective->smoothness(), l_y);
    if (l_max <= 0.0) throw ConfigError("cannot derive a step size: zero smoothness bounds");
    cfg.schedule = StepSchedule::constant(1.0 / l_max);
  }
  if (algorithm == "gg") return solve_gg(*inst.objective, inst.constraint, inst.region, cfg);
  if (algorithm == "egg") return solve_egg(*inst.objective, inst.constraint, inst.region, cfg);
  if (algorithm == "grg") return solve_grg(*inst.objective, inst.constraint, inst.region, cfg);
  if (algorithm == "egrg") return solve_egrg(*inst.objective, inst.constraint, inst.region, cfg);
  if (algorithm == "egce") return solve_egce(*inst.objective, inst.constraint, inst.region, cfg);
  throw ConfigError("unknown algorithm \"" + algorithm + "\"");
}

// ---------------------------------------------------------------------------
// Emission.

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_run_csv(const std::string& path, const std::vector<RunCsvRow>& rows, bool with_opt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << "t,gamma_t,phi,error_vs_final";
  if (with_opt) out << ",error_vs_opt";
  out << ",wall_ms\n";
  for (const RunCsvRow& r : rows) {
    out << r.t << ',' << format_real(r.gamma) << ',' << format_real(r.phi) << ','
        << format_real(r.error_vs_final);
    if (with_opt) out << ',' << format_real(r.error_vs_opt.value_or(0.0));
    out << ',' << format_real(r.wall_ms) << "\n";
  }
}

std::string vector_digest(const Vector& v) {
  std::uint64_t h = 1469598103934665603ull;
  for (int i = 0; i < v.dimension(); ++i) {
    const std::string s = format_real(v[i]);
    for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    h = (h ^ ',') * 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json guarantees_to_json(const GuaranteeFlags& g) {
  json j;
  j["alpha"] = g.alpha;
  j["smoothness_available"] = g.smoothness_available;
  j["gradient_bound_available"] = g.gradient_bound_available;
  j["gradient_bound_required"] = g.gradient_bound_required;
  j["step_condition_verified"] = g.step_condition_verified;
  j["certified"] = g.certified;
  return j;
}

json certificate_to_json(const CertificateRecord& c) {
  json j;
  j["alpha"] = c.alpha;
  j["eps"] = c.eps;
  j["phi_value"] = c.phi_value;
  j["phi_is_exact"] = c.phi_is_exact;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["opt_ref"] = c.opt_ref;
  j["verdict"] = c.verdict;
  return j;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  const ProblemInstance inst = build_instance(cfg);
  const Objective& obj = *inst.objective;

  fs::create_directories(cfg.output_dir);
  RunOutcome outcome;
  auto cleanup = [&outcome]() {
    for (const std::string& f : outcome.files_written) {
      std::error_code ec;
      fs::remove(f, ec);
    }
  };

  try {
    const bool enumerable =
        obj.ground_set_size() <= 24 &&
        count_independent_sets(inst.constraint) <= kDefaultEnumerationCap;
    std::optional<OptReference> opt;
    if (cfg.compute_opt_reference && enumerable)
      opt = compute_opt_minimax(obj, inst.constraint, inst.region, cfg.opt_tol, cfg.opt_max_iters);

    json summary;
    summary["schema"] = 1;
    summary["config"] = config_to_json(cfg);
    summary["objective"] = obj.name();
    if (opt) {
      summary["opt_reference"] = {{"value", opt->value},
                                  {"iterations", opt->iterations},
                                  {"label", opt->label}};
    } else {
      summary["opt_reference"] = nullptr;
    }
    if (cfg.kind == "movielens_attack") {
      const Vector baseline = obj.initial_point();
      summary["baseline_utility"] = phi_greedy(obj, inst.constraint, baseline);
    }

    json algos = json::object();
    for (const std::string& name : cfg.algorithms) {
      const SolverConfig scfg = make_solver_config(cfg, name);
      obj.reset_counters();
      const SolveResult result = run_algorithm(name, inst, scfg);
      const std::uint64_t evals_total = obj.evaluation_count();

      const MetricSeries phi = phi_series(obj, inst.constraint, result.trace, enumerable);
      const MetricSeries err_final = error_series_from_phi(phi, ErrorMode::kVsFinal);
      std::optional<MetricSeries> err_opt;
      if (opt) err_opt = error_series_from_phi(phi, ErrorMode::kVsOpt, opt->value);

      if (cfg.emit_csv) {
        std::vector<RunCsvRow> rows(result.trace.size());
        for (std::size_t i = 0; i < result.trace.size(); ++i) {
          rows[i].t = result.trace[i].t;
          rows[i].gamma = result.trace[i].gamma;
          rows[i].phi = phi.points[i].value;
          rows[i].error_vs_final = err_final.points[i].value;
          if (err_opt) rows[i].error_vs_opt = err_opt->points[i].value;
          rows[i].wall_ms = result.trace[i].wall_ms;
        }
        const std::string path =
            (fs::path(cfg.output_dir) / (cfg.kind + "_" + name + ".csv")).string();
        write_run_csv(path, rows, opt.has_value());
        outcome.files_written.push_back(path);
      }

      json a;
      a["algorithm"] = result.algorithm;
      a["horizon"] = result.horizon;
      a["x_sol"] = result.x_sol.entries();
      a["x_sol_digest"] = vector_digest(result.x_sol);
      a["phi_kind"] = enumerable ? "exact" : "greedy";
      a["final_phi"] = phi.points.empty() ? 0.0 : phi.points.back().value;
      a["guarantees"] = guarantees_to_json(result.guarantees);
      a["objective_evaluations"] = evals_total;
      a["visited_union_size"] = result.visited_union.cardinality();
      if (opt) {
        const CertificateRecord cert =
            certify(result.guarantees.alpha, result.x_sol, obj, inst.constraint, inst.region,
                    opt->value, 0.0);
        const double eps_observed = cert.lhs - cert.opt_ref;
        a["certificate"] =
            certificate_to_json(certify(result.guarantees.alpha, result.x_sol, obj,
                                        inst.constraint, inst.region, opt->value,
                                        std::max(0.0, eps_observed)));
        a["certificate"]["eps_observed"] = eps_observed;
      }
      algos[name] = std::move(a);
    }
    summary["algorithms"] = std::move(algos);

    if (cfg.emit_json) {
      const std::string path = (fs::path(cfg.output_dir) / "summary.json").string();
      std::ofstream out(path, std::ios::binary);
      if (!out) throw DataError("cannot write " + path);
      out << summary.dump(2) << "\n";
      outcome.files_written.push_back(path);
      outcome.summary_path = path;
    }
  } catch (const NumericalError&) {
    cleanup();
    throw;
  }
  return outcome;
}

std::vector<std::string> validate_summary_json(const std::string& json_text) {
  std::vector<std::string> problems;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    problems.push_back(std::string("not valid JSON: ") + e.what());
    return problems;
  }
  const auto need = [&](const json& o, const char* key, const char* where) -> const json* {
    if (!o.contains(key)) {
      problems.push_back(std::string("missing \"") + key + "\" in " + where);
      return nullptr;
    }
    return &o.at(key);
  };
  if (const json* s = need(j, "schema", "summary"); s && (!s->is_number_integer() || s->get<int>() != 1))
    problems.push_back("schema must be the integer 1");
  need(j, "config", "summary");
  need(j, "opt_reference", "summary");
  if (const json* a = need(j, "algorithms", "summary")) {
    if (!a->is_object()) {
      problems.push_back("algorithms must be an object");
    } else {
      for (auto it = a->begin(); it != a->end(); ++it) {
        const std::string where = "algorithms." + it.key();
        for (const char* key :
             {"algorithm", "horizon", "x_sol", "x_sol_digest", "phi_kind", "final_phi",
              "guarantees", "objective_evaluations", "visited_union_size"})
          need(it.value(), key, where.c_str());
        if (it.value().contains("x_sol") && !it.value().at("x_sol").is_array())
          problems.push_back(where + ".x_sol must be an array");
      }
    }
  }
  return problems;
}

CertificateRecord certify_from_summary(const CertifyRequest& req) {
  std::ifstream in(req.result_path);
  if (!in) throw ConfigError("cannot open result file: " + req.result_path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid result JSON: ") + e.what());
  }
  if (!j.contains("algorithms") || !j.at("algorithms").is_object() ||
      j.at("algorithms").empty())
    throw ConfigError("result file has no algorithm runs");
  std::string algo = req.algorithm;
  if (algo.empty()) {
    if (j.at("algorithms").size() != 1)
      throw ConfigError("result holds several runs; pass --algo");
    algo = j.at("algorithms").begin().key();
  }
  if (!j.at("algorithms").contains(algo))
    throw ConfigError("result has no run for algorithm \"" + algo + "\"");
  if (!j.contains("opt_reference") || j.at("opt_reference").is_null())
    throw ConfigError("result carries no OPT reference; certify needs one");

  const ExperimentConfig cfg = parse_config_json(j.at("config"));
  const ProblemInstance inst = build_instance(cfg);
  const std::vector<double> xs =
      j.at("algorithms").at(algo).at("x_sol").get<std::vector<double>>();
  const double opt_ref = j.at("opt_reference").at("value").get<double>();
  return certify(req.alpha, Vector(xs), *inst.objective, inst.constraint, inst.region, opt_ref,
                 req.eps);
}

}  // namespace cvxsub
