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

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cvxsub/experiments.hpp"
#include "json.hpp"

namespace {

// Exit codes: 0 success, 1 config error, 2 data error, 3 numerical abort.
int dispatch(int argc, char** argv) {
  CLI::App app{"convex-submodular minimax solvers and experiment runners"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  std::string config_path, out_dir, algos_csv;
  std::int64_t seed_flag = -1;
  run->add_option("--config", config_path, "config JSON file")->required();
  run->add_option("--out", out_dir, "override the output directory");
  run->add_option("--seed", seed_flag, "override the top-level seed");
  run->add_option("--algos", algos_csv, "comma-separated algorithm list override");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "select and impute a ratings matrix");
  std::string ratings_path, ingest_out;
  int users = 0, movies = 0;
  ingest->add_option("--ratings", ratings_path, "ratings CSV (userId,movieId,rating,timestamp)")
      ->required();
  ingest->add_option("--users", users, "number of users to keep")->required();
  ingest->add_option("--movies", movies, "number of movies to keep")->required();
  ingest->add_option("--out", ingest_out, "output JSON file")->required();

  // certify
  auto* certify = app.add_subcommand("certify", "check alpha * phi(x_sol) <= OPT + eps");
  std::string result_path, algo;
  double alpha = 0.0, eps = 0.0;
  certify->add_option("--result", result_path, "summary.json from a run")->required();
  certify->add_option("--alpha", alpha, "approximation factor")->required();
  certify->add_option("--eps", eps, "slack epsilon")->required();
  certify->add_option("--algo", algo, "algorithm entry to certify");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    cvxsub::ExperimentConfig cfg = cvxsub::load_experiment_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (seed_flag >= 0) cfg.seed = static_cast<std::uint64_t>(seed_flag);
    if (!algos_csv.empty()) {
      cfg.algorithms.clear();
      std::string cur;
      for (char c : algos_csv + ",") {
        if (c == ',') {
          if (!cur.empty()) cfg.algorithms.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      if (cfg.algorithms.empty()) throw cvxsub::ConfigError("--algos parsed to an empty list");
    }
    const cvxsub::RunOutcome out = cvxsub::run_experiment(cfg);
    for (const std::string& f : out.files_written) std::cout << f << "\n";
    return 0;
  }
  if (ingest->parsed()) {
    const cvxsub::RatingsMatrix m = cvxsub::ingest_movielens(ratings_path, users, movies);
    cvxsub::write_ratings_matrix_json(m, ingest_out);
    std::cout << ingest_out << "\n";
    return 0;
  }
  if (certify->parsed()) {
    cvxsub::CertifyRequest req;
    req.result_path = result_path;
    req.algorithm = algo;
    req.alpha = alpha;
    req.eps = eps;
    const cvxsub::CertificateRecord rec = cvxsub::certify_from_summary(req);
    nlohmann::json j;
    j["alpha"] = rec.alpha;
    j["eps"] = rec.eps;
    j["phi_value"] = rec.phi_value;
    j["phi_is_exact"] = rec.phi_is_exact;
    j["lhs"] = rec.lhs;
    j["rhs"] = rec.rhs;
    j["opt_ref"] = rec.opt_ref;
    j["verdict"] = rec.verdict;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const cvxsub::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const cvxsub::PreconditionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const cvxsub::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const cvxsub::SizeError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const cvxsub::NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 3;
  }
}
