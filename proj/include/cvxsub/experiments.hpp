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

#ifndef CVXSUB_EXPERIMENTS_HPP
#define CVXSUB_EXPERIMENTS_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cvxsub/core.hpp"
#include "cvxsub/evaluation.hpp"
#include "cvxsub/objectives.hpp"
#include "cvxsub/solvers.hpp"

namespace cvxsub {

// Dense ratings matrix after selection and imputation, with maps back to the
// source ids and the observed-cell mask.
struct RatingsMatrix {
  int users = 0;
  int items = 0;
  std::vector<double> values;         // row-major, entries in [0,5]
  std::vector<std::uint8_t> observed; // 1 where the source file had a rating
  std::vector<long long> user_ids;
  std::vector<long long> movie_ids;
};

// Reads a `userId,movieId,rating,timestamp` CSV, keeps the v most-rated
// movies (ties to the smaller movie id), then the u users with the most
// ratings restricted to those movies (ties to the smaller user id), and
// imputes missing cells by the user's row mean (global mean for empty rows).
RatingsMatrix ingest_movielens(const std::string& path, int u, int v);

void write_ratings_matrix_json(const RatingsMatrix& m, const std::string& path);
RatingsMatrix read_ratings_matrix_json(const std::string& path);

struct ProblemInstance {
  std::shared_ptr<Objective> objective;
  MatroidConstraint constraint = MatroidConstraint::uniform(1, 0);
  FeasibleRegion region = FeasibleRegion::capped_simplex(0, 1);
};

// Synthetic facility-location case: Q_ij = |A|^T |A| + 0.1 I with A entries
// i.i.d. uniform(0,1) per pair, Uniform(k), and unit balls per block
// intersected with the nonnegative orthant.
ProblemInstance generate_synthetic_case(int m, int n, int k, double lambda, std::uint64_t seed);

// Attack instance around a (completed) rating matrix: Frobenius budget
// epsilon = budget_fraction * users * items around the baseline, entries
// boxed to [0,5], Uniform(k) over item columns.
ProblemInstance build_attack_case(const RatingsMatrix& ratings, int k, double budget_fraction);

struct SolverSettings {
  int horizon = 200;
  std::string step_kind = "c_over_sqrt_t";  // or "constant"
  double step_c = 1.0;
  int trace_every = 0;  // 0 = auto (about 200 trace records)
  int estimator_samples = 200;
  bool estimator_antithetic = false;
  bool exact_extension = false;
  bool allow_unsafe_step = false;
  std::optional<double> l_y_override;
};

struct ExperimentConfig {
  std::string kind;  // "synthetic_case" or "movielens_attack"
  // synthetic_case
  int m = 4;
  int n = 8;
  int k = 3;
  double lambda = 1.0;
  std::optional<std::uint64_t> instance_seed;  // defaults to the top-level seed
  // movielens_attack
  std::string ratings_path;
  int users = 50;
  int movies = 200;
  int attack_k = 5;
  double budget_fraction = 0.005;

  std::vector<std::string> algorithms;  // subset of gg, egg, grg, egrg, egce
  SolverSettings solver_defaults;
  std::map<std::string, SolverSettings> per_algorithm;

  std::string output_dir = "results";
  bool emit_csv = true;
  bool emit_json = true;
  std::uint64_t seed = 0;

  bool compute_opt_reference = true;  // enumerable instances only
  double opt_tol = 1e-4;
  int opt_max_iters = 60000;
};

// Parses the JSON config document; unknown fields anywhere are ConfigErrors.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

ProblemInstance build_instance(const ExperimentConfig& cfg);

SolverConfig make_solver_config(const ExperimentConfig& cfg, const std::string& algorithm);
SolveResult run_algorithm(const std::string& algorithm, const ProblemInstance& inst,
                          const SolverConfig& scfg);

struct RunCsvRow {
  int t = 0;
  double gamma = 0.0;
  double phi = 0.0;
  double error_vs_final = 0.0;
  std::optional<double> error_vs_opt;
  double wall_ms = 0.0;
};

// RFC-4180-style CSV: comma separator, \n line endings, header row, reals
// printed with 17 significant digits.
void write_run_csv(const std::string& path, const std::vector<RunCsvRow>& rows, bool with_opt);
std::string format_real(double v);

struct RunOutcome {
  std::vector<std::string> files_written;
  std::string summary_path;
};

// Runs every configured algorithm, writes one CSV per algorithm plus a
// versioned JSON summary (config echo, x_sol digest, certificates, and the
// no-attack baseline for attack experiments). On a solver abort the partial
// files are removed and the error rethrown.
RunOutcome run_experiment(const ExperimentConfig& cfg);

// Structural check of a summary document against the documented schema;
// returns human-readable problems (empty means valid).
std::vector<std::string> validate_summary_json(const std::string& json_text);

// FNV-1a over the canonical 17-digit decimal rendering of the entries.
std::string vector_digest(const Vector& v);

struct CertifyRequest {
  std::string result_path;  // summary.json from run_experiment
  std::string algorithm;    // optional when the summary holds a single run
  double alpha = 0.0;
  double eps = 0.0;
};

// Re-builds the instance from the summary's config echo, re-evaluates the
// stored solution and checks alpha * phi(x_sol) <= opt_ref + eps.
CertificateRecord certify_from_summary(const CertifyRequest& req);

}  // namespace cvxsub

#endif  // CVXSUB_EXPERIMENTS_HPP
