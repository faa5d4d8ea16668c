// Copyright 2026 The kgbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KGBENCH_HIERARCHY_GMM_H_
#define KGBENCH_HIERARCHY_GMM_H_

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kgbench/hierarchy/projection.h"

namespace kgbench {

enum class CovarianceForm { kFull, kDiagonal };

// What multiplies ln N in the BIC penalty. kClusterCount charges K itself;
// kFreeParameters charges the number of free mixture parameters, which is
// what keeps BIC from splitting a single Gaussian into several components.
enum class BicPenalty { kClusterCount, kFreeParameters };

const char* BicPenaltyName(BicPenalty penalty);
BicPenalty ParseBicPenalty(const std::string& name);

struct GaussianMixture {
  int K = 0;
  int n_points = 0;
  CovarianceForm form = CovarianceForm::kFull;
  std::vector<double> weights;               // simplex
  std::vector<Eigen::VectorXd> means;        // K x d
  std::vector<Eigen::MatrixXd> covariances;  // K symmetric PD d x d
  double log_likelihood = 0.0;
  double bic = 0.0;
  BicPenalty penalty = BicPenalty::kFreeParameters;
  // Log-likelihood after every E-step. Restarts from empty when a dead
  // component is reseeded, so it is non-decreasing within one EM run.
  std::vector<double> iteration_trace;
  int reseeded_components = 0;
  bool converged = false;

  int dim() const { return means.empty() ? 0 : static_cast<int>(means.front().size()); }
};

struct SoftAssignment {
  Eigen::MatrixXd gamma;  // N x K responsibilities, rows sum to 1
};

struct EmOptions {
  double tolerance = 1e-7;          // stop once |delta log-likelihood| < tolerance
  int max_iterations = 300;
  double regularization = 1e-6;     // added to every covariance diagonal
  int full_covariance_max_dim = 16; // diagonal covariances above this
  int parallelism = 1;              // concurrent restarts in SelectClusterCount
  BicPenalty penalty = BicPenalty::kFreeParameters;
  // SelectClusterCount skips fits where some component carries less
  // responsibility mass than this; negative means d + 1.
  double min_component_mass = -1.0;
};

// -2 ln L + units * ln N.
double Bic(double log_likelihood, double penalty_units, int N);

// Weights (K - 1), means (K d) and covariances (K d(d+1)/2 full, K d diagonal).
int FreeParameterCount(int K, int d, CovarianceForm form);

double PenaltyUnits(BicPenalty penalty, int K, int d, CovarianceForm form);

// Recomputes the stored criterion from log_likelihood, K, N and the form.
double RecomputeBic(const GaussianMixture& model);

// EM for a K-component mixture from a seeded k-means++ start. Throws
// kValidation if N < K and kDegenerateFit if a covariance stays singular
// after regularization.
std::pair<GaussianMixture, SoftAssignment> FitGmmEm(const Eigen::MatrixXd& points, int K,
                                                    uint64_t seed,
                                                    const EmOptions& options = {});
std::pair<GaussianMixture, SoftAssignment> FitGmmEm(
    const std::vector<ProjectedPoint>& points, int K, uint64_t seed,
    const EmOptions& options = {});

struct ClusterCountSelection {
  int best_k = 0;
  GaussianMixture best;
  std::vector<int> candidate_k;
  std::vector<double> bic_curve;
  std::vector<double> log_likelihood_curve;
  std::vector<int> inadmissible_fits;  // per K = 1..min(k_max, N), fitted or not
};

// Fits K = 1..min(k_max, N), keeping the best-likelihood admissible restart
// per K, and returns the BIC minimizer (ties go to the smaller K). A fit is
// admissible when every component holds at least min_component_mass points.
ClusterCountSelection SelectClusterCount(const Eigen::MatrixXd& points, int k_max,
                                         uint64_t seed, int n_restarts = 4,
                                         const EmOptions& options = {});
ClusterCountSelection SelectClusterCount(const std::vector<ProjectedPoint>& points,
                                         int k_max, uint64_t seed, int n_restarts = 4,
                                         const EmOptions& options = {});

SoftAssignment SoftAssign(const GaussianMixture& model, const Eigen::MatrixXd& points);
SoftAssignment SoftAssign(const GaussianMixture& model,
                          const std::vector<ProjectedPoint>& points);

// Summary for reports: K, weights, means, log-likelihood, BIC, trace.
nlohmann::json MixtureSummary(const GaussianMixture& model);

}  // namespace kgbench

#endif  // KGBENCH_HIERARCHY_GMM_H_
