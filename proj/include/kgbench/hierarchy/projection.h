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

#ifndef KGBENCH_HIERARCHY_PROJECTION_H_
#define KGBENCH_HIERARCHY_PROJECTION_H_

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "kgbench/providers/embedding.h"

namespace kgbench {

struct ProjectedPoint {
  std::string chunk_id;
  std::vector<double> z;
  std::string projector_id;
};

// Pluggable dimensionality reduction stage. A manifold learner can be slotted
// in by implementing this interface; downstream clustering only sees points.
class Projector {
 public:
  virtual ~Projector() = default;
  virtual std::string id() const = 0;
  // rows of `x` are points; returns an N x target_dim matrix.
  virtual Eigen::MatrixXd Fit(const Eigen::MatrixXd& x, int target_dim) = 0;
};

// Principal components by seeded power iteration with Gram-Schmidt deflation.
// Component signs are fixed so the largest-magnitude loading is positive.
class PcaProjector : public Projector {
 public:
  explicit PcaProjector(uint64_t seed = 0, int max_iterations = 2000,
                        double tolerance = 1e-12)
      : seed_(seed), max_iterations_(max_iterations), tolerance_(tolerance) {}
  std::string id() const override { return "pca-power-iteration"; }
  Eigen::MatrixXd Fit(const Eigen::MatrixXd& x, int target_dim) override;

 private:
  uint64_t seed_;
  int max_iterations_;
  double tolerance_;
};

struct Projection {
  std::vector<ProjectedPoint> points;
  // Spearman correlation between source and projected pairwise distances.
  double rank_correlation = 0.0;
};

// Requires >= 2 vectors of one dimension and target_dim < that dimension.
Projection ReduceDimensions(const std::vector<EmbeddingVector>& vectors,
                            const std::vector<std::string>& ids, int target_dim,
                            Projector& projector);

double PairwiseDistanceRankCorrelation(const Eigen::MatrixXd& source,
                                       const Eigen::MatrixXd& projected);

// Stacks points into an N x d matrix; all must share dimension and projector.
Eigen::MatrixXd PointsMatrix(const std::vector<ProjectedPoint>& points);

}  // namespace kgbench

#endif  // KGBENCH_HIERARCHY_PROJECTION_H_
