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

#include "kgbench/hierarchy/projection.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kgbench/util/error.h"
#include "kgbench/util/rng.h"

namespace kgbench {
namespace {

std::vector<double> Ranks(const std::vector<double>& values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double Pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 && sbb == 0.0) return 1.0;
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<double> PairwiseDistances(const Eigen::MatrixXd& x) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < x.rows(); ++j) {
      out.push_back((x.row(i) - x.row(j)).norm());
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd PcaProjector::Fit(const Eigen::MatrixXd& x, int target_dim) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  Require(target_dim >= 1 && target_dim < d, "projection target_dim out of range");
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);

  Rng rng(seed_);
  Eigen::MatrixXd components(d, target_dim);
  auto orthogonalize = [&](Eigen::VectorXd& v, int upto) {
    for (int c = 0; c < upto; ++c) v -= components.col(c).dot(v) * components.col(c);
  };
  for (int c = 0; c < target_dim; ++c) {
    Eigen::VectorXd v(d);
    for (Eigen::Index k = 0; k < d; ++k) v[k] = rng.Normal();
    orthogonalize(v, c);
    v.normalize();
    for (int it = 0; it < max_iterations_; ++it) {
      Eigen::VectorXd w = cov * v;
      orthogonalize(w, c);
      const double norm = w.norm();
      // Remaining spectrum is null: any orthonormal completion will do.
      if (norm < 1e-14) break;
      w /= norm;
      const double delta = (w - v).norm();
      v = w;
      if (delta < tolerance_) break;
    }
    orthogonalize(v, c);
    v.normalize();
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    components.col(c) = v;
  }
  return centered * components;
}

double PairwiseDistanceRankCorrelation(const Eigen::MatrixXd& source,
                                       const Eigen::MatrixXd& projected) {
  const auto a = PairwiseDistances(source);
  const auto b = PairwiseDistances(projected);
  if (a.size() < 2) return 1.0;
  return Pearson(Ranks(a), Ranks(b));
}

Projection ReduceDimensions(const std::vector<EmbeddingVector>& vectors,
                            const std::vector<std::string>& ids, int target_dim,
                            Projector& projector) {
  Require(vectors.size() >= 2, "reduce_dimensions needs at least 2 vectors");
  Require(ids.size() == vectors.size(), "reduce_dimensions: id count mismatch");
  const size_t d = vectors.front().values.size();
  Require(target_dim >= 1, "target_dim must be positive");
  Require(static_cast<size_t>(target_dim) < d,
          "target_dim " + std::to_string(target_dim) +
              " must be below the source dimension " + std::to_string(d));
  Eigen::MatrixXd x(vectors.size(), d);
  for (size_t i = 0; i < vectors.size(); ++i) {
    Require(vectors[i].values.size() == d, "reduce_dimensions: dimension mismatch");
    for (size_t k = 0; k < d; ++k) x(i, k) = vectors[i].values[k];
  }
  const Eigen::MatrixXd z = projector.Fit(x, target_dim);
  Projection out;
  out.rank_correlation = PairwiseDistanceRankCorrelation(x, z);
  for (size_t i = 0; i < vectors.size(); ++i) {
    ProjectedPoint p{ids[i], std::vector<double>(target_dim), projector.id()};
    for (int k = 0; k < target_dim; ++k) p.z[k] = z(i, k);
    out.points.push_back(std::move(p));
  }
  return out;
}

Eigen::MatrixXd PointsMatrix(const std::vector<ProjectedPoint>& points) {
  Require(!points.empty(), "no points");
  const size_t d = points.front().z.size();
  Eigen::MatrixXd x(points.size(), d);
  for (size_t i = 0; i < points.size(); ++i) {
    Require(points[i].z.size() == d, "points differ in dimension");
    Require(points[i].projector_id == points.front().projector_id,
            "points come from different projectors");
    for (size_t k = 0; k < d; ++k) {
      Require(std::isfinite(points[i].z[k]), "non-finite point coordinate");
      x(i, k) = points[i].z[k];
    }
  }
  return x;
}

}  // namespace kgbench
