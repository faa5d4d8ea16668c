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

#include "kgbench/hierarchy/gmm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "kgbench/util/digest.h"
#include "kgbench/util/error.h"
#include "kgbench/util/parallel.h"
#include "kgbench/util/rng.h"

namespace kgbench {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // ln(2*pi)
constexpr double kDeadComponentMass = 1e-8;

// Per-component constants for evaluating log N(z | mu, Sigma).
struct ComponentCache {
  std::vector<double> inv_chol;  // packed rows of L^{-1}, Sigma = L L^T (full form)
  Eigen::VectorXd inv_var;   // 1 / Sigma_jj (diagonal form)
  double log_norm = 0.0;     // -0.5 (d ln 2pi + ln det Sigma)
};

ComponentCache Prepare(const Eigen::MatrixXd& cov, CovarianceForm form, int k) {
  const auto d = cov.rows();
  ComponentCache c;
  double log_det = 0.0;
  if (form == CovarianceForm::kFull) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
      Fail(ErrorKind::kDegenerateFit,
           "component " + std::to_string(k) + " covariance is not positive definite");
    }
    const Eigen::MatrixXd l = llt.matrixL();
    for (Eigen::Index j = 0; j < d; ++j) {
      if (!(l(j, j) > 0.0) || !std::isfinite(l(j, j))) {
        Fail(ErrorKind::kDegenerateFit,
             "component " + std::to_string(k) + " covariance is singular");
      }
      log_det += 2.0 * std::log(l(j, j));
    }
    const Eigen::MatrixXd inv =
        l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(d, d));
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index s = 0; s <= r; ++s) c.inv_chol.push_back(inv(r, s));
    }
  } else {
    c.inv_var.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      if (!(cov(j, j) > 0.0) || !std::isfinite(cov(j, j))) {
        Fail(ErrorKind::kDegenerateFit,
             "component " + std::to_string(k) + " variance is singular");
      }
      c.inv_var[j] = 1.0 / cov(j, j);
      log_det += std::log(cov(j, j));
    }
  }
  c.log_norm = -0.5 * (static_cast<double>(d) * kLog2Pi + log_det);
  return c;
}

// Writes ln N(z_i | mu, Sigma) + offset for every point into out. `rows`
// holds the points row-major.
void LogDensities(const ComponentCache& c, CovarianceForm form, const std::vector<double>& rows,
                  Eigen::Index n, Eigen::Index d, const Eigen::VectorXd& mu, double offset,
                  double* out) {
  std::vector<double> diff(d);
  const double* m = mu.data();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* z = rows.data() + i * d;
    for (Eigen::Index j = 0; j < d; ++j) diff[j] = z[j] - m[j];
    double quad = 0.0;
    if (form == CovarianceForm::kFull) {
      const double* w = c.inv_chol.data();
      for (Eigen::Index r = 0; r < d; ++r) {
        double y = 0.0;
        for (Eigen::Index s = 0; s <= r; ++s) y += *w++ * diff[s];
        quad += y * y;
      }
    } else {
      const double* iv = c.inv_var.data();
      for (Eigen::Index j = 0; j < d; ++j) quad += diff[j] * diff[j] * iv[j];
    }
    out[i] = offset + c.log_norm - 0.5 * quad;
  }
}

struct EStep {
  double log_likelihood = 0.0;
  Eigen::VectorXd point_log_density;  // ln p(z_i)
  Eigen::MatrixXd gamma;
};

EStep Expectation(const Eigen::MatrixXd& x, const GaussianMixture& m) {
  const Eigen::Index n = x.rows();
  std::vector<ComponentCache> caches;
  caches.reserve(m.K);
  for (int k = 0; k < m.K; ++k) caches.push_back(Prepare(m.covariances[k], m.form, k));
  std::vector<double> rows(static_cast<size_t>(n * x.cols()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) rows[i * x.cols() + j] = x(i, j);
  }
  EStep e;
  e.gamma.resize(n, m.K);
  e.point_log_density.resize(n);
  std::vector<double> log_weights(m.K);
  for (int k = 0; k < m.K; ++k) {
    log_weights[k] = m.weights[k] > 0.0 ? std::log(m.weights[k])
                                        : -std::numeric_limits<double>::infinity();
  }
  for (int k = 0; k < m.K; ++k) {
    LogDensities(caches[k], m.form, rows, n, x.cols(), m.means[k], log_weights[k],
                 e.gamma.col(k).data());
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double best = e.gamma.row(i).maxCoeff();
    double sum = 0.0;
    for (int k = 0; k < m.K; ++k) {
      e.gamma(i, k) = std::exp(e.gamma(i, k) - best);
      sum += e.gamma(i, k);
    }
    const double lse = best + std::log(sum);
    for (int k = 0; k < m.K; ++k) e.gamma(i, k) /= sum;
    e.point_log_density[i] = lse;
    e.log_likelihood += lse;
  }
  return e;
}

Eigen::MatrixXd Regularize(Eigen::MatrixXd cov, CovarianceForm form, double eps) {
  if (form == CovarianceForm::kDiagonal) {
    cov = Eigen::MatrixXd(cov.diagonal().asDiagonal());
  }
  cov = 0.5 * (cov + cov.transpose());
  cov.diagonal().array() += eps;
  return cov;
}

Eigen::MatrixXd GlobalCovariance(const Eigen::MatrixXd& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  return centered.transpose() * centered / static_cast<double>(x.rows());
}

std::vector<Eigen::Index> KMeansPlusPlus(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  std::vector<Eigen::Index> centers;
  centers.push_back(static_cast<Eigen::Index>(rng.Uniform(n)));
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (x.row(i) - x.row(centers.back())).squaredNorm());
      total += d2[i];
    }
    Eigen::Index pick = 0;
    if (total <= 0.0) {
      pick = static_cast<Eigen::Index>(rng.Uniform(n));
    } else {
      double r = rng.UniformReal() * total;
      for (pick = 0; pick < n - 1; ++pick) {
        r -= d2[pick];
        if (r < 0.0) break;
      }
    }
    centers.push_back(pick);
  }
  return centers;
}

void Maximization(const Eigen::MatrixXd& x, const EStep& e, GaussianMixture& m,
                  const Eigen::MatrixXd& global_cov, double eps) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  std::vector<bool> used(n, false);
  bool reseeded = false;
  for (int k = 0; k < m.K; ++k) {
    const double nk = e.gamma.col(k).sum();
    if (nk < kDeadComponentMass) {
      // Reseed at the worst-explained point not already used.
      Eigen::Index worst = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (used[i]) continue;
        if (worst < 0 || e.point_log_density[i] < e.point_log_density[worst]) worst = i;
      }
      if (worst < 0) worst = 0;
      used[worst] = true;
      m.means[k] = x.row(worst).transpose();
      m.covariances[k] = Regularize(global_cov, m.form, eps);
      m.weights[k] = 1.0 / static_cast<double>(n);
      ++m.reseeded_components;
      reseeded = true;
      continue;
    }
    const double* g = e.gamma.col(k).data();
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double* col = x.col(j).data();
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) acc += g[i] * col[i];
      mu[j] = acc / nk;
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    const bool full = m.form == CovarianceForm::kFull;
    for (Eigen::Index r = 0; r < d; ++r) {
      const double* xr = x.col(r).data();
      for (Eigen::Index c = full ? 0 : r; c <= r; ++c) {
        const double* xc = x.col(c).data();
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) acc += g[i] * (xr[i] - mu[r]) * (xc[i] - mu[c]);
        cov(r, c) = cov(c, r) = acc / nk;
      }
    }
    m.means[k] = std::move(mu);
    m.covariances[k] = Regularize(std::move(cov), m.form, eps);
    m.weights[k] = nk / static_cast<double>(n);
  }
  if (reseeded) {
    double total = 0.0;
    for (double w : m.weights) total += w;
    for (double& w : m.weights) w /= total;
    m.iteration_trace.clear();
  }
}

}  // namespace

const char* BicPenaltyName(BicPenalty penalty) {
  return penalty == BicPenalty::kClusterCount ? "cluster_count" : "free_parameters";
}

BicPenalty ParseBicPenalty(const std::string& name) {
  if (name == "cluster_count") return BicPenalty::kClusterCount;
  if (name == "free_parameters") return BicPenalty::kFreeParameters;
  Fail(ErrorKind::kValidation, "unknown BIC penalty '" + name + "'");
}

double Bic(double log_likelihood, double penalty_units, int N) {
  return -2.0 * log_likelihood + penalty_units * std::log(static_cast<double>(N));
}

int FreeParameterCount(int K, int d, CovarianceForm form) {
  const int cov = form == CovarianceForm::kFull ? d * (d + 1) / 2 : d;
  return (K - 1) + K * d + K * cov;
}

double PenaltyUnits(BicPenalty penalty, int K, int d, CovarianceForm form) {
  return penalty == BicPenalty::kClusterCount ? static_cast<double>(K)
                                              : static_cast<double>(FreeParameterCount(K, d, form));
}

double RecomputeBic(const GaussianMixture& model) {
  return Bic(model.log_likelihood, PenaltyUnits(model.penalty, model.K, model.dim(), model.form),
             model.n_points);
}

std::pair<GaussianMixture, SoftAssignment> FitGmmEm(const Eigen::MatrixXd& points, int K,
                                                    uint64_t seed, const EmOptions& options) {
  Require(K >= 1, "GMM needs K >= 1");
  Require(points.rows() >= K, "GMM needs N >= K (N = " + std::to_string(points.rows()) +
                                  ", K = " + std::to_string(K) + ")");
  Require(points.cols() >= 1, "GMM points have no coordinates");
  Require(points.allFinite(), "GMM points must be finite");
  const Eigen::MatrixXd& x = points;
  const Eigen::Index d = x.cols();
  const double eps = options.regularization;

  GaussianMixture m;
  m.K = K;
  m.n_points = static_cast<int>(x.rows());
  m.form = d <= options.full_covariance_max_dim ? CovarianceForm::kFull
                                                : CovarianceForm::kDiagonal;
  const Eigen::MatrixXd global_cov = GlobalCovariance(x);
  Rng rng(seed);
  for (Eigen::Index c : KMeansPlusPlus(x, K, rng)) {
    m.means.push_back(x.row(c).transpose());
    m.covariances.push_back(Regularize(global_cov, m.form, eps));
    m.weights.push_back(1.0 / K);
  }

  EStep e;
  for (int iteration = 0;; ++iteration) {
    e = Expectation(x, m);
    const bool have_previous = !m.iteration_trace.empty();
    const double previous = have_previous ? m.iteration_trace.back() : 0.0;
    m.iteration_trace.push_back(e.log_likelihood);
    if (have_previous && std::abs(e.log_likelihood - previous) < options.tolerance) {
      m.converged = true;
      break;
    }
    if (iteration + 1 >= options.max_iterations) break;
    Maximization(x, e, m, global_cov, eps);
  }
  m.log_likelihood = e.log_likelihood;
  m.penalty = options.penalty;
  m.bic = RecomputeBic(m);
  return {std::move(m), SoftAssignment{std::move(e.gamma)}};
}

std::pair<GaussianMixture, SoftAssignment> FitGmmEm(const std::vector<ProjectedPoint>& points,
                                                    int K, uint64_t seed,
                                                    const EmOptions& options) {
  return FitGmmEm(PointsMatrix(points), K, seed, options);
}

ClusterCountSelection SelectClusterCount(const Eigen::MatrixXd& points, int k_max,
                                         uint64_t seed, int n_restarts,
                                         const EmOptions& options) {
  Require(points.rows() >= 2, "select_cluster_count needs N >= 2");
  Require(k_max >= 1, "k_max must be >= 1");
  Require(n_restarts >= 1, "n_restarts must be >= 1");
  const int upper = std::min<int>(k_max, static_cast<int>(points.rows()));
  ClusterCountSelection out;
  for (int k = 1; k <= upper; ++k) {
    std::vector<std::optional<GaussianMixture>> fits(n_restarts);
    ParallelFor(n_restarts, options.parallelism, [&](size_t r) {
      const uint64_t restart_seed = DigestToU64(std::to_string(seed) + "|K" +
                                                std::to_string(k) + "|r" + std::to_string(r));
      try {
        fits[r] = FitGmmEm(points, k, restart_seed, options).first;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kDegenerateFit) throw;
      }
    });
    const double min_mass = options.min_component_mass >= 0.0
                                ? options.min_component_mass
                                : static_cast<double>(points.cols() + 1);
    std::optional<GaussianMixture> best;
    int inadmissible = 0;
    for (auto& f : fits) {
      if (!f) continue;
      const double smallest = *std::min_element(f->weights.begin(), f->weights.end()) *
                              static_cast<double>(f->n_points);
      if (k > 1 && smallest < min_mass) {
        ++inadmissible;
        continue;
      }
      if (!best || f->log_likelihood > best->log_likelihood) best = std::move(f);
    }
    out.inadmissible_fits.push_back(inadmissible);
    if (!best) continue;
    out.candidate_k.push_back(k);
    out.bic_curve.push_back(best->bic);
    out.log_likelihood_curve.push_back(best->log_likelihood);
    if (out.best_k == 0 || best->bic < out.best.bic) {
      out.best_k = k;
      out.best = std::move(*best);
    }
  }
  if (out.best_k == 0) {
    Fail(ErrorKind::kDegenerateFit, "every candidate mixture was degenerate");
  }
  return out;
}

ClusterCountSelection SelectClusterCount(const std::vector<ProjectedPoint>& points,
                                         int k_max, uint64_t seed, int n_restarts,
                                         const EmOptions& options) {
  return SelectClusterCount(PointsMatrix(points), k_max, seed, n_restarts, options);
}

SoftAssignment SoftAssign(const GaussianMixture& model, const Eigen::MatrixXd& points) {
  Require(model.K >= 1, "soft_assign: empty model");
  Require(points.cols() == model.dim(),
          "soft_assign: point dimension " + std::to_string(points.cols()) +
              " does not match model dimension " + std::to_string(model.dim()));
  return {Expectation(points, model).gamma};
}

SoftAssignment SoftAssign(const GaussianMixture& model,
                          const std::vector<ProjectedPoint>& points) {
  return SoftAssign(model, PointsMatrix(points));
}

nlohmann::json MixtureSummary(const GaussianMixture& model) {
  nlohmann::json means = nlohmann::json::array();
  for (const auto& mu : model.means) means.push_back(std::vector<double>(mu.begin(), mu.end()));
  return {{"K", model.K},
          {"n_points", model.n_points},
          {"covariance_form", model.form == CovarianceForm::kFull ? "full" : "diagonal"},
          {"weights", model.weights},
          {"means", means},
          {"log_likelihood", model.log_likelihood},
          {"bic", model.bic},
          {"bic_penalty", BicPenaltyName(model.penalty)},
          {"iterations", model.iteration_trace.size()},
          {"converged", model.converged},
          {"reseeded_components", model.reseeded_components},
          {"iteration_trace", model.iteration_trace}};
}

}  // namespace kgbench
