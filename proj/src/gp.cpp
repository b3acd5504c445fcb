/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ipred/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "ipred/kernels.hpp"
#include "ipred/rng.hpp"

namespace ipred {

namespace {

constexpr double kJitterStart = 1e-10;
constexpr double kJitterLimit = 1e-6;
constexpr double kVarianceFloor = -1e-10;

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.back() = hi;
  return out;
}

double clamp_variance(double v) {
  if (v >= 0.0) return v;
  if (v >= kVarianceFloor) return 0.0;
  throw FactorizationError(fmt::format("posterior variance {} is below the roundoff floor", v));
}

}  // namespace

double RbfKernel::operator()(double x, double y) const {
  const double d = x - y;
  return output_scale * output_scale * std::exp(-d * d / (2.0 * length_scale * length_scale));
}

void RbfKernel::validate() const {
  if (!(output_scale > 0.0) || !std::isfinite(output_scale))
    throw std::invalid_argument(fmt::format("output_scale must be positive, got {}", output_scale));
  if (!(length_scale > 0.0) || !std::isfinite(length_scale))
    throw std::invalid_argument(fmt::format("length_scale must be positive, got {}", length_scale));
}

void TrainingSet::validate() const {
  if (inputs.empty()) throw std::invalid_argument("training set is empty");
  if (inputs.size() != targets.size())
    throw std::invalid_argument(fmt::format("{} inputs but {} targets", inputs.size(), targets.size()));
  if (!(noise_variance >= 0.0)) throw std::invalid_argument("noise_variance must be non-negative");
  for (std::size_t i = 1; i < inputs.size(); ++i)
    if (!(inputs[i] > inputs[i - 1]))
      throw std::invalid_argument(fmt::format("training inputs must be strictly increasing (index {})", i));
}

Eigen::MatrixXd kernel_matrix(const RbfKernel& k, std::span<const double> a,
                              std::span<const double> b) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
  kernels::omp::fill_rbf(a, b, k.output_scale, k.length_scale,
                         std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

JitteredFactor factorize_with_jitter(const Eigen::MatrixXd& a, double scale) {
  JitteredFactor f;
  for (double rel = kJitterStart; rel <= kJitterLimit * 1.0000001; rel *= 10.0) {
    Eigen::MatrixXd shifted = a;
    shifted.diagonal().array() += rel * scale;
    f.llt.compute(shifted);
    if (f.llt.info() == Eigen::Success) {
      f.jitter = rel * scale;
      return f;
    }
  }
  throw FactorizationError(
      fmt::format("Cholesky factorization failed with jitter up to {}", kJitterLimit * scale));
}

GpModel::GpModel(RbfKernel kernel, std::vector<double> inputs, double noise_variance)
    : kernel_(kernel), inputs_(std::move(inputs)), noise_variance_(noise_variance) {
  kernel_.validate();
  if (inputs_.empty()) throw std::invalid_argument("training set is empty");
  if (!(noise_variance_ >= 0.0)) throw std::invalid_argument("noise_variance must be non-negative");
  for (std::size_t i = 1; i < inputs_.size(); ++i)
    if (!(inputs_[i] > inputs_[i - 1]))
      throw std::invalid_argument(fmt::format("training inputs must be strictly increasing (index {})", i));

  Eigen::MatrixXd k = kernel_matrix(kernel_, inputs_, inputs_);
  k.diagonal().array() += noise_variance_;
  factor_ = factorize_with_jitter(k, kernel_.output_scale * kernel_.output_scale);
}

Eigen::VectorXd GpModel::solve(std::span<const double> targets) const {
  if (targets.size() != inputs_.size())
    throw std::invalid_argument(fmt::format("{} targets for {} inputs", targets.size(), inputs_.size()));
  const Eigen::Map<const Eigen::VectorXd> y(targets.data(), static_cast<Eigen::Index>(targets.size()));
  return factor_.llt.solve(y);
}

PosteriorPrediction GpModel::predict(std::span<const double> targets, std::span<const double> query,
                                     bool full_covariance) const {
  if (query.empty()) throw std::invalid_argument("query set is empty");
  const Eigen::VectorXd alpha = solve(targets);
  const Eigen::MatrixXd cross = kernel_matrix(kernel_, inputs_, query);  // K(X, X*)
  const Eigen::VectorXd mean = cross.transpose() * alpha;
  // v = L^{-1} K(X, X*), posterior covariance = K(X*, X*) - v^T v.
  const Eigen::MatrixXd v = factor_.llt.matrixL().solve(cross);

  PosteriorPrediction out;
  out.query_inputs.assign(query.begin(), query.end());
  const std::size_t q = query.size();
  out.mean.resize(q);
  out.variance.resize(q);
  out.lower95.resize(q);
  out.upper95.resize(q);
  const double prior = kernel_.output_scale * kernel_.output_scale;
  for (std::size_t j = 0; j < q; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out.mean[j] = mean(jj);
    out.variance[j] = clamp_variance(prior - v.col(jj).squaredNorm());
    const double half = kCi95 * std::sqrt(out.variance[j] + noise_variance_);
    out.lower95[j] = out.mean[j] - half;
    out.upper95[j] = out.mean[j] + half;
  }
  if (full_covariance) {
    Eigen::MatrixXd cov = kernel_matrix(kernel_, query, query);
    cov.noalias() -= v.transpose() * v;
    out.full_covariance = std::move(cov);
  }
  return out;
}

double GpModel::log_marginal_likelihood(std::span<const double> targets) const {
  if (targets.size() != inputs_.size())
    throw std::invalid_argument(fmt::format("{} targets for {} inputs", targets.size(), inputs_.size()));
  const Eigen::Map<const Eigen::VectorXd> y(targets.data(), static_cast<Eigen::Index>(targets.size()));
  const Eigen::VectorXd z = factor_.llt.matrixL().solve(y);
  const auto n = static_cast<double>(targets.size());
  const double half_log_det = factor_.llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * z.squaredNorm() - half_log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

LinearPredictor GpModel::linear_predictor(std::span<const double> query) const {
  if (query.empty()) throw std::invalid_argument("query set is empty");
  const Eigen::MatrixXd cross = kernel_matrix(kernel_, inputs_, query);
  LinearPredictor out;
  out.weights = factor_.llt.solve(cross);
  out.latent_variance.resize(static_cast<Eigen::Index>(query.size()));
  const double prior = kernel_.output_scale * kernel_.output_scale;
  for (Eigen::Index j = 0; j < out.latent_variance.size(); ++j)
    out.latent_variance(j) = clamp_variance(prior - cross.col(j).dot(out.weights.col(j)));
  return out;
}

std::vector<std::vector<double>> sample_prior(const RbfKernel& k, std::span<const double> inputs,
                                              std::size_t n_paths, std::uint64_t seed) {
  k.validate();
  if (n_paths == 0) throw std::invalid_argument("n_paths must be at least 1");
  if (inputs.empty()) throw std::invalid_argument("inputs are empty");
  const Eigen::MatrixXd cov = kernel_matrix(k, inputs, inputs);
  const JitteredFactor f = factorize_with_jitter(cov, k.output_scale * k.output_scale);
  const Eigen::MatrixXd lower = f.llt.matrixL();

  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> paths;
  paths.reserve(n_paths);
  Eigen::VectorXd z(static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t p = 0; p < n_paths; ++p) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    const Eigen::VectorXd draw = lower * z;
    paths.emplace_back(draw.data(), draw.data() + draw.size());
  }
  return paths;
}

PosteriorPrediction posterior(const RbfKernel& k, const TrainingSet& train,
                              std::span<const double> query, bool full_covariance) {
  train.validate();
  const GpModel model(k, train.inputs, train.noise_variance);
  return model.predict(train.targets, query, full_covariance);
}

double log_marginal_likelihood(const RbfKernel& k, const TrainingSet& train) {
  train.validate();
  const GpModel model(k, train.inputs, train.noise_variance);
  return model.log_marginal_likelihood(train.targets);
}

std::vector<double> HyperparameterGrid::output_scales() const {
  return log_spaced(output_scale_min, output_scale_max, output_scale_points);
}

std::vector<double> HyperparameterGrid::length_scales() const {
  return log_spaced(length_scale_min, length_scale_max, length_scale_points);
}

void HyperparameterGrid::validate() const {
  if (output_scale_points == 0 || length_scale_points == 0)
    throw std::invalid_argument("hyperparameter grid needs at least one point per axis");
  if (!(output_scale_min > 0.0 && output_scale_max >= output_scale_min))
    throw std::invalid_argument("output scale range must satisfy 0 < min <= max");
  if (!(length_scale_min > 0.0 && length_scale_max >= length_scale_min))
    throw std::invalid_argument("length scale range must satisfy 0 < min <= max");
}

GridEvaluation evaluate_grid(const TrainingSet& train, const HyperparameterGrid& grid) {
  train.validate();
  grid.validate();
  GridEvaluation out;
  for (double sf : grid.output_scales())
    for (double ell : grid.length_scales()) out.kernels.push_back({sf, ell});
  out.log_likelihoods.resize(out.kernels.size());

  kernels::omp::map_indexed(out.log_likelihoods, [&](std::size_t i) {
    try {
      return GpModel(out.kernels[i], train.inputs, train.noise_variance).log_marginal_likelihood(train.targets);
    } catch (const FactorizationError&) {
      return -std::numeric_limits<double>::infinity();
    }
  });

  for (std::size_t i = 1; i < out.kernels.size(); ++i) {
    const double cur = out.log_likelihoods[i];
    const double best = out.log_likelihoods[out.best];
    if (cur > best || (cur == best && out.kernels[i].length_scale > out.kernels[out.best].length_scale))
      out.best = i;
  }
  return out;
}

RbfKernel tune_hyperparameters(const TrainingSet& train, const HyperparameterGrid& grid) {
  const GridEvaluation eval = evaluate_grid(train, grid);
  return eval.kernels[eval.best];
}

}  // namespace ipred
