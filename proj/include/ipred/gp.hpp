/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace ipred {

/// Squared-exponential covariance sf^2 exp(-(x - x')^2 / (2 l^2)) over time indices.
struct RbfKernel {
  double output_scale = 0.5;
  double length_scale = 2.5;

  double operator()(double x, double y) const;
  void validate() const;
};

/// Observations for a zero-mean GP. Inputs must be strictly increasing.
struct TrainingSet {
  std::vector<double> inputs;
  std::vector<double> targets;
  double noise_variance = 0.0;

  void validate() const;
};

struct PosteriorPrediction {
  std::vector<double> query_inputs;
  std::vector<double> mean;
  /// Latent posterior variance, diag of the posterior covariance.
  std::vector<double> variance;
  /// mean -/+ 1.96 sqrt(variance + noise_variance): observation-level band.
  std::vector<double> lower95;
  std::vector<double> upper95;
  std::optional<Eigen::MatrixXd> full_covariance;
};

/// Raised when K + (noise + jitter) I stays indefinite after jitter escalation.
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kCi95 = 1.96;

/// Entry (i, j) = k(a_i, b_j).
Eigen::MatrixXd kernel_matrix(const RbfKernel& k, std::span<const double> a,
                              std::span<const double> b);

/// Lower Cholesky factor of a + jitter I, with jitter starting at
/// 1e-10 * scale and growing x10 up to 1e-6 * scale.
struct JitteredFactor {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};
JitteredFactor factorize_with_jitter(const Eigen::MatrixXd& a, double scale);

/// Posterior mean as a fixed linear map of the training targets.
struct LinearPredictor {
  /// n_train x n_query; mean = weights^T y.
  Eigen::MatrixXd weights;
  Eigen::VectorXd latent_variance;
};

/// A GP conditioned on a fixed set of inputs. The factorization of
/// K(X, X) + noise I depends only on the inputs, so one model serves any
/// number of target vectors. Immutable after construction.
class GpModel {
 public:
  GpModel(RbfKernel kernel, std::vector<double> inputs, double noise_variance);

  const RbfKernel& kernel() const { return kernel_; }
  const std::vector<double>& inputs() const { return inputs_; }
  double noise_variance() const { return noise_variance_; }
  /// Diagonal jitter that was needed on top of the noise variance.
  double jitter() const { return factor_.jitter; }

  PosteriorPrediction predict(std::span<const double> targets, std::span<const double> query,
                              bool full_covariance = false) const;
  double log_marginal_likelihood(std::span<const double> targets) const;
  LinearPredictor linear_predictor(std::span<const double> query) const;

 private:
  Eigen::VectorXd solve(std::span<const double> targets) const;

  RbfKernel kernel_;
  std::vector<double> inputs_;
  double noise_variance_;
  JitteredFactor factor_;
};

/// Draws n_paths functions from N(0, K(X, X) + jitter I).
std::vector<std::vector<double>> sample_prior(const RbfKernel& k, std::span<const double> inputs,
                                              std::size_t n_paths, std::uint64_t seed);

PosteriorPrediction posterior(const RbfKernel& k, const TrainingSet& train,
                              std::span<const double> query, bool full_covariance = false);

double log_marginal_likelihood(const RbfKernel& k, const TrainingSet& train);

/// Log-spaced search ranges for the output and length scales.
struct HyperparameterGrid {
  double output_scale_min = 0.05;
  double output_scale_max = 5.0;
  std::size_t output_scale_points = 20;
  double length_scale_min = 0.25;
  double length_scale_max = 25.0;
  std::size_t length_scale_points = 20;

  std::vector<double> output_scales() const;
  std::vector<double> length_scales() const;
  void validate() const;
};

struct GridEvaluation {
  /// Row-major over (output_scale, length_scale).
  std::vector<RbfKernel> kernels;
  std::vector<double> log_likelihoods;
  std::size_t best = 0;
};

/// Log marginal likelihood at every grid point; best is the argmax with
/// exact ties broken toward the larger length scale.
GridEvaluation evaluate_grid(const TrainingSet& train, const HyperparameterGrid& grid);

RbfKernel tune_hyperparameters(const TrainingSet& train, const HyperparameterGrid& grid);

}  // namespace ipred
