/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ipred/gp.hpp"
#include "ipred/kernels.hpp"
#include "ipred/rng.hpp"
#include "oracles.hpp"

using namespace ipred;

namespace {

std::vector<double> sorted_inputs(Rng& rng, std::size_t n, double span) {
  std::uniform_real_distribution<double> u(0.0, span);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

}  // namespace

TEST_CASE("RBF kernel values") {
  const RbfKernel k{0.5, 2.5};
  CHECK(k(3.0, 3.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(k(0.0, 2.5) == doctest::Approx(0.25 * std::exp(-0.5)).epsilon(1e-14));
  CHECK(k(0.0, 2.5) == doctest::Approx(0.151633).epsilon(1e-6 / 0.151633));
  CHECK(k(0.0, 1e3) < 1e-300);

  const std::vector<double> a{0.0, 2.5}, b{0.0, 2.5, 100.0};
  const auto m = kernel_matrix(k, a, b);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(1, 0) == doctest::Approx(0.151633).epsilon(1e-5));
  CHECK(m(0, 2) == doctest::Approx(0.0));

  CHECK_THROWS_AS((RbfKernel{0.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((RbfKernel{1.0, -1.0}.validate()), std::invalid_argument);
}

TEST_CASE("kernel matrix is PSD on random input sets") {
  Rng rng(3);
  std::uniform_real_distribution<double> scale(0.1, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = sorted_inputs(rng, 30, 40.0);
    const RbfKernel k{scale(rng), scale(rng)};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kernel_matrix(k, x, x));
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  }
}

TEST_CASE("prior sampling") {
  const RbfKernel k{0.5, 2.5};
  SUBCASE("shape and reproducibility") {
    const std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
    const auto paths = sample_prior(k, x, 3, 10);
    CHECK(paths.size() == 3);
    for (const auto& p : paths) CHECK(p.size() == x.size());
    CHECK(paths == sample_prior(k, x, 3, 10));
    CHECK_THROWS_AS(sample_prior(k, x, 0, 10), std::invalid_argument);
  }
  SUBCASE("single point is N(0, sf^2)") {
    const std::vector<double> x{4.0};
    const auto paths = sample_prior(k, x, 10000, 5);
    double s2 = 0.0;
    for (const auto& p : paths) s2 += p[0] * p[0];
    CHECK(s2 / 1e4 == doctest::Approx(0.25).epsilon(0.05));
  }
  SUBCASE("empirical covariance matches the kernel") {
    const std::vector<double> x{0.0, 1.0, 2.5, 6.0};
    const auto paths = sample_prior(k, x, 10000, 6);
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}, std::pair{2, 2}}) {
      double c = 0.0;
      for (const auto& p : paths) c += p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(j)];
      c /= 1e4;
      CHECK(c == doctest::Approx(k(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)])).epsilon(0.05));
    }
  }
  SUBCASE("densely spaced inputs need jitter but still factorize") {
    std::vector<double> x;
    for (int i = 0; i < 200; ++i) x.push_back(0.05 * i);
    CHECK_NOTHROW(sample_prior(k, x, 2, 1));
  }
}

TEST_CASE("noiseless interpolation reproduces training targets") {
  const RbfKernel k{0.5, 2.5};
  TrainingSet train{{1.0, 4.0, 9.0, 15.0}, {0.3, -0.2, 0.1, 0.4}, 0.0};
  const auto post = posterior(k, train, train.inputs);
  for (std::size_t i = 0; i < train.inputs.size(); ++i) {
    CHECK(std::abs(post.mean[i] - train.targets[i]) < 1e-8);
    CHECK(post.variance[i] <= 1e-8);
    CHECK(post.variance[i] >= 0.0);
  }
}

TEST_CASE("far from data the posterior reverts to the prior") {
  const RbfKernel k{0.5, 2.5};
  TrainingSet train{{1.0, 2.0, 3.0}, {1.0, 0.5, -0.3}, 1e-3};
  const std::vector<double> q{500.0};
  const auto post = posterior(k, train, q);
  CHECK(std::abs(post.mean[0]) < 1e-12);
  CHECK(post.variance[0] == doctest::Approx(0.25).epsilon(1e-12));
  // observation-level band includes the noise variance
  CHECK(post.upper95[0] == doctest::Approx(1.96 * std::sqrt(0.25 + 1e-3)).epsilon(1e-12));
}

TEST_CASE("factorized posterior equals the explicit-inverse oracle") {
  Rng rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> size(2, 50);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = sorted_inputs(rng, static_cast<std::size_t>(size(rng)), 60.0);
    const auto q = sorted_inputs(rng, static_cast<std::size_t>(size(rng)) / 2 + 1, 70.0);
    const RbfKernel k{0.2 + 2.0 * unit(rng), 0.5 + 4.0 * unit(rng)};
    std::vector<double> y(x.size());
    for (auto& v : y) v = normal(rng);
    const double noise = k.output_scale * k.output_scale * std::pow(10.0, -3.0 + 2.0 * unit(rng));

    const GpModel model(k, x, noise);
    const auto post = model.predict(y, q, true);
    const auto ref = oracle::posterior(k.output_scale, k.length_scale, noise + model.jitter(), x, y, q);
    double worst = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      worst = std::max(worst, std::abs(post.mean[i] - ref.mean[i]));
      for (std::size_t j = 0; j < q.size(); ++j)
        worst = std::max(worst, std::abs((*post.full_covariance)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                         ref.covariance[i][j]));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("posterior invariants") {
  Rng rng(99);
  std::normal_distribution<double> normal;
  const RbfKernel k{0.5, 2.5};
  for (int trial = 0; trial < 30; ++trial) {
    const auto x = sorted_inputs(rng, 25, 50.0);
    std::vector<double> y(x.size());
    for (auto& v : y) v = 0.5 * normal(rng);
    const TrainingSet train{x, y, 1e-3};
    const auto q = sorted_inputs(rng, 12, 60.0);
    const auto full = posterior(k, train, q);

    for (std::size_t i = 0; i < q.size(); ++i) {
      CHECK(full.variance[i] <= 0.25 + 1e-8);
      CHECK(full.lower95[i] <= full.mean[i]);
      CHECK(full.mean[i] <= full.upper95[i]);
    }

    // marginalization: predicting on a subset equals restricting the full prediction
    const std::vector<double> sub{q[1], q[4], q[7]};
    const auto part = posterior(k, train, sub);
    for (std::size_t i = 0; i < sub.size(); ++i) {
      const std::size_t src = i == 0 ? 1 : i == 1 ? 4 : 7;
      CHECK(std::abs(part.mean[i] - full.mean[src]) < 1e-8);
      CHECK(std::abs(part.variance[i] - full.variance[src]) < 1e-8);
    }

    // an observation at the query point never increases its variance
    const double at = q[3];
    if (std::find(x.begin(), x.end(), at) == x.end()) {
      TrainingSet more = train;
      const auto pos = std::lower_bound(more.inputs.begin(), more.inputs.end(), at) - more.inputs.begin();
      more.inputs.insert(more.inputs.begin() + pos, at);
      more.targets.insert(more.targets.begin() + pos, 0.1);
      const std::vector<double> one{at};
      CHECK(posterior(k, more, one).variance[0] <= full.variance[3] + 1e-8);
    }
  }
}

TEST_CASE("training set validation") {
  const RbfKernel k{};
  const std::vector<double> q{1.0};
  CHECK_THROWS_AS(posterior(k, TrainingSet{{1.0, 1.0}, {0.0, 0.0}, 0.0}, q), std::invalid_argument);
  CHECK_THROWS_AS(posterior(k, TrainingSet{{2.0, 1.0}, {0.0, 0.0}, 0.0}, q), std::invalid_argument);
  CHECK_THROWS_AS(posterior(k, TrainingSet{{1.0}, {0.0, 0.0}, 0.0}, q), std::invalid_argument);
  CHECK_THROWS_AS(posterior(k, TrainingSet{{}, {}, 0.0}, q), std::invalid_argument);
  CHECK_THROWS_AS(posterior(k, TrainingSet{{1.0}, {0.0}, 0.0}, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("log marginal likelihood") {
  SUBCASE("scalar Gaussian density at zero") {
    const double lml = log_marginal_likelihood({1.0, 1.0}, TrainingSet{{0.0}, {0.0}, 0.0});
    CHECK(lml == doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-10));
    CHECK(lml == doctest::Approx(-0.918939).epsilon(1e-6));
  }
  SUBCASE("matches the quadratic-form and log-determinant oracle") {
    Rng rng(17);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = sorted_inputs(rng, 3 + static_cast<std::size_t>(trial % 48), 80.0);
      std::vector<double> y(x.size());
      for (auto& v : y) v = normal(rng);
      const RbfKernel k{0.3 + unit(rng), 0.5 + 3.0 * unit(rng)};
      const double noise = 1e-2 * unit(rng) + 1e-3;
      const GpModel model(k, x, noise);
      const double ref = oracle::log_marginal_likelihood(k.output_scale, k.length_scale, noise + model.jitter(), x, y);
      CHECK(std::abs(model.log_marginal_likelihood(y) - ref) < 1e-8);
    }
  }
  SUBCASE("inflating the data lowers the likelihood under a fitted scale") {
    std::vector<double> x;
    for (int i = 0; i < 40; ++i) x.push_back(i);
    const RbfKernel truth{0.5, 2.5};
    auto y = sample_prior(truth, x, 1, 8).front();
    const TrainingSet train{x, y, 1e-3};
    const RbfKernel fit = tune_hyperparameters(train, HyperparameterGrid{});
    TrainingSet scaled = train;
    for (auto& v : scaled.targets) v *= 10.0;
    CHECK(log_marginal_likelihood(fit, scaled) < log_marginal_likelihood(fit, train));
  }
}

TEST_CASE("grid tuning") {
  std::vector<double> x;
  for (int i = 0; i < 30; ++i) x.push_back(i);

  SUBCASE("degenerate one-point grid") {
    const HyperparameterGrid grid{0.7, 0.7, 1, 3.0, 3.0, 1};
    const TrainingSet train{x, std::vector<double>(x.size(), 0.2), 1e-3};
    const auto k = tune_hyperparameters(train, grid);
    CHECK(k.output_scale == 0.7);
    CHECK(k.length_scale == 3.0);
  }
  SUBCASE("no signal picks the smallest output scale") {
    const TrainingSet train{x, std::vector<double>(x.size(), 0.0), 1e-3};
    const HyperparameterGrid grid{};
    const auto k = tune_hyperparameters(train, grid);
    CHECK(k.output_scale == doctest::Approx(grid.output_scale_min));
  }
  SUBCASE("grid axes are log spaced and inclusive") {
    const HyperparameterGrid grid{};
    const auto ls = grid.length_scales();
    CHECK(ls.size() == 20);
    CHECK(ls.front() == doctest::Approx(0.25));
    CHECK(ls.back() == 25.0);
    CHECK(ls[1] / ls[0] == doctest::Approx(ls[19] / ls[18]));
  }
  SUBCASE("serial and parallel grid evaluation agree") {
    auto y = sample_prior({0.5, 2.5}, x, 1, 3).front();
    const TrainingSet train{x, y, 1e-3};
    const HyperparameterGrid grid{0.1, 2.0, 6, 0.5, 10.0, 7};
    const auto eval = evaluate_grid(train, grid);
    std::vector<double> serial(eval.kernels.size());
    kernels::serial::map_indexed(serial, [&](std::size_t i) { return log_marginal_likelihood(eval.kernels[i], train); });
    CHECK(serial == eval.log_likelihoods);
    CHECK(eval.log_likelihoods[eval.best] == *std::max_element(serial.begin(), serial.end()));
  }
}

TEST_CASE("grid tuning recovers the generating length scale") {
  std::vector<double> x;
  for (int i = 0; i < 75; ++i) x.push_back(i);
  const RbfKernel truth{0.5, 2.5};
  const HyperparameterGrid grid{};
  int hits = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    auto y = sample_prior(truth, x, 1, derive_seed(55, Stream::synthetic, trial)).front();
    Rng rng(trial);
    std::normal_distribution<double> noise(0.0, std::sqrt(1e-3));
    for (auto& v : y) v += noise(rng);
    const auto k = tune_hyperparameters(TrainingSet{x, y, 1e-3}, grid);
    if (k.length_scale >= 1.25 && k.length_scale <= 5.0) ++hits;
  }
  CHECK(hits >= 80);
}
