#include <random>
#include <vector>

#include <doctest.h>

#include "hmp/linear_model.hpp"
#include "oracles.hpp"

using namespace hmp;

namespace {

// Noiseless samples y = θ*ᵀ φ with Gaussian regressors.
std::vector<LinearSample> teacher_samples(const Eigen::MatrixXd& theta_star, int n,
                                          std::mt19937_64& rng) {
  std::vector<LinearSample> out;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd phi = oracle::gaussian_vec(static_cast<int>(theta_star.rows()), rng);
    out.push_back({phi, theta_star.transpose() * phi});
  }
  return out;
}

}  // namespace

TEST_CASE("lrm_predict: zero theta and row selection") {
  std::mt19937_64 rng(1);
  const auto phi = oracle::gaussian_vec(10, rng);
  CHECK(lrm_predict(LinearParams::zeros(10, 9), phi).isZero());

  LinearParams p{oracle::gaussian(10, 9, rng)};
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(10, 0);
  CHECK(lrm_predict(p, e1) == Eigen::VectorXd(p.theta.row(0).transpose()));
  CHECK_THROWS_AS(lrm_predict(p, Eigen::VectorXd::Zero(11)), DimensionError);
}

TEST_CASE("lrm_predict is linear in the regressor") {
  std::mt19937_64 rng(2);
  LinearParams p{oracle::gaussian(10, 9, rng)};
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::gaussian_vec(10, rng);
    const auto b = oracle::gaussian_vec(10, rng);
    const double c = std::normal_distribution<double>()(rng);
    CHECK((lrm_predict(p, a + b) - lrm_predict(p, a) - lrm_predict(p, b)).norm() < 1e-12);
    CHECK((lrm_predict(p, c * a) - c * lrm_predict(p, a)).norm() < 1e-12);
  }
}

TEST_CASE("sample_error is the squared residual norm") {
  LinearParams scalar{Eigen::MatrixXd::Constant(1, 1, 2.0)};
  CHECK(sample_error(scalar, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, 5.0)) ==
        doctest::Approx(9.0));

  std::mt19937_64 rng(3);
  LinearParams p{oracle::gaussian(10, 9, rng)};
  const auto phi = oracle::gaussian_vec(10, rng);
  CHECK(sample_error(p, phi, lrm_predict(p, phi)) == doctest::Approx(0.0));
  const auto t = oracle::gaussian_vec(9, rng);
  CHECK(sample_error(LinearParams::zeros(10, 9), phi, t) == doctest::Approx(t.squaredNorm()));
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    LinearParams p{oracle::gaussian(10, 9, rng)};
    const auto phi = oracle::gaussian_vec(10, rng);
    const auto t = oracle::gaussian_vec(9, rng);
    const Eigen::MatrixXd g = sample_error_gradient(p, phi, t);
    Eigen::MatrixXd numeric(10, 9);
    const double eps = 1e-5;
    for (Eigen::Index i = 0; i < p.theta.size(); ++i) {
      LinearParams plus = p, minus = p;
      plus.theta.data()[i] += eps;
      minus.theta.data()[i] -= eps;
      numeric.data()[i] = (sample_error(plus, phi, t) - sample_error(minus, phi, t)) / (2 * eps);
    }
    CHECK(oracle::max_relative(g, numeric) <= 1e-6);
  }
}

TEST_CASE("sgd_step: scalar example and fixed point") {
  LinearParams zero{Eigen::MatrixXd::Zero(1, 1)};
  const std::vector<LinearSample> batch{{Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)}};
  CHECK(sgd_step(zero, batch, 0.5).theta(0, 0) == doctest::Approx(1.0));

  std::mt19937_64 rng(5);
  LinearParams p{oracle::gaussian(10, 9, rng)};
  const auto exact = teacher_samples(p.theta, 16, rng);
  CHECK(sgd_step(p, exact, 0.1).theta.isApprox(p.theta, 1e-14));

  CHECK_THROWS_AS(sgd_step(p, std::span<const LinearSample>{}, 0.1), ArgumentError);
}

TEST_CASE("a small sgd step does not increase the minibatch loss") {
  std::mt19937_64 rng(6);
  LinearParams p{oracle::gaussian(10, 9, rng)};
  std::vector<LinearSample> batch;
  for (int i = 0; i < 16; ++i) batch.push_back({oracle::gaussian_vec(10, rng), oracle::gaussian_vec(9, rng)});
  const auto loss = [&](const LinearParams& q) {
    double s = 0.0;
    for (const auto& b : batch) s += sample_error(q, b.phi, b.target);
    return s;
  };
  CHECK(loss(sgd_step(p, batch, 1e-4)) <= loss(p));
}

TEST_CASE("SGD on noiseless data reaches the normal-equations solution") {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd theta_star = oracle::gaussian(10, 9, rng);
  const auto samples = teacher_samples(theta_star, 500, rng);

  Eigen::MatrixXd X(500, 10), Y(500, 9);
  for (int i = 0; i < 500; ++i) {
    X.row(i) = samples[i].phi.transpose();
    Y.row(i) = samples[i].target.transpose();
  }
  const Eigen::MatrixXd ls = oracle::normal_equations(X, Y);

  TrainingConfig cfg{0.01, 100, 16, 11};
  const auto result = train_linear(std::span<const LinearSample>(samples), cfg);
  CHECK(oracle::relative_error(result.params.theta, ls) <= 1e-2);

  // the fitted model reproduces the generator
  for (int i = 0; i < 10; ++i) {
    const auto phi = oracle::gaussian_vec(10, rng);
    CHECK((lrm_predict(result.params, phi) - theta_star.transpose() * phi).norm() <
          1e-6 * (1.0 + (theta_star.transpose() * phi).norm()) + 1e-2 * phi.norm());
  }
  CHECK(result.trace.epoch_loss.back() <= result.trace.epoch_loss.front());
}

TEST_CASE("training is deterministic per seed and rejects tiny datasets") {
  std::mt19937_64 rng(8);
  const auto samples = teacher_samples(oracle::gaussian(10, 9, rng), 64, rng);
  TrainingConfig cfg{0.001, 5, 16, 3};
  const auto a = train_linear(std::span<const LinearSample>(samples), cfg);
  const auto b = train_linear(std::span<const LinearSample>(samples), cfg);
  CHECK(a.params.theta == b.params.theta);

  cfg.seed = 4;
  CHECK(train_linear(std::span<const LinearSample>(samples), cfg).params.theta != a.params.theta);

  const std::vector<LinearSample> few(samples.begin(), samples.begin() + 8);
  CHECK_THROWS_AS(train_linear(std::span<const LinearSample>(few), cfg), ArgumentError);
  CHECK_THROWS_AS(train_linear(std::span<const TrainingPair>{}, cfg), ArgumentError);
}

TEST_CASE("training config validation") {
  CHECK_THROWS_AS((TrainingConfig{0.0, 100, 16, 0}.validate()), ArgumentError);
  CHECK_THROWS_AS((TrainingConfig{0.001, 0, 16, 0}.validate()), ArgumentError);
  CHECK_NOTHROW(TrainingConfig{}.validate());
  CHECK(TrainingConfig{}.learning_rate == 0.001);
  CHECK(TrainingConfig{}.epochs == 100);
}
