#pragma once

#include <span>

#include <Eigen/Core>

#include "hmp/core.hpp"
#include "hmp/training.hpp"

namespace hmp {

/// theta maps a (3N+1) regressor to a 3M trajectory: prediction = thetaᵀ phi.
struct LinearParams {
  Eigen::MatrixXd theta;

  static LinearParams zeros(int inputs, int outputs) {
    return {Eigen::MatrixXd::Zero(inputs, outputs)};
  }
  int inputs() const noexcept { return static_cast<int>(theta.rows()); }
  int outputs() const noexcept { return static_cast<int>(theta.cols()); }
};

struct LinearSample {
  RegressorVector phi;
  Eigen::VectorXd target;
};

Eigen::VectorXd lrm_predict(const LinearParams& params, const RegressorVector& phi);

/// Squared residual norm ‖target − thetaᵀ phi‖².
double sample_error(const LinearParams& params, const RegressorVector& phi,
                    const Eigen::VectorXd& target);

/// Gradient of `sample_error` with respect to theta: −2 phi residualᵀ.
Eigen::MatrixXd sample_error_gradient(const LinearParams& params, const RegressorVector& phi,
                                      const Eigen::VectorXd& target);

/// One step against the minibatch-averaged gradient.
LinearParams sgd_step(const LinearParams& params, std::span<const LinearSample> minibatch,
                      double learning_rate);

struct LinearTrainingResult {
  LinearParams params;
  LossTrace trace;
};

/// Zero-initialised minibatch SGD over `config.epochs` shuffled passes.
LinearTrainingResult train_linear(std::span<const TrainingPair> dataset,
                                  const TrainingConfig& config);

/// Same trainer over pre-built regressors (used by the feature-space tests).
LinearTrainingResult train_linear(std::span<const LinearSample> samples,
                                  const TrainingConfig& config);

}  // namespace hmp
