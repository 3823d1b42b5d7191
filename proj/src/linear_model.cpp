#include "hmp/linear_model.hpp"

#include <string>
#include <vector>

namespace hmp {

namespace {

void check_shapes(const LinearParams& params, const RegressorVector& phi) {
  if (phi.size() != params.inputs()) {
    throw DimensionError("regressor has " + std::to_string(phi.size()) + " entries, model expects " +
                         std::to_string(params.inputs()));
  }
}

void check_target(const LinearParams& params, const Eigen::VectorXd& target) {
  if (target.size() != params.outputs()) {
    throw DimensionError("target has " + std::to_string(target.size()) + " entries, model emits " +
                         std::to_string(params.outputs()));
  }
}

double mean_loss(const LinearParams& params, const Eigen::MatrixXd& inputs,
                 const Eigen::MatrixXd& targets) {
  const Eigen::MatrixXd residual = targets - params.theta.transpose() * inputs;
  return residual.colwise().squaredNorm().mean();
}

}  // namespace

Eigen::VectorXd lrm_predict(const LinearParams& params, const RegressorVector& phi) {
  check_shapes(params, phi);
  return params.theta.transpose() * phi;
}

double sample_error(const LinearParams& params, const RegressorVector& phi,
                    const Eigen::VectorXd& target) {
  check_target(params, target);
  return (target - lrm_predict(params, phi)).squaredNorm();
}

Eigen::MatrixXd sample_error_gradient(const LinearParams& params, const RegressorVector& phi,
                                      const Eigen::VectorXd& target) {
  check_target(params, target);
  const Eigen::VectorXd residual = target - lrm_predict(params, phi);
  return -2.0 * phi * residual.transpose();
}

LinearParams sgd_step(const LinearParams& params, std::span<const LinearSample> minibatch,
                      double learning_rate) {
  if (minibatch.empty()) throw ArgumentError("sgd_step needs a non-empty minibatch");
  Eigen::MatrixXd gradient = Eigen::MatrixXd::Zero(params.inputs(), params.outputs());
  for (const auto& sample : minibatch) {
    gradient += sample_error_gradient(params, sample.phi, sample.target);
  }
  gradient /= static_cast<double>(minibatch.size());
  return {params.theta - learning_rate * gradient};
}

LinearTrainingResult train_linear(std::span<const LinearSample> samples,
                                  const TrainingConfig& config) {
  config.validate();
  if (samples.empty()) throw ArgumentError("training dataset is empty");
  if (static_cast<int>(samples.size()) < config.minibatch_size) {
    throw ArgumentError("dataset is shorter than one minibatch");
  }
  const auto inputs = static_cast<int>(samples.front().phi.size());
  const auto outputs = static_cast<int>(samples.front().target.size());
  const auto count = static_cast<int>(samples.size());

  Eigen::MatrixXd phi(inputs, count);
  Eigen::MatrixXd target(outputs, count);
  for (int i = 0; i < count; ++i) {
    if (samples[i].phi.size() != inputs || samples[i].target.size() != outputs) {
      throw DimensionError("inconsistent sample shapes in training dataset");
    }
    phi.col(i) = samples[i].phi;
    target.col(i) = samples[i].target;
  }

  LinearTrainingResult result{LinearParams::zeros(inputs, outputs), {}};
  auto& theta = result.params.theta;
  result.trace.epoch_loss.push_back(mean_loss(result.params, phi, target));

  Eigen::MatrixXd batch_phi;
  Eigen::MatrixXd batch_target;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& batch : epoch_batches(count, config, epoch)) {
      const auto m = static_cast<int>(batch.size());
      batch_phi.resize(inputs, m);
      batch_target.resize(outputs, m);
      for (int j = 0; j < m; ++j) {
        batch_phi.col(j) = phi.col(batch[j]);
        batch_target.col(j) = target.col(batch[j]);
      }
      const Eigen::MatrixXd residual = batch_target - theta.transpose() * batch_phi;
      // mean of −2 phi rᵀ over the batch
      theta += (2.0 * config.learning_rate / m) * (batch_phi * residual.transpose());
    }
    result.trace.epoch_loss.push_back(mean_loss(result.params, phi, target));
  }
  return result;
}

LinearTrainingResult train_linear(std::span<const TrainingPair> dataset,
                                  const TrainingConfig& config) {
  check_dataset(dataset, config);
  std::vector<LinearSample> samples;
  samples.reserve(dataset.size());
  for (const auto& pair : dataset) {
    samples.push_back({build_linear_regressor(pair.window), pair.target.future});
  }
  return train_linear(std::span<const LinearSample>(samples), config);
}

}  // namespace hmp
