#include "hmp/network.hpp"

#include <cmath>
#include <random>
#include <string>

namespace hmp {

namespace {

void check_input(const NetworkParams& params, const RegressorVector& s) {
  if (s.size() != params.inputs()) {
    throw DimensionError("network input has " + std::to_string(s.size()) +
                         " entries, network expects " + std::to_string(params.inputs()));
  }
  if (params.output.rows() != params.hidden.rows()) {
    throw DimensionError("hidden and output layers disagree on the hidden width");
  }
}

Eigen::MatrixXd glorot_matrix(int rows, int cols, int fan_in, int fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Eigen::MatrixXd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = dist(rng);
  return m;
}

}  // namespace

NetworkParams NetworkParams::glorot(int inputs, int hidden_units, int outputs, std::uint64_t seed) {
  if (inputs < 1 || hidden_units < 1 || outputs < 1) {
    throw ArgumentError("network layer sizes must be positive");
  }
  std::mt19937_64 rng(seed);
  NetworkParams params;
  params.hidden = glorot_matrix(hidden_units, inputs, inputs, hidden_units, rng);
  params.output = glorot_matrix(hidden_units, outputs, hidden_units, outputs, rng);
  return params;
}

FeatureVector nn_hidden(const NetworkParams& params, const RegressorVector& s) {
  check_input(params, s);
  return (params.hidden * s).cwiseMax(0.0);
}

Eigen::VectorXd nn_forward(const NetworkParams& params, const RegressorVector& s) {
  return params.output.transpose() * nn_hidden(params, s);
}

NetworkGradients nn_gradients(const NetworkParams& params, const RegressorVector& s,
                              const Eigen::VectorXd& target) {
  check_input(params, s);
  if (target.size() != params.outputs()) throw DimensionError("target size mismatch");

  const Eigen::VectorXd pre = params.hidden * s;
  const Eigen::VectorXd h = pre.cwiseMax(0.0);
  const Eigen::VectorXd residual = target - params.output.transpose() * h;

  NetworkGradients g;
  g.output = -2.0 * h * residual.transpose();
  const Eigen::VectorXd dh = -2.0 * params.output * residual;
  const Eigen::VectorXd dpre = (pre.array() > 0.0).select(dh, 0.0);
  g.hidden = dpre * s.transpose();
  return g;
}

double network_loss(const NetworkParams& params, const DesignMatrices& design) {
  const Eigen::MatrixXd h = (params.hidden * design.inputs).cwiseMax(0.0);
  return (design.targets - params.output.transpose() * h).colwise().squaredNorm().mean();
}

DesignMatrices network_design(std::span<const TrainingPair> dataset) {
  if (dataset.empty()) throw ArgumentError("training dataset is empty");
  const auto count = static_cast<int>(dataset.size());
  const auto in = build_network_input(dataset.front().window).size();
  const auto out = dataset.front().target.future.size();
  DesignMatrices design{Eigen::MatrixXd(in, count), Eigen::MatrixXd(out, count)};
  for (int i = 0; i < count; ++i) {
    const auto s = build_network_input(dataset[i].window);
    if (s.size() != in || dataset[i].target.future.size() != out) {
      throw DimensionError("inconsistent sample shapes in training dataset");
    }
    design.inputs.col(i) = s;
    design.targets.col(i) = dataset[i].target.future;
  }
  return design;
}

NetworkTrainingResult train_network(const DesignMatrices& design, const TrainingConfig& config,
                                    int hidden_units) {
  config.validate();
  const auto count = static_cast<int>(design.inputs.cols());
  if (count == 0) throw ArgumentError("training dataset is empty");
  if (count < config.minibatch_size) throw ArgumentError("dataset is shorter than one minibatch");
  if (design.targets.cols() != count) throw DimensionError("input/target sample counts differ");

  NetworkTrainingResult result{
      NetworkParams::glorot(static_cast<int>(design.inputs.rows()), hidden_units,
                            static_cast<int>(design.targets.rows()), config.seed),
      {}};
  auto& U = result.params.hidden;
  auto& W = result.params.output;
  result.trace.epoch_loss.push_back(network_loss(result.params, design));

  Eigen::MatrixXd S, T;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& batch : epoch_batches(count, config, epoch)) {
      const auto m = static_cast<int>(batch.size());
      S.resize(design.inputs.rows(), m);
      T.resize(design.targets.rows(), m);
      for (int j = 0; j < m; ++j) {
        S.col(j) = design.inputs.col(batch[j]);
        T.col(j) = design.targets.col(batch[j]);
      }
      const Eigen::MatrixXd Z = U * S;
      const Eigen::MatrixXd H = Z.cwiseMax(0.0);
      const Eigen::MatrixXd R = T - W.transpose() * H;
      const double scale = -2.0 / m;
      const Eigen::MatrixXd gW = scale * H * R.transpose();
      const Eigen::MatrixXd gH = scale * W * R;
      const Eigen::MatrixXd gZ = (Z.array() > 0.0).select(gH, 0.0);
      U.noalias() -= config.learning_rate * gZ * S.transpose();
      W.noalias() -= config.learning_rate * gW;
    }
    result.trace.epoch_loss.push_back(network_loss(result.params, design));
  }
  return result;
}

NetworkTrainingResult train_network(std::span<const TrainingPair> dataset,
                                    const TrainingConfig& config, int hidden_units) {
  check_dataset(dataset, config);
  return train_network(network_design(dataset), config, hidden_units);
}

}  // namespace hmp
