#pragma once

#include <span>

#include <Eigen/Core>

#include "hmp/core.hpp"
#include "hmp/training.hpp"

namespace hmp {

/// One-hidden-layer ReLU network, f(s) = Wᵀ max(0, U s). The hidden bias is
/// carried by the trailing constant 1 of the input vector.
struct NetworkParams {
  Eigen::MatrixXd hidden;  // U, n_h × n_in
  Eigen::MatrixXd output;  // W, n_h × n_out

  int inputs() const noexcept { return static_cast<int>(hidden.cols()); }
  int hidden_units() const noexcept { return static_cast<int>(hidden.rows()); }
  int outputs() const noexcept { return static_cast<int>(output.cols()); }

  /// Glorot-uniform initialisation, deterministic in `seed`.
  static NetworkParams glorot(int inputs, int hidden_units, int outputs, std::uint64_t seed);
};

/// Post-ReLU hidden activations; every entry is non-negative.
using FeatureVector = Eigen::VectorXd;

struct NetworkGradients {
  Eigen::MatrixXd hidden;
  Eigen::MatrixXd output;
};

FeatureVector nn_hidden(const NetworkParams& params, const RegressorVector& s);
Eigen::VectorXd nn_forward(const NetworkParams& params, const RegressorVector& s);

/// Exact gradients of ‖target − nn_forward(s)‖²; the ReLU subgradient at 0 is 0.
NetworkGradients nn_gradients(const NetworkParams& params, const RegressorVector& s,
                              const Eigen::VectorXd& target);

/// Mean per-sample L2 loss over a column-major design.
double network_loss(const NetworkParams& params, const DesignMatrices& design);

struct NetworkTrainingResult {
  NetworkParams params;
  LossTrace trace;
};

DesignMatrices network_design(std::span<const TrainingPair> dataset);

NetworkTrainingResult train_network(std::span<const TrainingPair> dataset,
                                    const TrainingConfig& config, int hidden_units = 40);

/// Trainer over an explicit design (inputs already include the constant 1).
NetworkTrainingResult train_network(const DesignMatrices& design, const TrainingConfig& config,
                                    int hidden_units);

}  // namespace hmp
