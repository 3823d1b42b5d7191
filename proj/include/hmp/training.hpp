#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hmp/core.hpp"

namespace hmp {

struct TrainingConfig {
  double learning_rate = 0.001;
  int epochs = 100;
  int minibatch_size = 16;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainingPair {
  MotionWindow window;
  PredictedTrajectory target;
};

/// Column-major design matrices for a set of pairs: one column per sample.
struct DesignMatrices {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd targets;
};

/// Mean loss after every epoch; `epoch_loss.front()` is the loss before training.
struct LossTrace {
  std::vector<double> epoch_loss;
};

/// Shuffled minibatch schedule shared by both trainers. Index order is a pure
/// function of (dataset size, config seed, epoch).
std::vector<std::vector<int>> epoch_batches(int dataset_size, const TrainingConfig& config,
                                            int epoch);

void check_dataset(std::span<const TrainingPair> dataset, const TrainingConfig& config);

}  // namespace hmp
