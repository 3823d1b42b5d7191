#include "hmp/training.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace hmp {

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ArgumentError("learning rate must be positive");
  if (epochs < 1) throw ArgumentError("epochs must be at least 1");
  if (minibatch_size < 1) throw ArgumentError("minibatch size must be at least 1");
}

std::vector<std::vector<int>> epoch_batches(int dataset_size, const TrainingConfig& config,
                                            int epoch) {
  std::vector<int> order(static_cast<std::size_t>(dataset_size));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(epoch));
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::vector<int>> batches;
  for (std::size_t i = 0; i < order.size(); i += config.minibatch_size) {
    const auto end = std::min(order.size(), i + config.minibatch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

void check_dataset(std::span<const TrainingPair> dataset, const TrainingConfig& config) {
  config.validate();
  if (dataset.empty()) throw ArgumentError("training dataset is empty");
  if (static_cast<int>(dataset.size()) < config.minibatch_size) {
    throw ArgumentError("dataset has " + std::to_string(dataset.size()) +
                        " pairs, fewer than one minibatch of " +
                        std::to_string(config.minibatch_size));
  }
}

}  // namespace hmp
