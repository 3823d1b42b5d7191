#pragma once

#include <deque>
#include <optional>
#include <string>
#include <string_view>

#include "hmp/core.hpp"
#include "hmp/linear_model.hpp"
#include "hmp/network.hpp"
#include "hmp/rls.hpp"

namespace hmp {

enum class PredictorKind { None, FixedLinear, FixedNetwork, AdaptiveLinear, AdaptiveNetwork };

std::string_view to_string(PredictorKind kind);
PredictorKind parse_predictor_kind(std::string_view name);

inline bool is_adaptive(PredictorKind k) {
  return k == PredictorKind::AdaptiveLinear || k == PredictorKind::AdaptiveNetwork;
}
inline bool uses_network(PredictorKind k) {
  return k == PredictorKind::FixedNetwork || k == PredictorKind::AdaptiveNetwork;
}

struct AdaptationSettings {
  LambdaSchedule schedule{};
  double gain_scale = 1000.0;
  bool enabled = true;  // false: the adaptive variant degenerates to its fixed model
};

struct TrainedModels {
  std::optional<LinearParams> linear;
  std::optional<NetworkParams> network;
  AdaptationSettings adaptation;
};

/// Streaming T1 predictor. Feed one complete window per frame, in frame order.
///
/// Adaptive variants run the semi-adaptable loop: the regressor built at frame k
/// matures at frame k+M, when its whole M-step target has been observed; that
/// pair drives the gain and parameter corrections before the new prediction is
/// emitted from the current regressor.
class OnlinePredictor {
 public:
  OnlinePredictor(PredictorKind kind, const TrainedModels& models);

  PredictedTrajectory step(const MotionWindow& window);

  /// Forget pending (immature) regressors, e.g. after a stream discontinuity.
  /// Adapted parameters are kept.
  void reset_stream();

  PredictorKind kind() const noexcept { return kind_; }
  const AdaptiveState<double>* adaptive_state() const {
    return adaptive_ ? &*adaptive_ : nullptr;
  }
  int gain_resets() const noexcept { return gain_resets_; }

 private:
  Eigen::VectorXd features(const MotionWindow& window) const;

  PredictorKind kind_;
  std::optional<LinearParams> linear_;
  std::optional<NetworkParams> network_;
  std::optional<AdaptiveState<double>> adaptive_;
  AdaptationSettings adaptation_;
  int horizon_ = 0;
  std::deque<Eigen::VectorXd> pending_;
  std::deque<Vec3> recent_;
  int gain_resets_ = 0;
};

}  // namespace hmp
