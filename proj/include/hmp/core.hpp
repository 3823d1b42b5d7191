#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include <Eigen/Core>

#include "hmp/errors.hpp"

namespace hmp {

using Vec3 = Eigen::Vector3d;

inline constexpr int kDefaultPastSteps = 3;    // N
inline constexpr int kDefaultFutureSteps = 3;  // M
inline constexpr double kFrameSeconds = 0.05;  // 20 Hz

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& x) {
  return x.allFinite();
}

/// Discrete action category of a trial. Exactly four labels exist.
class ActionLabel {
 public:
  static constexpr int kCount = 4;

  explicit ActionLabel(int value) : value_(value) {
    if (value < 1 || value > kCount) {
      throw ValidationError("action label must be in 1..4, got " + std::to_string(value));
    }
  }

  int value() const noexcept { return value_; }
  friend bool operator==(ActionLabel, ActionLabel) = default;

 private:
  int value_;
};

struct JointSample {
  Vec3 position = Vec3::Zero();
  std::int64_t frame = 0;
};

/// Past N smoothed wrist positions, flattened oldest first, plus the label.
struct MotionWindow {
  Eigen::VectorXd past;
  ActionLabel label{1};

  int steps() const noexcept { return static_cast<int>(past.size() / 3); }
  Vec3 position(int i) const { return past.segment<3>(3 * i); }
  Vec3 newest() const { return position(steps() - 1); }
};

/// M future positions, flattened nearest step first.
struct PredictedTrajectory {
  Eigen::VectorXd future;

  int steps() const noexcept { return static_cast<int>(future.size() / 3); }
  Vec3 position(int m) const { return future.segment<3>(3 * m); }
};

/// Regressor rows are plain dense vectors; their dimension is checked by the
/// model consuming them.
using RegressorVector = Eigen::VectorXd;

/// p_s(k) = 0.6 p(k-1) + 0.4 p(k).
Vec3 smooth(const Vec3& previous, const Vec3& current);

/// Streaming form of `smooth`; the first measurement passes through unchanged.
class LowPassFilter {
 public:
  Vec3 operator()(const Vec3& raw);
  void reset() { previous_.reset(); }

 private:
  std::optional<Vec3> previous_;
};

/// Keeps the newest N smoothed samples of one stream.
class SlidingWindow {
 public:
  SlidingWindow(int steps, ActionLabel label);

  /// Appends a sample; returns the full window once N samples are held.
  /// Throws StreamError when the frame does not follow the previous one.
  std::optional<MotionWindow> push(const JointSample& sample);
  void reset();

  int steps() const noexcept { return steps_; }
  bool warm() const noexcept { return static_cast<int>(samples_.size()) == steps_; }

 private:
  int steps_;
  ActionLabel label_;
  std::deque<JointSample> samples_;
};

MotionWindow make_window(const Eigen::VectorXd& past, ActionLabel label);
PredictedTrajectory make_trajectory(const Eigen::VectorXd& future);

/// [past..., label]; dimension 3N+1.
RegressorVector build_linear_regressor(const MotionWindow& window);
/// [past..., label, 1]; dimension 3N+2.
RegressorVector build_network_input(const MotionWindow& window);

}  // namespace hmp
