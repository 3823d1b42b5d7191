#include "hmp/core.hpp"

#include <string>

namespace hmp {

namespace {

void require_finite(const Vec3& v, const char* what) {
  if (!all_finite(v)) throw ValidationError(std::string(what) + " contains a non-finite entry");
}

}  // namespace

Vec3 smooth(const Vec3& previous, const Vec3& current) {
  require_finite(previous, "previous measurement");
  require_finite(current, "current measurement");
  return 0.6 * previous + 0.4 * current;
}

Vec3 LowPassFilter::operator()(const Vec3& raw) {
  const Vec3 out = smooth(previous_.value_or(raw), raw);
  previous_ = raw;
  return out;
}

SlidingWindow::SlidingWindow(int steps, ActionLabel label) : steps_(steps), label_(label) {
  if (steps < 1) throw ArgumentError("window length must be positive");
}

std::optional<MotionWindow> SlidingWindow::push(const JointSample& sample) {
  require_finite(sample.position, "joint sample");
  if (!samples_.empty() && sample.frame != samples_.back().frame + 1) {
    throw StreamError("frame " + std::to_string(sample.frame) + " does not follow frame " +
                      std::to_string(samples_.back().frame));
  }
  samples_.push_back(sample);
  if (static_cast<int>(samples_.size()) > steps_) samples_.pop_front();
  if (!warm()) return std::nullopt;

  MotionWindow window{Eigen::VectorXd(3 * steps_), label_};
  for (int i = 0; i < steps_; ++i) window.past.segment<3>(3 * i) = samples_[i].position;
  return window;
}

void SlidingWindow::reset() { samples_.clear(); }

MotionWindow make_window(const Eigen::VectorXd& past, ActionLabel label) {
  if (past.size() == 0 || past.size() % 3 != 0) {
    throw DimensionError("window length must be a positive multiple of 3");
  }
  if (!all_finite(past)) throw ValidationError("window contains a non-finite entry");
  return MotionWindow{past, label};
}

PredictedTrajectory make_trajectory(const Eigen::VectorXd& future) {
  if (future.size() == 0 || future.size() % 3 != 0) {
    throw DimensionError("trajectory length must be a positive multiple of 3");
  }
  if (!all_finite(future)) throw ValidationError("trajectory contains a non-finite entry");
  return PredictedTrajectory{future};
}

RegressorVector build_linear_regressor(const MotionWindow& window) {
  const auto n = window.past.size();
  RegressorVector phi(n + 1);
  phi.head(n) = window.past;
  phi(n) = window.label.value();
  return phi;
}

RegressorVector build_network_input(const MotionWindow& window) {
  const auto n = window.past.size();
  RegressorVector s(n + 2);
  s.head(n) = window.past;
  s(n) = window.label.value();
  s(n + 1) = 1.0;
  return s;
}

}  // namespace hmp
