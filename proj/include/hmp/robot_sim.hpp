#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hmp/core.hpp"
#include "hmp/human_sim.hpp"
#include "hmp/predictor.hpp"

namespace hmp {

/// Fixed workcell: a single-segment arm from `base` to the end-effector, an
/// idle pose, and fetch targets visited in order.
struct RobotScene {
  Vec3 base{0.0, 0.0, 0.0};
  Vec3 idle{0.30, 0.0, 0.45};
  std::vector<Vec3> targets{Vec3(0.50, -0.35, 0.15), Vec3(0.50, 0.35, 0.15)};  // Disk, RAM
  int fetch_cycles = 3;            // the target sequence is visited this many times
  double v_max = 0.02;             // m / frame
  double d_safe = 0.3;             // m
  double replan_distance = 0.4;    // m, d_safe + 0.1
  double arrive_tolerance = 1e-9;  // m
  int refresh_frames = 20;         // stalled-plan refresh period (1 Hz)

  void validate() const;
};

struct RobotState {
  Vec3 ee_position = Vec3::Zero();
  Vec3 base_position = Vec3::Zero();
  Vec3 target = Vec3::Zero();
  double v_max = 0.02;
};

/// Waypoint path for the end-effector. `next` is the index of the waypoint
/// currently being approached.
struct Plan {
  std::vector<Vec3> waypoints;
  Vec3 target = Vec3::Zero();
  bool holds_standoff = false;  // target lies in a keep-out region
  std::size_t next = 0;
  std::uint64_t revision = 0;

  bool exhausted() const noexcept { return next >= waypoints.size(); }
};

/// Distance between a human point and the arm segment.
double human_robot_distance(const Vec3& human, const Vec3& base, const Vec3& ee);

/// Straight path to the target, deflected around keep-out spheres of radius
/// `d_safe` centred at `keep_out`. A target inside a sphere is replaced by the
/// nearest standoff point outside all spheres.
Plan long_term_plan(const RobotState& robot, std::span<const Vec3> keep_out, double d_safe);

struct StepResult {
  RobotState robot;
  bool projected = false;  // the safety layer modified the nominal step
};

/// One control frame: a nominal step of at most v_max along the plan, projected
/// away from humans whose keep-out radius would be violated. Against
/// `human_now` the post-step distance is never below min(pre-step, d_safe).
StepResult short_term_step(const RobotState& robot, Plan& plan, const Vec3& human_now,
                           std::span<const Vec3> predicted_human, double d_safe);

struct TrialConfig {
  PredictorKind predictor = PredictorKind::None;
  MotionPattern pattern;  // complete human motion for the trial
  std::uint64_t seed = 0;
  RobotScene scene;
  int frames = 0;             // 0: whole pattern
  int past_steps = kDefaultPastSteps;
  bool human_present = true;

  int trial_frames() const;
  void validate() const;
};

struct FrameRecord {
  std::int64_t frame = 0;
  Vec3 human = Vec3::Zero();  // smoothed wrist position
  Vec3 ee = Vec3::Zero();
  Vec3 target = Vec3::Zero();
  std::optional<PredictedTrajectory> prediction;
  double min_dist = 0.0;
  bool replan = false;
  bool projected = false;
};

struct TrialLog {
  PredictorKind predictor = PredictorKind::None;
  std::uint64_t seed = 0;
  Vec3 base = Vec3::Zero();
  double d_safe = 0.3;
  int horizon = kDefaultFutureSteps;
  std::vector<FrameRecord> records;

  int replan_count() const;
  std::optional<std::int64_t> first_replan_after(std::int64_t frame) const;
  std::optional<std::int64_t> first_projection() const;
};

TrialLog run_trial(const TrialConfig& config, const TrainedModels& models);

}  // namespace hmp
