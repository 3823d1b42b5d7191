#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hmp/core.hpp"
#include "hmp/training.hpp"

namespace hmp {

/// Wrist motion through waypoints. Waypoint i is reached at the sum of the
/// first i segment durations; repeated waypoints with a positive duration are
/// dwells.
struct MotionPattern {
  ActionLabel label{1};
  std::vector<Vec3> waypoints;
  std::vector<int> segment_frames;
  double noise_sigma = 0.01;

  int duration_frames() const;
  int waypoint_frame(std::size_t i) const;
  void validate(int past_steps = kDefaultPastSteps) const;
};

/// Splits `duration_frames` as evenly as possible over the segments.
MotionPattern make_pattern(ActionLabel label, std::vector<Vec3> waypoints, int duration_frames,
                           double noise_sigma);

struct HumanTrajectory {
  std::vector<JointSample> samples;  // raw measurements, frames 0..duration
  ActionLabel label{1};
  std::uint64_t seed = 0;
};

/// Noise-free position at `frame` (piecewise minimum-jerk, clamped to the ends).
Vec3 pattern_position(const MotionPattern& pattern, double frame);

HumanTrajectory generate_trajectory(const MotionPattern& pattern, std::uint64_t seed);

struct DatasetOptions {
  int trajectories_per_pattern = 30;
  /// Per-trajectory uniform waypoint perturbation (meters, per axis); models the
  /// spread between repetitions of the same motion.
  double waypoint_jitter = 0.02;
};

std::vector<HumanTrajectory> generate_dataset(std::span<const MotionPattern> patterns,
                                              std::uint64_t seed,
                                              const DatasetOptions& options = {});

/// Translates waypoint i by drift · (frame_i / 100).
MotionPattern apply_drift(const MotionPattern& pattern, const Vec3& drift_per_100_frames);

/// Tiles the pattern `cycles` times end to start. Patterns are expected to be
/// closed (last waypoint equals the first).
MotionPattern repeat_pattern(const MotionPattern& pattern, int cycles);

/// Same pattern translated rigidly.
MotionPattern translate_pattern(const MotionPattern& pattern, const Vec3& offset);

/// Smooths the raw stream and slices it into (past-N window, next-M target) pairs.
std::vector<TrainingPair> training_pairs(const HumanTrajectory& trajectory, int past_steps,
                                         int future_steps);
std::vector<TrainingPair> training_pairs(std::span<const HumanTrajectory> trajectories,
                                         int past_steps, int future_steps);

/// The four built-in motions: forward reach, lateral sweep, lift, diagonal reach.
std::vector<MotionPattern> default_patterns(double noise_sigma = 0.01, int duration_frames = 100);

/// SplitMix64 finaliser; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace hmp
