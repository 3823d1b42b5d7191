#include "hmp/human_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace hmp {

namespace {

double min_jerk(double tau) {
  const double t3 = tau * tau * tau;
  return t3 * (10.0 - 15.0 * tau + 6.0 * tau * tau);
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix(splitmix(splitmix(seed) ^ a) ^ b);
}

int MotionPattern::duration_frames() const {
  return std::accumulate(segment_frames.begin(), segment_frames.end(), 0);
}

int MotionPattern::waypoint_frame(std::size_t i) const {
  return std::accumulate(segment_frames.begin(),
                         segment_frames.begin() + static_cast<std::ptrdiff_t>(i), 0);
}

void MotionPattern::validate(int past_steps) const {
  if (waypoints.size() < 2) throw ValidationError("a motion pattern needs at least 2 waypoints");
  if (segment_frames.size() != waypoints.size() - 1) {
    throw ValidationError("a motion pattern needs one duration per segment");
  }
  for (std::size_t i = 0; i < segment_frames.size(); ++i) {
    if (segment_frames[i] <= 0) {
      const bool duplicate = waypoints[i].isApprox(waypoints[i + 1]);
      throw ValidationError(std::string(duplicate ? "duplicate consecutive waypoints" : "segment") +
                            " with non-positive duration at segment " + std::to_string(i));
    }
  }
  for (const auto& w : waypoints) {
    if (!all_finite(w)) throw ValidationError("waypoint has a non-finite coordinate");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ValidationError("noise sigma must be finite and non-negative");
  }
  if (duration_frames() < 2 * past_steps) {
    throw ValidationError("pattern too short for the window to warm up");
  }
}

MotionPattern make_pattern(ActionLabel label, std::vector<Vec3> waypoints, int duration_frames,
                           double noise_sigma) {
  if (waypoints.size() < 2) throw ValidationError("a motion pattern needs at least 2 waypoints");
  const auto segments = static_cast<int>(waypoints.size() - 1);
  std::vector<int> frames(static_cast<std::size_t>(segments), duration_frames / segments);
  for (int i = 0; i < duration_frames % segments; ++i) ++frames[static_cast<std::size_t>(i)];
  MotionPattern pattern{label, std::move(waypoints), std::move(frames), noise_sigma};
  pattern.validate();
  return pattern;
}

Vec3 pattern_position(const MotionPattern& pattern, double frame) {
  if (frame <= 0.0) return pattern.waypoints.front();
  double start = 0.0;
  for (std::size_t i = 0; i < pattern.segment_frames.size(); ++i) {
    const double length = pattern.segment_frames[i];
    if (frame <= start + length) {
      const double s = min_jerk((frame - start) / length);
      return pattern.waypoints[i] + s * (pattern.waypoints[i + 1] - pattern.waypoints[i]);
    }
    start += length;
  }
  return pattern.waypoints.back();
}

HumanTrajectory generate_trajectory(const MotionPattern& pattern, std::uint64_t seed) {
  pattern.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  HumanTrajectory trajectory{{}, pattern.label, seed};
  const int frames = pattern.duration_frames();
  trajectory.samples.reserve(static_cast<std::size_t>(frames) + 1);
  for (int f = 0; f <= frames; ++f) {
    Vec3 p = pattern_position(pattern, f);
    if (pattern.noise_sigma > 0.0) {
      for (int axis = 0; axis < 3; ++axis) p(axis) += pattern.noise_sigma * noise(rng);
    }
    trajectory.samples.push_back({p, f});
  }
  return trajectory;
}

std::vector<HumanTrajectory> generate_dataset(std::span<const MotionPattern> patterns,
                                              std::uint64_t seed, const DatasetOptions& options) {
  if (patterns.empty()) throw ArgumentError("dataset generation needs at least one pattern");
  std::vector<HumanTrajectory> out;
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    for (int i = 0; i < options.trajectories_per_pattern; ++i) {
      const std::uint64_t child = mix_seed(seed, p, static_cast<std::uint64_t>(i));
      MotionPattern variant = patterns[p];
      if (options.waypoint_jitter > 0.0) {
        std::mt19937_64 rng(mix_seed(child, 0x6a17));
        std::uniform_real_distribution<double> jitter(-options.waypoint_jitter,
                                                      options.waypoint_jitter);
        for (auto& w : variant.waypoints)
          for (int axis = 0; axis < 3; ++axis) w(axis) += jitter(rng);
      }
      out.push_back(generate_trajectory(variant, child));
    }
  }
  return out;
}

MotionPattern apply_drift(const MotionPattern& pattern, const Vec3& drift_per_100_frames) {
  if (!all_finite(drift_per_100_frames)) throw ValidationError("drift must be finite");
  MotionPattern out = pattern;
  for (std::size_t i = 0; i < out.waypoints.size(); ++i) {
    out.waypoints[i] += drift_per_100_frames * (pattern.waypoint_frame(i) / 100.0);
  }
  return out;
}

MotionPattern repeat_pattern(const MotionPattern& pattern, int cycles) {
  if (cycles < 1) throw ArgumentError("repeat count must be positive");
  MotionPattern out = pattern;
  for (int c = 1; c < cycles; ++c) {
    out.waypoints.insert(out.waypoints.end(), pattern.waypoints.begin() + 1,
                         pattern.waypoints.end());
    out.segment_frames.insert(out.segment_frames.end(), pattern.segment_frames.begin(),
                              pattern.segment_frames.end());
  }
  return out;
}

MotionPattern translate_pattern(const MotionPattern& pattern, const Vec3& offset) {
  MotionPattern out = pattern;
  for (auto& w : out.waypoints) w += offset;
  return out;
}

std::vector<TrainingPair> training_pairs(const HumanTrajectory& trajectory, int past_steps,
                                         int future_steps) {
  LowPassFilter filter;
  std::vector<Vec3> smoothed;
  smoothed.reserve(trajectory.samples.size());
  for (const auto& s : trajectory.samples) smoothed.push_back(filter(s.position));

  std::vector<TrainingPair> pairs;
  const auto count = static_cast<int>(smoothed.size());
  for (int end = past_steps - 1; end + future_steps < count; ++end) {
    Eigen::VectorXd past(3 * past_steps);
    Eigen::VectorXd future(3 * future_steps);
    for (int i = 0; i < past_steps; ++i) past.segment<3>(3 * i) = smoothed[end - past_steps + 1 + i];
    for (int m = 0; m < future_steps; ++m) future.segment<3>(3 * m) = smoothed[end + 1 + m];
    pairs.push_back({MotionWindow{past, trajectory.label}, PredictedTrajectory{future}});
  }
  return pairs;
}

std::vector<TrainingPair> training_pairs(std::span<const HumanTrajectory> trajectories,
                                         int past_steps, int future_steps) {
  std::vector<TrainingPair> out;
  for (const auto& t : trajectories) {
    auto pairs = training_pairs(t, past_steps, future_steps);
    out.insert(out.end(), std::make_move_iterator(pairs.begin()),
               std::make_move_iterator(pairs.end()));
  }
  return out;
}

std::vector<MotionPattern> default_patterns(double noise_sigma, int duration_frames) {
  // rest, move out, hold, move back; quarter of the cycle each
  const auto cycle = [&](int label, const Vec3& home, const Vec3& away) {
    const int q = duration_frames / 4;
    MotionPattern p{ActionLabel(label), {home, home, away, away, home},
                    {q, q, q, duration_frames - 3 * q}, noise_sigma};
    p.validate();
    return p;
  };
  return {
      cycle(1, Vec3(0.95, 0.0, 0.20), Vec3(0.45, 0.0, 0.20)),      // forward reach, 0.5 m
      cycle(2, Vec3(0.55, -0.30, 0.25), Vec3(0.55, 0.30, 0.25)),   // lateral sweep, 0.6 m
      cycle(3, Vec3(0.55, 0.20, 0.05), Vec3(0.55, 0.20, 0.45)),    // lift, 0.4 m
      cycle(4, Vec3(0.90, -0.35, 0.10), Vec3(0.40, 0.05, 0.38)),   // diagonal reach, 0.7 m
  };
}

}  // namespace hmp
