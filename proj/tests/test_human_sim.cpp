#include <cmath>
#include <set>

#include <doctest.h>

#include "hmp/human_sim.hpp"
#include "hmp/linear_model.hpp"

using namespace hmp;

namespace {

double max_gap(const MotionPattern& p) {
  double g = 0.0;
  for (std::size_t i = 0; i + 1 < p.waypoints.size(); ++i)
    g = std::max(g, (p.waypoints[i + 1] - p.waypoints[i]).norm());
  return g;
}

int min_frames(const MotionPattern& p) {
  return *std::min_element(p.segment_frames.begin(), p.segment_frames.end());
}

}  // namespace

TEST_CASE("default patterns: four labels, 100 frames, stated motion lengths") {
  const auto patterns = default_patterns();
  REQUIRE(patterns.size() == 4);
  const double lengths[] = {0.5, 0.6, 0.4, 0.7};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(patterns[i].label.value() == static_cast<int>(i) + 1);
    CHECK(patterns[i].duration_frames() == 100);
    CHECK(patterns[i].noise_sigma == 0.01);
    CHECK(max_gap(patterns[i]) == doctest::Approx(lengths[i]).epsilon(0.06));
    CHECK(patterns[i].waypoints.front().isApprox(patterns[i].waypoints.back()));
  }
}

TEST_CASE("noise-free generation passes through each waypoint at its frame") {
  for (auto pattern : default_patterns(0.0)) {
    const auto traj = generate_trajectory(pattern, 1);
    for (std::size_t i = 0; i < pattern.waypoints.size(); ++i) {
      const auto f = static_cast<std::size_t>(pattern.waypoint_frame(i));
      CHECK((traj.samples[f].position - pattern.waypoints[i]).norm() < 1e-12);
    }
    for (std::size_t f = 0; f < traj.samples.size(); ++f) CHECK(traj.samples[f].frame == static_cast<std::int64_t>(f));
  }
}

TEST_CASE("noise-free motion is C1 at the waypoints") {
  const auto pattern = default_patterns(0.0)[3];
  const double h = 1e-4;
  for (std::size_t i = 1; i + 1 < pattern.waypoints.size(); ++i) {
    const double f = pattern.waypoint_frame(i);
    const Vec3 left = (pattern_position(pattern, f) - pattern_position(pattern, f - h)) / h;
    const Vec3 right = (pattern_position(pattern, f + h) - pattern_position(pattern, f)) / h;
    CHECK((left - right).norm() < 1e-5);
  }
}

TEST_CASE("generation is deterministic in the seed") {
  const auto p = default_patterns()[1];
  const auto a = generate_trajectory(p, 5);
  const auto b = generate_trajectory(p, 5);
  const auto c = generate_trajectory(p, 6);
  REQUIRE(a.samples.size() == b.samples.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].position == b.samples[i].position);
    differs |= a.samples[i].position != c.samples[i].position;
  }
  CHECK(differs);
}

TEST_CASE("measurement noise has zero mean") {
  const auto base = repeat_pattern(default_patterns(0.01)[0], 100);  // 10^4 frames
  const auto traj = generate_trajectory(base, 123);
  Vec3 sum = Vec3::Zero();
  int n = 0;
  for (const auto& s : traj.samples) {
    if (s.frame == 0) continue;
    sum += s.position - pattern_position(base, static_cast<double>(s.frame));
    ++n;
  }
  CHECK(n == 10000);
  const Vec3 mean = sum / n;
  const double bound = 3.0 * 0.01 / std::sqrt(static_cast<double>(n));
  CHECK(mean.cwiseAbs().maxCoeff() <= bound);
}

TEST_CASE("per-frame displacement is bounded") {
  for (const auto& pattern : default_patterns(0.0)) {
    // minimum-jerk peak speed is 15/8 of the segment's average speed
    const double bound = 15.0 / 8.0 * max_gap(pattern) / min_frames(pattern);
    const auto traj = generate_trajectory(pattern, 0);
    for (std::size_t k = 1; k < traj.samples.size(); ++k)
      CHECK((traj.samples[k].position - traj.samples[k - 1].position).norm() <= bound + 1e-12);
  }
  for (const auto& pattern : default_patterns(0.01)) {
    const double per_axis = 15.0 / 8.0 * max_gap(pattern) / min_frames(pattern) +
                            6.0 * std::sqrt(2.0) * pattern.noise_sigma;
    const auto traj = generate_trajectory(pattern, 9);
    for (std::size_t k = 1; k < traj.samples.size(); ++k)
      CHECK((traj.samples[k].position - traj.samples[k - 1].position).cwiseAbs().maxCoeff() <= per_axis);
  }
}

TEST_CASE("degenerate patterns are rejected") {
  MotionPattern p{ActionLabel(1), {Vec3::Zero(), Vec3::Zero(), Vec3::Ones()}, {0, 10}, 0.0};
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("duplicate"), ValidationError);
  MotionPattern single{ActionLabel(1), {Vec3::Zero()}, {}, 0.0};
  CHECK_THROWS_AS(single.validate(), ValidationError);
  MotionPattern short_one{ActionLabel(1), {Vec3::Zero(), Vec3::Ones()}, {4}, 0.0};
  CHECK_THROWS_AS(short_one.validate(3), ValidationError);
  MotionPattern noisy{ActionLabel(1), {Vec3::Zero(), Vec3::Ones()}, {10}, -0.1};
  CHECK_THROWS_AS(noisy.validate(), ValidationError);
}

TEST_CASE("dataset: 30 trajectories per pattern, deterministic, labels constant") {
  const auto patterns = default_patterns();
  const auto data = generate_dataset(patterns, 2019);
  CHECK(data.size() == 120);
  std::set<int> labels;
  for (const auto& t : data) labels.insert(t.label.value());
  CHECK(labels.size() == 4);

  const auto again = generate_dataset(patterns, 2019);
  const auto pairs = training_pairs(data, 3, 3);
  const auto pairs_again = training_pairs(again, 3, 3);
  REQUIRE(pairs.size() == pairs_again.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(pairs[i].window.past == pairs_again[i].window.past);
    CHECK(pairs[i].target.future == pairs_again[i].target.future);
  }
  // 101 samples per trajectory → 101 − 3 − 3 + 1 pairs each
  CHECK(pairs.size() == 120 * 96);
}

TEST_CASE("training pairs: window then the next M smoothed positions") {
  const auto pattern = default_patterns(0.01)[2];
  const auto traj = generate_trajectory(pattern, 4);
  const auto pairs = training_pairs(traj, 3, 3);
  LowPassFilter f;
  std::vector<Vec3> smoothed;
  for (const auto& s : traj.samples) smoothed.push_back(f(s.position));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    CHECK(pairs[k].window.label == pattern.label);
    for (int i = 0; i < 3; ++i) CHECK(pairs[k].window.position(i) == smoothed[k + i]);
    for (int m = 0; m < 3; ++m) CHECK(pairs[k].target.position(m) == smoothed[k + 3 + m]);
  }
}

TEST_CASE("an empty dataset is produced on request and rejected by training") {
  const auto data = generate_dataset(default_patterns(), 1, {0, 0.02});
  CHECK(data.empty());
  CHECK_THROWS_AS(train_linear(training_pairs(data, 3, 3), TrainingConfig{}), ArgumentError);
}

TEST_CASE("drift translates waypoints linearly in time") {
  const auto p = make_pattern(ActionLabel(1), {Vec3::Zero(), Vec3(0.3, 0, 0), Vec3::Zero()}, 200, 0.0);
  const auto same = apply_drift(p, Vec3::Zero());
  for (std::size_t i = 0; i < p.waypoints.size(); ++i) CHECK(same.waypoints[i] == p.waypoints[i]);

  const auto drifted = apply_drift(p, Vec3(0.1, 0, 0));
  CHECK((drifted.waypoints.back() - p.waypoints.back()).isApprox(Vec3(0.2, 0, 0)));
  CHECK((drifted.waypoints[1] - p.waypoints[1]).isApprox(Vec3(0.1, 0, 0)));
  CHECK(drifted.waypoints.front() == p.waypoints.front());
}

TEST_CASE("repeat and translate") {
  const auto p = default_patterns()[0];
  const auto r = repeat_pattern(p, 3);
  CHECK(r.duration_frames() == 300);
  CHECK(r.waypoints.size() == 3 * (p.waypoints.size() - 1) + 1);
  for (int f = 0; f <= 100; f += 7)
    CHECK((pattern_position(r, f + 200) - pattern_position(p, f)).norm() < 1e-12);

  const auto t = translate_pattern(p, Vec3(10, 0, 0));
  CHECK((pattern_position(t, 37) - pattern_position(p, 37)).isApprox(Vec3(10, 0, 0)));
}

TEST_CASE("seed mixing separates children") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 10; ++a)
    for (std::uint64_t b = 0; b < 10; ++b) seen.insert(mix_seed(7, a, b));
  CHECK(seen.size() == 100);
  CHECK(mix_seed(7, 1, 2) == mix_seed(7, 1, 2));
}
