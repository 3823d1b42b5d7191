#include <doctest.h>

#include "hmp/bench.hpp"
#include "hmp/evaluation.hpp"
#include "hmp/geometry.hpp"
#include "hmp/robot_sim.hpp"

using namespace hmp;

namespace {

// Small but real pre-trained model set, shared by the closed-loop tests.
const TrainedModels& quick_models() {
  static const TrainedModels models = [] {
    bench::ExperimentConfig c;
    c.trajectories_per_pattern = 5;
    c.training.epochs = 10;
    return bench::train_models(c, bench::generate_data(c)).models(c);
  }();
  return models;
}

TrialConfig default_trial(std::size_t pattern, int trial, PredictorKind kind) {
  return bench::trial_config(bench::ExperimentConfig{}, {pattern, trial, kind});
}

const PredictorKind kAllKinds[] = {PredictorKind::None, PredictorKind::FixedLinear,
                                   PredictorKind::FixedNetwork, PredictorKind::AdaptiveLinear,
                                   PredictorKind::AdaptiveNetwork};

// Points along the polyline start → waypoints, spaced at most `step` apart.
std::vector<Vec3> sample_path(const Vec3& start, const Plan& plan, double step) {
  std::vector<Vec3> out{start};
  Vec3 a = start;
  for (const auto& b : plan.waypoints) {
    const int n = std::max(1, static_cast<int>(std::ceil((b - a).norm() / step)));
    for (int i = 1; i <= n; ++i) out.push_back(a + (b - a) * (static_cast<double>(i) / n));
    a = b;
  }
  return out;
}

}  // namespace

TEST_CASE("human-robot distance is point-to-segment") {
  const Vec3 base(0, 0, 0), ee(1, 0, 0);
  CHECK(human_robot_distance(Vec3(0.5, 0.3, 0), base, ee) == doctest::Approx(0.3));
  CHECK(human_robot_distance(Vec3(2, 0, 0), base, ee) == doctest::Approx(1.0));
  CHECK(human_robot_distance(Vec3(-0.3, 0.4, 0), base, ee) == doctest::Approx(0.5));
}

TEST_CASE("with no human in the corridor the plan is the straight line") {
  const RobotState robot{Vec3(0.3, 0, 0.45), Vec3::Zero(), Vec3(0.5, 0.35, 0.15), 0.02};
  const Plan empty = long_term_plan(robot, {}, 0.3);
  REQUIRE(empty.waypoints.size() == 1);
  CHECK(empty.waypoints[0] == robot.target);
  CHECK_FALSE(empty.holds_standoff);

  const std::vector<Vec3> far{Vec3(10, 0, 0)};
  const Plan clear = long_term_plan(robot, far, 0.3);
  REQUIRE(clear.waypoints.size() == 1);
  CHECK(clear.waypoints[0] == robot.target);
}

TEST_CASE("a human on the segment midpoint deflects the path clear of the keep-out sphere") {
  const RobotState robot{Vec3(-1, 0, 0.2), Vec3::Zero(), Vec3(1, 0, 0.2), 0.02};
  const std::vector<Vec3> human{Vec3(0, 0, 0.2)};
  const Plan plan = long_term_plan(robot, human, 0.3);
  CHECK(plan.waypoints.size() > 1);
  CHECK(plan.waypoints.back() == robot.target);
  double clearance = 1e9;
  for (const auto& p : sample_path(robot.ee_position, plan, 1e-3))
    clearance = std::min(clearance, (p - human[0]).norm());
  CHECK(clearance >= 0.3);
}

TEST_CASE("a target inside the keep-out region becomes the nearest standoff") {
  const RobotState robot{Vec3(-1, 0, 0), Vec3::Zero(), Vec3(0.5, 0, 0), 0.02};
  const std::vector<Vec3> human{Vec3(0.6, 0, 0)};
  const Plan plan = long_term_plan(robot, human, 0.3);
  CHECK(plan.holds_standoff);
  CHECK((plan.waypoints.back() - human[0]).norm() >= 0.3);
  // standoff lies on the ray from the human through the target
  CHECK((plan.waypoints.back() - human[0]).normalized().isApprox(Vec3(-1, 0, 0)));
}

TEST_CASE("planning is deterministic") {
  const RobotState robot{Vec3(-1, 0.1, 0), Vec3::Zero(), Vec3(1, -0.1, 0.1), 0.02};
  const std::vector<Vec3> humans{Vec3(0, 0, 0), Vec3(0.3, 0.1, 0.0)};
  const Plan a = long_term_plan(robot, humans, 0.3);
  const Plan b = long_term_plan(robot, humans, 0.3);
  CHECK(a.waypoints == b.waypoints);
}

TEST_CASE("short-term step: distant human leaves the nominal step untouched") {
  const RobotState robot{Vec3(0.3, 0, 0.45), Vec3::Zero(), Vec3(0.5, 0.35, 0.15), 0.02};
  Plan plan = long_term_plan(robot, {}, 0.3);
  const auto step = short_term_step(robot, plan, Vec3(10, 0, 0), {}, 0.3);
  const Vec3 nominal = robot.ee_position + 0.02 * (robot.target - robot.ee_position).normalized();
  CHECK((step.robot.ee_position - nominal).norm() < 1e-15);
  CHECK_FALSE(step.projected);
}

TEST_CASE("short-term step: a human closing head-on inside d_safe never gains ground") {
  const RobotState start{Vec3(0.6, 0, 0.3), Vec3::Zero(), Vec3(1.2, 0, 0.3), 0.02};
  RobotState robot = start;
  Plan plan = long_term_plan(robot, {}, 0.3);  // stale plan straight through the human
  Vec3 human(1.0, 0, 0.3);
  for (int k = 0; k < 30; ++k) {
    const double pre = human_robot_distance(human, robot.base_position, robot.ee_position);
    const auto step = short_term_step(robot, plan, human, {}, 0.3);
    const double post = human_robot_distance(human, robot.base_position, step.robot.ee_position);
    CHECK(post >= std::min(pre, 0.3) - 1e-12);
    if (pre < 0.3) CHECK(post >= pre - 1e-12);
    robot = step.robot;
    human.x() -= 0.01;
  }
}

TEST_CASE("short-term step: robot at its target with no human stays put") {
  const RobotState robot{Vec3(0.5, 0.35, 0.15), Vec3::Zero(), Vec3(0.5, 0.35, 0.15), 0.02};
  Plan plan = long_term_plan(robot, {}, 0.3);
  const auto step = short_term_step(robot, plan, Vec3(100, 0, 0), {}, 0.3);
  CHECK(step.robot.ee_position == robot.ee_position);
  CHECK(plan.exhausted());
}

TEST_CASE("closed loop: speed bound and projection soundness on every frame") {
  for (std::size_t p = 0; p < 4; ++p) {
    for (auto kind : kAllKinds) {
      const auto cfg = default_trial(p, 0, kind);
      const auto log = run_trial(cfg, quick_models());
      REQUIRE(log.records.size() == static_cast<std::size_t>(cfg.trial_frames()));
      for (std::size_t k = 0; k + 1 < log.records.size(); ++k) {
        const auto& now = log.records[k];
        const auto& next = log.records[k + 1];
        CHECK((next.ee - now.ee).norm() <= cfg.scene.v_max + 1e-12);
        CHECK(now.min_dist >= 0.0);
        const double post = human_robot_distance(now.human, log.base, next.ee);
        if (now.min_dist >= cfg.scene.d_safe) CHECK(post >= cfg.scene.d_safe - cfg.scene.v_max);
        CHECK(post >= std::min(now.min_dist, cfg.scene.d_safe) - 1e-12);
      }
    }
  }
}

TEST_CASE("closed loop: long-term replans happen only on their triggers, and always on them") {
  for (std::size_t p = 0; p < 4; ++p) {
    for (auto kind : kAllKinds) {
      const auto cfg = default_trial(p, 1, kind);
      const auto log = run_trial(cfg, quick_models());
      int replans = 0;
      for (std::size_t k = 0; k < log.records.size(); ++k) {
        const auto& r = log.records[k];
        const bool new_task = k == 0 || r.target != log.records[k - 1].target;
        double closest = human_robot_distance(r.human, log.base, r.ee);
        if (r.prediction)
          for (int m = 0; m < r.prediction->steps(); ++m)
            closest = std::min(closest, human_robot_distance(r.prediction->position(m), log.base, r.ee));
        const bool near = closest < cfg.scene.replan_distance;
        const bool refresh = r.frame % cfg.scene.refresh_frames == 0;
        if (new_task || near) CHECK(r.replan);
        if (r.replan) CHECK((new_task || near || refresh));
        replans += r.replan;
      }
      CHECK(replans == log.replan_count());
    }
  }
}

TEST_CASE("baseline degeneracy: no predictions reach the planner") {
  const auto log = run_trial(default_trial(0, 0, PredictorKind::None), {});
  for (const auto& r : log.records) CHECK_FALSE(r.prediction.has_value());
  CHECK_THROWS_AS(run_trial(default_trial(0, 0, PredictorKind::FixedLinear), {}), ConfigError);
}

TEST_CASE("without interference the plan is issued once per task") {
  auto cfg = default_trial(0, 0, PredictorKind::AdaptiveLinear);
  cfg.pattern = translate_pattern(cfg.pattern, Vec3(10, 0, 0));
  const auto log = run_trial(cfg, quick_models());
  const int tasks = static_cast<int>(cfg.scene.targets.size()) * cfg.scene.fetch_cycles;
  CHECK(log.replan_count() == tasks);
  CHECK(log.first_projection() == std::nullopt);
  // the robot visits every target and ends at the last one
  CHECK((log.records.back().ee - log.records.back().target).norm() <= cfg.scene.arrive_tolerance);
  CHECK(log.records.back().target == cfg.scene.targets.back());
}

TEST_CASE("human offset by 10 m: efficiency is one") {
  for (auto kind : kAllKinds) {
    auto cfg = default_trial(2, 3, kind);
    cfg.pattern = translate_pattern(cfg.pattern, Vec3(10, 0, 0));
    const auto log = run_trial(cfg, quick_models());
    CHECK(efficiency_index(log, ground_truth_drt(cfg)) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(safety_index(log) > 9.0);
  }
}

TEST_CASE("with prediction the first replan comes no later than the baseline's first projection") {
  int compared = 0;
  for (std::size_t p = 0; p < 4; ++p) {
    for (int t = 0; t < 5; ++t) {
      const auto baseline = run_trial(default_trial(p, t, PredictorKind::None), {});
      const auto predicted = run_trial(default_trial(p, t, PredictorKind::AdaptiveNetwork), quick_models());
      const auto projection = baseline.first_projection();
      if (!projection) continue;
      const auto replan = predicted.first_replan_after(0);
      REQUIRE(replan.has_value());
      CHECK(*replan <= *projection);
      ++compared;
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("identical configuration and seed give identical logs") {
  const auto cfg = default_trial(1, 2, PredictorKind::AdaptiveNetwork);
  const auto a = run_trial(cfg, quick_models());
  const auto b = run_trial(cfg, quick_models());
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].human == b.records[k].human);
    CHECK(a.records[k].ee == b.records[k].ee);
    CHECK(a.records[k].replan == b.records[k].replan);
    CHECK(a.records[k].prediction.has_value() == b.records[k].prediction.has_value());
    if (a.records[k].prediction) CHECK(a.records[k].prediction->future == b.records[k].prediction->future);
  }
}

TEST_CASE("trial configuration is validated") {
  auto cfg = default_trial(0, 0, PredictorKind::None);
  cfg.scene.d_safe = 0.0;
  CHECK_THROWS_AS(run_trial(cfg, {}), ConfigError);
  cfg = default_trial(0, 0, PredictorKind::None);
  cfg.frames = 4;
  CHECK_THROWS_AS(run_trial(cfg, {}), ConfigError);
  cfg.frames = cfg.pattern.duration_frames() + 5;
  CHECK_THROWS_AS(run_trial(cfg, {}), ConfigError);
}
