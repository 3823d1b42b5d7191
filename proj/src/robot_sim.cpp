#include "hmp/robot_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmp/geometry.hpp"

namespace hmp {

namespace {

constexpr double kViaScale = 1.2;   // via-points sit this far out, in keep-out radii
constexpr int kDeflectDepth = 6;
constexpr double kEps = 1e-12;

bool inside_any(const Vec3& p, std::span<const Vec3> spheres, double r) {
  return std::any_of(spheres.begin(), spheres.end(),
                     [&](const Vec3& c) { return (p - c).norm() < r; });
}

/// Moves `p` radially out of every sphere it lies in.
Vec3 push_out(Vec3 p, std::span<const Vec3> spheres, double r, double radius_out) {
  for (int iter = 0; iter < 32 && inside_any(p, spheres, r); ++iter) {
    for (const auto& c : spheres) {
      Vec3 d = p - c;
      if (d.norm() >= r) continue;
      d = d.norm() < 1e-9 ? Vec3(any_orthogonal(Vec3::UnitX())) : Vec3(d.normalized());
      p = c + radius_out * d;
    }
  }
  return p;
}

void deflect(const Vec3& a, const Vec3& b, std::span<const Vec3> spheres, double r, int depth,
             std::vector<Vec3>& out) {
  const Vec3* hit = nullptr;
  double worst = r;
  for (const auto& c : spheres) {
    if ((a - c).norm() < r || (b - c).norm() < r) continue;  // cannot be cleared from here
    const double d = point_segment_distance(c, a, b);
    if (d < worst - kEps) {
      worst = d;
      hit = &c;
    }
  }
  if (hit == nullptr || depth == 0) {
    out.push_back(b);
    return;
  }
  Vec3 n = closest_segment_point(*hit, a, b) - *hit;
  n = n.norm() < 1e-9 ? any_orthogonal(b - a) : Vec3(n.normalized());
  const Vec3 via = push_out(*hit + kViaScale * r * n, spheres, r, kViaScale * r);
  deflect(a, via, spheres, r, depth - 1, out);
  deflect(via, b, spheres, r, depth - 1, out);
}

/// Advances along the plan polyline by at most `budget`.
Vec3 nominal_step(const Vec3& ee, Plan& plan, double budget) {
  Vec3 pos = ee;
  while (!plan.exhausted() && budget > kEps) {
    const Vec3 d = plan.waypoints[plan.next] - pos;
    const double len = d.norm();
    if (len <= budget) {
      pos = plan.waypoints[plan.next];
      budget -= len;
      ++plan.next;
    } else {
      pos += d * (budget / len);
      budget = 0.0;
    }
  }
  while (!plan.exhausted() && (plan.waypoints[plan.next] - pos).norm() <= kEps) ++plan.next;
  return pos - ee;
}

Vec3 escape_direction(const Vec3& human, const Vec3& base, const Vec3& ee) {
  Vec3 n = closest_segment_point(human, base, ee) - human;
  if (n.norm() < 1e-9) n = ee - human;
  if (n.norm() < 1e-9) return any_orthogonal(ee - base);
  return n.normalized();
}

Vec3 clip(const Vec3& v, double limit) {
  const double n = v.norm();
  return n > limit ? Vec3(v * (limit / n)) : v;
}

}  // namespace

void RobotScene::validate() const {
  if (!(d_safe > 0.0)) throw ConfigError("d_safe must be positive");
  if (!(v_max > 0.0)) throw ConfigError("v_max must be positive");
  if (!(replan_distance >= 0.0)) throw ConfigError("replan distance must be non-negative");
  if (refresh_frames < 1) throw ConfigError("refresh period must be at least one frame");
  if (targets.empty()) throw ConfigError("the scene needs at least one target");
  if (fetch_cycles < 1) throw ConfigError("fetch_cycles must be at least one");
  if (!all_finite(base) || !all_finite(idle)) throw ConfigError("scene poses must be finite");
  for (const auto& t : targets)
    if (!all_finite(t)) throw ConfigError("scene targets must be finite");
}

double human_robot_distance(const Vec3& human, const Vec3& base, const Vec3& ee) {
  return point_segment_distance(human, base, ee);
}

Plan long_term_plan(const RobotState& robot, std::span<const Vec3> keep_out, double d_safe) {
  Plan plan;
  plan.target = robot.target;
  const double r = d_safe;
  const double r_out = kViaScale * d_safe;

  Vec3 start = robot.ee_position;
  if (inside_any(start, keep_out, r)) {
    start = push_out(start, keep_out, r, r_out);
    plan.waypoints.push_back(start);
  }
  Vec3 goal = robot.target;
  if (inside_any(goal, keep_out, r)) {
    goal = push_out(goal, keep_out, r, r_out);
    plan.holds_standoff = true;
  }
  deflect(start, goal, keep_out, r, kDeflectDepth, plan.waypoints);
  return plan;
}

StepResult short_term_step(const RobotState& robot, Plan& plan, const Vec3& human_now,
                           std::span<const Vec3> predicted_human, double d_safe) {
  const Vec3& ee = robot.ee_position;
  const Vec3& base = robot.base_position;
  const double v_max = robot.v_max;

  Vec3 v = clip(nominal_step(ee, plan, v_max), v_max);
  bool projected = false;

  const auto guard = [&](const Vec3& h) {
    if (human_robot_distance(h, base, ee + v) >= d_safe) return;
    projected = true;
    const Vec3 n = escape_direction(h, base, ee);
    const double toward = v.dot(n);
    if (toward < 0.0) v -= toward * n;
    const double deficit = d_safe - human_robot_distance(h, base, ee);
    if (deficit > 0.0) v += std::min(deficit, v_max) * n;
    v = clip(v, v_max);
  };
  guard(human_now);
  for (const auto& h : predicted_human) guard(h);

  // hard contract against the measured human
  const double pre = human_robot_distance(human_now, base, ee);
  const double floor = std::min(pre, d_safe);
  if (human_robot_distance(human_now, base, ee + v) < floor) {
    projected = true;
    v = v_max * escape_direction(human_now, base, ee);
    if (human_robot_distance(human_now, base, ee + v) < floor) v.setZero();
  }

  StepResult result{robot, projected};
  result.robot.ee_position = ee + v;
  return result;
}

int TrialConfig::trial_frames() const {
  return frames > 0 ? frames : pattern.duration_frames() + 1;
}

void TrialConfig::validate() const {
  scene.validate();
  pattern.validate(past_steps);
  if (trial_frames() < 2 * past_steps) throw ConfigError("trial shorter than the window warm-up");
  if (human_present && trial_frames() > pattern.duration_frames() + 1) {
    throw ConfigError("trial is longer than the human motion pattern");
  }
}

int TrialLog::replan_count() const {
  return static_cast<int>(
      std::count_if(records.begin(), records.end(), [](const auto& r) { return r.replan; }));
}

std::optional<std::int64_t> TrialLog::first_replan_after(std::int64_t frame) const {
  for (const auto& r : records)
    if (r.frame > frame && r.replan) return r.frame;
  return std::nullopt;
}

std::optional<std::int64_t> TrialLog::first_projection() const {
  for (const auto& r : records)
    if (r.projected) return r.frame;
  return std::nullopt;
}

TrialLog run_trial(const TrialConfig& config, const TrainedModels& models) {
  config.validate();
  const RobotScene& scene = config.scene;
  const int frames = config.trial_frames();

  std::optional<OnlinePredictor> predictor;
  if (config.predictor != PredictorKind::None) predictor.emplace(config.predictor, models);

  HumanTrajectory human;
  if (config.human_present) human = generate_trajectory(config.pattern, config.seed);

  TrialLog log;
  log.predictor = config.predictor;
  log.seed = config.seed;
  log.base = scene.base;
  log.d_safe = scene.d_safe;
  if (predictor) log.horizon = uses_network(config.predictor) ? models.network->outputs() / 3
                                                              : models.linear->outputs() / 3;
  log.records.reserve(static_cast<std::size_t>(frames));

  LowPassFilter filter;
  SlidingWindow window(config.past_steps, config.pattern.label);
  RobotState robot{scene.idle, scene.base, scene.targets.front(), scene.v_max};
  const std::size_t task_length = scene.targets.size() * static_cast<std::size_t>(scene.fetch_cycles);
  std::size_t task_index = 0;
  bool new_task = true;
  Plan plan;
  std::uint64_t revision = 0;
  std::vector<Vec3> keep_out;
  std::vector<Vec3> predicted;

  for (int k = 0; k < frames; ++k) {
    FrameRecord rec;
    rec.frame = k;
    keep_out.clear();
    predicted.clear();

    Vec3 human_now = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
    if (config.human_present) {
      human_now = filter(human.samples[static_cast<std::size_t>(k)].position);
      keep_out.push_back(human_now);
      if (auto w = window.push({human_now, k}); w && predictor) {
        rec.prediction = predictor->step(*w);
        for (int m = 0; m < rec.prediction->steps(); ++m) {
          predicted.push_back(rec.prediction->position(m));
          keep_out.push_back(predicted.back());
        }
      }
    }

    if ((robot.ee_position - robot.target).norm() <= scene.arrive_tolerance) {
      if (task_index + 1 < task_length) {
        ++task_index;
        robot.target = scene.targets[task_index % scene.targets.size()];
        new_task = true;
      }
    }

    double closest = std::numeric_limits<double>::infinity();
    for (const auto& h : keep_out)
      closest = std::min(closest, human_robot_distance(h, robot.base_position, robot.ee_position));
    // receding-horizon refresh (1 Hz) for a plan that ended short of the target, e.g. a standoff
    const bool at_target = (robot.ee_position - robot.target).norm() <= scene.arrive_tolerance;
    const bool reissue = plan.exhausted() && !at_target && k % scene.refresh_frames == 0;

    if (new_task || closest < scene.replan_distance || reissue) {
      plan = long_term_plan(robot, keep_out, scene.d_safe);
      plan.revision = ++revision;
      rec.replan = true;
      new_task = false;
    }

    rec.human = human_now;
    rec.ee = robot.ee_position;
    rec.target = robot.target;
    rec.min_dist = config.human_present
                       ? human_robot_distance(human_now, robot.base_position, robot.ee_position)
                       : std::numeric_limits<double>::infinity();

    if (config.human_present) {
      const auto step = short_term_step(robot, plan, human_now, predicted, scene.d_safe);
      robot = step.robot;
      rec.projected = step.projected;
    } else {
      robot.ee_position += nominal_step(robot.ee_position, plan, robot.v_max);
    }
    log.records.push_back(std::move(rec));
  }
  return log;
}

}  // namespace hmp
