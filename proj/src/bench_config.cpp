#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "hmp/bench.hpp"

namespace hmp::bench {

using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (patterns.empty()) throw ConfigError("no motion patterns configured");
  for (const auto& p : patterns) p.validate(past_steps);
  if (trajectories_per_pattern < 0) throw ConfigError("trajectories_per_pattern must be >= 0");
  if (trials_per_pattern < 1) throw ConfigError("trials_per_pattern must be >= 1");
  if (trial_cycles < 1) throw ConfigError("trial_cycles must be >= 1");
  if (past_steps < 1 || future_steps < 1) throw ConfigError("N and M must be positive");
  if (hidden_units < 1) throw ConfigError("hidden_units must be positive");
  if (models.empty()) throw ConfigError("no models configured");
  if (!(gain_scale > 0.0)) throw ConfigError("gain_scale must be positive");
  if (!std::isfinite(drift_per_100_frames)) throw ConfigError("drift must be finite");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  try {
    training.validate();
    schedule.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  scene.validate();
}

json to_json(const ExperimentConfig& c) {
  json patterns = json::array();
  for (const auto& p : c.patterns) {
    json wps = json::array();
    for (const auto& w : p.waypoints) wps.push_back(vec_json(w));
    patterns.push_back({{"label", p.label.value()},
                        {"waypoints", wps},
                        {"segment_frames", p.segment_frames},
                        {"noise_sigma", p.noise_sigma}});
  }
  json models = json::array();
  for (auto m : c.models) models.push_back(std::string(to_string(m)));
  json targets = json::array();
  for (const auto& t : c.scene.targets) targets.push_back(vec_json(t));

  return {
      {"master_seed", c.master_seed},
      {"patterns", patterns},
      {"trajectories_per_pattern", c.trajectories_per_pattern},
      {"waypoint_jitter", c.waypoint_jitter},
      {"trials_per_pattern", c.trials_per_pattern},
      {"trial_cycles", c.trial_cycles},
      {"drift_per_100_frames", c.drift_per_100_frames},
      {"models", models},
      {"past_steps", c.past_steps},
      {"future_steps", c.future_steps},
      {"hidden_units", c.hidden_units},
      {"learning_rate", c.training.learning_rate},
      {"epochs", c.training.epochs},
      {"minibatch_size", c.training.minibatch_size},
      {"training_seed", c.training.seed},
      {"lambda1", c.schedule.lambda1},
      {"lambda2", c.schedule.lambda2},
      {"gain_scale", c.gain_scale},
      {"scene",
       {{"base", vec_json(c.scene.base)},
        {"idle", vec_json(c.scene.idle)},
        {"targets", targets},
        {"fetch_cycles", c.scene.fetch_cycles},
        {"v_max", c.scene.v_max},
        {"d_safe", c.scene.d_safe},
        {"replan_distance", c.scene.replan_distance},
        {"arrive_tolerance", c.scene.arrive_tolerance},
        {"refresh_frames", c.scene.refresh_frames}}},
  };
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    read_opt(j, "master_seed", c.master_seed);
    if (j.contains("patterns")) {
      c.patterns.clear();
      for (const auto& p : j.at("patterns")) {
        MotionPattern pattern{ActionLabel(p.at("label").get<int>()), {}, {}, 0.01};
        for (const auto& w : p.at("waypoints")) pattern.waypoints.push_back(vec_from(w));
        pattern.segment_frames = p.at("segment_frames").get<std::vector<int>>();
        read_opt(p, "noise_sigma", pattern.noise_sigma);
        c.patterns.push_back(std::move(pattern));
      }
    }
    read_opt(j, "trajectories_per_pattern", c.trajectories_per_pattern);
    read_opt(j, "waypoint_jitter", c.waypoint_jitter);
    read_opt(j, "trials_per_pattern", c.trials_per_pattern);
    read_opt(j, "trial_cycles", c.trial_cycles);
    read_opt(j, "drift_per_100_frames", c.drift_per_100_frames);
    if (j.contains("models")) {
      c.models.clear();
      for (const auto& m : j.at("models")) c.models.push_back(parse_predictor_kind(m.get<std::string>()));
    }
    read_opt(j, "past_steps", c.past_steps);
    read_opt(j, "future_steps", c.future_steps);
    read_opt(j, "hidden_units", c.hidden_units);
    read_opt(j, "learning_rate", c.training.learning_rate);
    read_opt(j, "epochs", c.training.epochs);
    read_opt(j, "minibatch_size", c.training.minibatch_size);
    read_opt(j, "training_seed", c.training.seed);
    read_opt(j, "lambda1", c.schedule.lambda1);
    read_opt(j, "lambda2", c.schedule.lambda2);
    read_opt(j, "gain_scale", c.gain_scale);
    read_opt(j, "workers", c.workers);
    if (j.contains("scene")) {
      const auto& s = j.at("scene");
      if (s.contains("base")) c.scene.base = vec_from(s.at("base"));
      if (s.contains("idle")) c.scene.idle = vec_from(s.at("idle"));
      if (s.contains("targets")) {
        c.scene.targets.clear();
        for (const auto& t : s.at("targets")) c.scene.targets.push_back(vec_from(t));
      }
      read_opt(s, "fetch_cycles", c.scene.fetch_cycles);
      read_opt(s, "v_max", c.scene.v_max);
      read_opt(s, "d_safe", c.scene.d_safe);
      read_opt(s, "replan_distance", c.scene.replan_distance);
      read_opt(s, "arrive_tolerance", c.scene.arrive_tolerance);
      read_opt(s, "refresh_frames", c.scene.refresh_frames);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  try {
    return config_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<HumanTrajectory> generate_data(const ExperimentConfig& config) {
  config.validate();
  DatasetOptions options{config.trajectories_per_pattern, config.waypoint_jitter};
  return generate_dataset(config.patterns, mix_seed(config.master_seed, 0xda7a), options);
}

TrainedModels TrainedBundle::models(const ExperimentConfig& config) const {
  return {linear, network, {config.schedule, config.gain_scale, true}};
}

TrainedBundle train_models(const ExperimentConfig& config,
                           const std::vector<HumanTrajectory>& dataset) {
  const auto pairs = training_pairs(dataset, config.past_steps, config.future_steps);
  if (pairs.empty()) throw ArgumentError("dataset yields no training pairs");
  TrainingConfig training = config.training;
  training.seed = mix_seed(config.master_seed, 0x7a1, config.training.seed);
  auto lin = train_linear(pairs, training);
  auto net = train_network(pairs, training, config.hidden_units);
  return {std::move(lin.params), std::move(net.params), std::move(lin.trace),
          std::move(net.trace)};
}

std::vector<TrialCell> trial_grid(const ExperimentConfig& config) {
  std::vector<TrialCell> cells;
  for (std::size_t p = 0; p < config.patterns.size(); ++p)
    for (int t = 0; t < config.trials_per_pattern; ++t)
      for (auto m : config.models) cells.push_back({p, t, m});
  return cells;
}

TrialConfig trial_config(const ExperimentConfig& config, const TrialCell& cell) {
  const auto p = static_cast<std::uint64_t>(cell.pattern_index);
  const auto t = static_cast<std::uint64_t>(cell.trial);
  std::mt19937_64 rng(mix_seed(config.master_seed, 0xd71f7 + p, t));
  const double angle = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  const Vec3 drift = config.drift_per_100_frames * Vec3(std::cos(angle), std::sin(angle), 0.0);

  TrialConfig trial;
  trial.predictor = cell.model;
  trial.pattern = apply_drift(repeat_pattern(config.patterns[cell.pattern_index],
                                             config.trial_cycles),
                              drift);
  trial.seed = mix_seed(config.master_seed, 0x5eed + p, t);
  trial.scene = config.scene;
  trial.past_steps = config.past_steps;
  return trial;
}

std::string pattern_name(std::size_t pattern_index) {
  return "pattern" + std::to_string(pattern_index + 1);
}

TrialScore score_trial(const TrialLog& log, const TrialCell& cell, double d_rt) {
  TrialScore s;
  s.model = std::string(to_string(cell.model));
  s.pattern = pattern_name(cell.pattern_index);
  s.trial = cell.trial;
  s.prediction_error = prediction_error(log);
  if (s.prediction_error) {
    const auto series = prediction_error_series(log);
    s.prediction_error_std = std::sqrt(summarize(series).variance);
  }
  s.safety = safety_index(log);
  s.efficiency = efficiency_index(log, d_rt);
  return s;
}

}  // namespace hmp::bench
