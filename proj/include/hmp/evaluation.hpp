#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hmp/robot_sim.hpp"

namespace hmp {

/// Mean Euclidean distance between each predicted step and the smoothed
/// position realised at that step. Horizon steps past the end of the trial are
/// dropped. Empty when the log carries no predictions.
std::optional<double> prediction_error(const TrialLog& log);

/// Per-frame mean horizon error, for frames that carry a scorable prediction.
std::vector<double> prediction_error_series(const TrialLog& log);

/// Mean over frames of the per-frame minimum human-robot distance.
double safety_index(const TrialLog& log);

/// Mean robot-target distance over the trial.
double mean_target_distance(const TrialLog& log);

/// Mean robot-target distance of the same configuration with the human removed.
double ground_truth_drt(TrialConfig config);

/// D_RT over the trial's mean robot-target distance.
double efficiency_index(const TrialLog& log, double d_rt);

struct TrialScore {
  std::string model;
  std::string pattern;
  int trial = 0;
  std::optional<double> prediction_error;
  double prediction_error_std = 0.0;  // spread of the per-frame errors within the trial
  double safety = 0.0;
  double efficiency = 0.0;
};

struct Statistic {
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 for a single sample
  int count = 0;
};

Statistic summarize(std::span<const double> values);

struct ModelSummary {
  std::optional<Statistic> prediction_error;
  Statistic safety;
  Statistic efficiency;
};

struct ScoreReport {
  std::vector<TrialScore> trials;
  std::map<std::string, ModelSummary> per_model;
  std::map<std::pair<std::string, std::string>, ModelSummary> per_cell;  // (model, pattern)
};

ScoreReport aggregate(std::vector<TrialScore> trials);

}  // namespace hmp
