#include "hmp/evaluation.hpp"

#include <cmath>
#include <numeric>

namespace hmp {

namespace {

// Sum of horizon errors and their count for frame index k.
std::pair<double, int> frame_error(const TrialLog& log, std::size_t k) {
  const auto& rec = log.records[k];
  double sum = 0.0;
  int count = 0;
  if (!rec.prediction) return {sum, count};
  for (int m = 0; m < rec.prediction->steps(); ++m) {
    const std::size_t realised = k + static_cast<std::size_t>(m) + 1;
    if (realised >= log.records.size()) break;
    sum += (rec.prediction->position(m) - log.records[realised].human).norm();
    ++count;
  }
  return {sum, count};
}

}  // namespace

std::optional<double> prediction_error(const TrialLog& log) {
  double sum = 0.0;
  long count = 0;
  for (std::size_t k = 0; k < log.records.size(); ++k) {
    const auto [s, c] = frame_error(log, k);
    sum += s;
    count += c;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::vector<double> prediction_error_series(const TrialLog& log) {
  std::vector<double> out;
  for (std::size_t k = 0; k < log.records.size(); ++k) {
    const auto [s, c] = frame_error(log, k);
    if (c > 0) out.push_back(s / c);
  }
  return out;
}

double safety_index(const TrialLog& log) {
  if (log.records.empty()) throw ArgumentError("safety index of an empty log");
  double sum = 0.0;
  for (const auto& r : log.records) sum += r.min_dist;
  return sum / static_cast<double>(log.records.size());
}

double mean_target_distance(const TrialLog& log) {
  if (log.records.empty()) throw ArgumentError("target distance of an empty log");
  double sum = 0.0;
  for (const auto& r : log.records) sum += (r.ee - r.target).norm();
  return sum / static_cast<double>(log.records.size());
}

double ground_truth_drt(TrialConfig config) {
  config.human_present = false;
  config.predictor = PredictorKind::None;
  if (config.frames == 0) config.frames = config.trial_frames();
  return mean_target_distance(run_trial(config, {}));
}

double efficiency_index(const TrialLog& log, double d_rt) {
  if (!(d_rt > 0.0)) throw ConfigError("D_RT must be positive");
  const double mean = mean_target_distance(log);
  if (!(mean > 0.0)) throw ConfigError("trial never leaves its target; efficiency undefined");
  return d_rt / mean;
}

Statistic summarize(std::span<const double> values) {
  Statistic s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.count;
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / (s.count - 1);
  }
  return s;
}

namespace {

ModelSummary summarize_group(const std::vector<const TrialScore*>& group) {
  std::vector<double> err, safety, efficiency;
  for (const auto* t : group) {
    if (t->prediction_error) err.push_back(*t->prediction_error);
    safety.push_back(t->safety);
    efficiency.push_back(t->efficiency);
  }
  ModelSummary out;
  if (!err.empty()) out.prediction_error = summarize(err);
  out.safety = summarize(safety);
  out.efficiency = summarize(efficiency);
  return out;
}

}  // namespace

ScoreReport aggregate(std::vector<TrialScore> trials) {
  ScoreReport report;
  report.trials = std::move(trials);
  std::map<std::string, std::vector<const TrialScore*>> by_model;
  std::map<std::pair<std::string, std::string>, std::vector<const TrialScore*>> by_cell;
  for (const auto& t : report.trials) {
    by_model[t.model].push_back(&t);
    by_cell[{t.model, t.pattern}].push_back(&t);
  }
  for (const auto& [model, group] : by_model) report.per_model[model] = summarize_group(group);
  for (const auto& [cell, group] : by_cell) report.per_cell[cell] = summarize_group(group);
  return report;
}

}  // namespace hmp
