#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hmp/evaluation.hpp"
#include "hmp/human_sim.hpp"
#include "hmp/predictor.hpp"
#include "hmp/robot_sim.hpp"

namespace hmp::bench {

namespace fs = std::filesystem;

/// Every knob of the benchmark protocol. Serialised verbatim (and hashed) into
/// each output file.
struct ExperimentConfig {
  std::uint64_t master_seed = 2019;

  std::vector<MotionPattern> patterns = default_patterns();
  int trajectories_per_pattern = 30;
  double waypoint_jitter = 0.02;

  int trials_per_pattern = 20;
  int trial_cycles = 3;                 // pattern repetitions per trial
  double drift_per_100_frames = 0.06;   // m, horizontal, direction drawn per trial
  std::vector<PredictorKind> models{PredictorKind::FixedLinear, PredictorKind::FixedNetwork,
                                    PredictorKind::AdaptiveLinear, PredictorKind::AdaptiveNetwork,
                                    PredictorKind::None};

  int past_steps = 3;
  int future_steps = 3;
  int hidden_units = 40;
  TrainingConfig training{};

  LambdaSchedule schedule{};
  double gain_scale = 1000.0;

  RobotScene scene{};

  int workers = 1;  // execution only; not part of the hash

  void validate() const;
  int input_units() const { return 3 * past_steps + 2; }
  int output_units() const { return 3 * future_steps; }
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const fs::path& path);

/// FNV-1a over the canonical JSON form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

// ---- in-memory pipeline -------------------------------------------------

std::vector<HumanTrajectory> generate_data(const ExperimentConfig& config);

struct TrainedBundle {
  LinearParams linear;
  NetworkParams network;
  LossTrace linear_trace;
  LossTrace network_trace;

  TrainedModels models(const ExperimentConfig& config) const;
};

TrainedBundle train_models(const ExperimentConfig& config,
                           const std::vector<HumanTrajectory>& dataset);

struct TrialCell {
  std::size_t pattern_index = 0;
  int trial = 0;
  PredictorKind model = PredictorKind::None;
};

std::vector<TrialCell> trial_grid(const ExperimentConfig& config);

/// Human seed and drifted motion of one (pattern, trial) cell; identical for
/// every predictor so trials are paired.
TrialConfig trial_config(const ExperimentConfig& config, const TrialCell& cell);

std::string pattern_name(std::size_t pattern_index);

/// Scores one log; `d_rt` comes from the human-free run of the same scene.
TrialScore score_trial(const TrialLog& log, const TrialCell& cell, double d_rt);

// ---- file formats -------------------------------------------------------

/// `trial_id,frame,label,raw_x,raw_y,raw_z,x,y,z`
void write_dataset(const fs::path& path, const ExperimentConfig& config,
                   const std::vector<HumanTrajectory>& dataset);
std::vector<HumanTrajectory> read_dataset(const fs::path& path, std::string* hash = nullptr);

/// Self-describing text model: header lines `kind`, `config_hash`, `scalar
/// <name> <value>` and `matrix <name> <rows> <cols>` followed by row-major
/// values. Fixed variants carry their parameters; adaptive variants carry the
/// frozen initial parameters plus the gain scale and λ settings.
void write_model(const fs::path& path, const ExperimentConfig& config, PredictorKind kind,
                 const TrainedBundle& bundle);

struct ModelFile {
  PredictorKind kind = PredictorKind::None;
  std::string config_hash;
  std::map<std::string, Eigen::MatrixXd> matrices;
  std::map<std::string, double> scalars;

  TrainedModels models() const;
};
ModelFile read_model_file(const fs::path& path);
std::string model_file_name(PredictorKind kind);

/// `frame,hx,hy,hz,rx,ry,rz,pred_m1_x..pred_mM_z,min_dist,replan_flag,tx,ty,tz,projection_flag`
/// Frames without a prediction leave the `pred_*` fields empty.
void write_trial_log(const fs::path& path, const std::string& hash, const TrialCell& cell,
                     const TrialLog& log, double d_rt, int horizon);

struct LoadedTrial {
  std::string config_hash;
  TrialCell cell;
  std::string model;
  double d_rt = 0.0;
  TrialLog log;
};
LoadedTrial read_trial_log(const fs::path& path);

std::string trial_log_name(const TrialCell& cell);

// ---- commands ------------------------------------------------------------

/// Report files written by `cmd_report`.
inline constexpr const char* kReportFiles[] = {"prediction_error.csv", "safety_efficiency.csv",
                                               "error_curves.csv", "safety_vs_efficiency.csv",
                                               "per_pattern.csv"};

void cmd_gen_data(const ExperimentConfig& config, const fs::path& out_path);
/// Writes one model file per predictor setting plus `training_loss.csv`.
void cmd_train(const ExperimentConfig& config, const fs::path& dataset, const fs::path& out_dir);
/// Returns the number of trials executed; trials whose log already exists are skipped.
int cmd_run(const ExperimentConfig& config, const fs::path& model_dir, const fs::path& out_dir);
/// Returns the number of logs aggregated.
int cmd_report(const fs::path& log_dir, const fs::path& out_dir);

/// gen-data → train → run → report under one root directory:
/// `config.json`, `dataset.csv`, `models/`, `logs/`, `report/`.
void run_pipeline(const ExperimentConfig& config, const fs::path& root);

}  // namespace hmp::bench
