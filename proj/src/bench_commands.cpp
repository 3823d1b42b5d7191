#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "hmp/bench.hpp"
#include "text_io.hpp"

namespace hmp::bench {

namespace {

// Table order: baseline first, then fixed and adaptive variants.
constexpr PredictorKind kOrder[] = {PredictorKind::None, PredictorKind::FixedLinear,
                                    PredictorKind::FixedNetwork, PredictorKind::AdaptiveLinear,
                                    PredictorKind::AdaptiveNetwork};

int rank(const std::string& model) {
  const auto kind = parse_predictor_kind(model);
  return static_cast<int>(std::find(std::begin(kOrder), std::end(kOrder), kind) - std::begin(kOrder));
}

void check_hash(const std::string& found, const std::string& expected, const fs::path& path) {
  if (found != expected) {
    throw ConfigError(path.string() + " was produced under config " + found +
                      ", current config is " + expected);
  }
}

void check_shapes(const ExperimentConfig& config, PredictorKind kind, const TrainedModels& m,
                  const fs::path& path) {
  const bool ok =
      uses_network(kind)
          ? m.network->inputs() == config.input_units() &&
                m.network->hidden_units() == config.hidden_units &&
                m.network->outputs() == config.output_units()
          : m.linear->inputs() == 3 * config.past_steps + 1 &&
                m.linear->outputs() == config.output_units();
  if (!ok) throw ConfigError(path.string() + ": parameter shapes do not match the config");
}

std::string stat_fields(const Statistic& s) {
  return io::fmt_short(s.mean) + ',' + io::fmt_short(s.variance);
}

}  // namespace

void cmd_gen_data(const ExperimentConfig& config, const fs::path& out_path) {
  write_dataset(out_path, config, generate_data(config));
}

void cmd_train(const ExperimentConfig& config, const fs::path& dataset, const fs::path& out_dir) {
  config.validate();
  std::string hash;
  const auto data = read_dataset(dataset, &hash);
  check_hash(hash, config_hash(config), dataset);
  const auto bundle = train_models(config, data);

  for (auto kind : kOrder)
    if (kind != PredictorKind::None) write_model(out_dir / model_file_name(kind), config, kind, bundle);

  std::string trace = "# config_hash=" + hash + "\nepoch,linear_loss,network_loss\n";
  const auto& lin = bundle.linear_trace.epoch_loss;
  const auto& net = bundle.network_trace.epoch_loss;
  for (std::size_t e = 0; e < std::max(lin.size(), net.size()); ++e) {
    trace += std::to_string(e) + ',' + (e < lin.size() ? io::fmt(lin[e]) : "") + ',' +
             (e < net.size() ? io::fmt(net[e]) : "") + '\n';
  }
  io::atomic_write(out_dir / "training_loss.csv", trace);
}

int cmd_run(const ExperimentConfig& config, const fs::path& model_dir, const fs::path& out_dir) {
  config.validate();
  const std::string hash = config_hash(config);

  std::map<PredictorKind, TrainedModels> models;
  for (auto kind : config.models) {
    if (kind == PredictorKind::None || models.contains(kind)) continue;
    const fs::path path = model_dir / model_file_name(kind);
    if (!fs::exists(path)) throw ConfigError("missing model file " + path.string());
    const auto file = read_model_file(path);
    check_hash(file.config_hash, hash, path);
    if (file.kind != kind) throw ConfigError(path.string() + " holds a different model kind");
    auto m = file.models();
    check_shapes(config, kind, m, path);
    models.emplace(kind, std::move(m));
  }

  fs::create_directories(out_dir);
  std::vector<TrialCell> todo;
  for (const auto& cell : trial_grid(config))
    if (!fs::exists(out_dir / trial_log_name(cell))) todo.push_back(cell);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const TrainedModels none{};

  const auto work = [&] {
    for (std::size_t i = next++; i < todo.size() && !failed; i = next++) {
      try {
        const auto& cell = todo[i];
        const TrialConfig trial = trial_config(config, cell);
        const double d_rt = ground_truth_drt(trial);
        const auto it = models.find(cell.model);
        const TrialLog log = run_trial(trial, it == models.end() ? none : it->second);
        write_trial_log(out_dir / trial_log_name(cell), hash, cell, log, d_rt,
                        config.future_steps);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        failed = true;
      }
    }
  };

  const auto extra = static_cast<std::size_t>(config.workers - 1);
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(extra, todo.size()); ++w) pool.emplace_back(work);
  work();
  pool.clear();  // joins
  if (failure) std::rethrow_exception(failure);
  return static_cast<int>(todo.size());
}

int cmd_report(const fs::path& log_dir, const fs::path& out_dir) {
  if (!fs::is_directory(log_dir)) throw IoError("log directory " + log_dir.string() + " not found");
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(log_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") paths.push_back(entry.path());
  if (paths.empty()) throw IoError("no trial logs in " + log_dir.string());
  std::sort(paths.begin(), paths.end());

  std::string hash;
  std::vector<TrialScore> scores;
  for (const auto& path : paths) {
    const auto trial = read_trial_log(path);
    if (hash.empty()) hash = trial.config_hash;
    check_hash(trial.config_hash, hash, path);
    scores.push_back(score_trial(trial.log, trial.cell, trial.d_rt));
  }
  // canonical order regardless of file naming
  std::stable_sort(scores.begin(), scores.end(), [](const TrialScore& a, const TrialScore& b) {
    return std::tuple(rank(a.model), a.pattern, a.trial) < std::tuple(rank(b.model), b.pattern, b.trial);
  });
  const auto report = aggregate(scores);

  std::vector<std::string> models;
  for (const auto& [m, _] : report.per_model) models.push_back(m);
  std::sort(models.begin(), models.end(),
            [](const auto& a, const auto& b) { return rank(a) < rank(b); });

  const std::string head = "# config_hash=" + hash + "\n";

  std::string err = head + "model,mean,variance,trials\n";
  std::string table = head +
      "model,prediction_error_mean,safety_mean,safety_variance,efficiency_mean,"
      "efficiency_variance,trials\n";
  for (const auto& m : models) {
    const auto& s = report.per_model.at(m);
    if (s.prediction_error) {
      err += m + ',' + stat_fields(*s.prediction_error) + ',' +
             std::to_string(s.prediction_error->count) + '\n';
    }
    table += m + ',' + (s.prediction_error ? io::fmt_short(s.prediction_error->mean) : "n/a") +
             ',' + stat_fields(s.safety) + ',' + stat_fields(s.efficiency) + ',' +
             std::to_string(s.safety.count) + '\n';
  }

  std::string curves = head + "model,pattern,trial,error_mean,error_std\n";
  std::string scatter = head + "model,pattern,trial,safety,efficiency\n";
  for (const auto& t : report.trials) {
    const std::string key = t.model + ',' + t.pattern + ',' + std::to_string(t.trial + 1);
    if (t.prediction_error) {
      curves += key + ',' + io::fmt_short(*t.prediction_error) + ',' +
                io::fmt_short(t.prediction_error_std) + '\n';
    }
    scatter += key + ',' + io::fmt_short(t.safety) + ',' + io::fmt_short(t.efficiency) + '\n';
  }

  std::string cells = head + "model,pattern,prediction_error_mean,safety_mean,efficiency_mean\n";
  for (const auto& m : models) {
    for (const auto& [key, s] : report.per_cell) {
      if (key.first != m) continue;
      cells += m + ',' + key.second + ',' +
               (s.prediction_error ? io::fmt_short(s.prediction_error->mean) : "n/a") + ',' +
               io::fmt_short(s.safety.mean) + ',' + io::fmt_short(s.efficiency.mean) + '\n';
    }
  }

  const std::string* contents[] = {&err, &table, &curves, &scatter, &cells};
  for (std::size_t i = 0; i < std::size(kReportFiles); ++i)
    io::atomic_write(out_dir / kReportFiles[i], *contents[i]);
  return static_cast<int>(paths.size());
}

void run_pipeline(const ExperimentConfig& config, const fs::path& root) {
  config.validate();
  io::atomic_write(root / "config.json", to_json(config).dump(2) + "\n");
  cmd_gen_data(config, root / "dataset.csv");
  cmd_train(config, root / "dataset.csv", root / "models");
  cmd_run(config, root / "models", root / "logs");
  cmd_report(root / "logs", root / "report");
}

}  // namespace hmp::bench
