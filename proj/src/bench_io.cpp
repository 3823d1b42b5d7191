#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hmp/bench.hpp"
#include "text_io.hpp"

namespace hmp::bench {

namespace {

constexpr const char* kDatasetHeader = "trial_id,frame,label,raw_x,raw_y,raw_z,x,y,z";
constexpr const char* kModelMagic = "hmp-model 1";

std::string log_header(int horizon) {
  std::string h = "frame,hx,hy,hz,rx,ry,rz";
  for (int m = 1; m <= horizon; ++m)
    for (const char* axis : {"x", "y", "z"}) h += ",pred_m" + std::to_string(m) + "_" + axis;
  return h + ",min_dist,replan_flag,tx,ty,tz,projection_flag";
}

void put_vec(std::string& out, const Vec3& v) {
  for (int i = 0; i < 3; ++i) {
    out += ',';
    out += io::fmt(v[i]);
  }
}

Vec3 parse_vec3(const std::string& text, const io::Where& where) {
  const auto parts = io::split(text, ',');
  if (parts.size() != 3) throw where.fail("expected three comma-separated numbers");
  return {io::to_double(parts[0], where), io::to_double(parts[1], where),
          io::to_double(parts[2], where)};
}

}  // namespace

// ---- dataset ----------------------------------------------------------------

void write_dataset(const fs::path& path, const ExperimentConfig& config,
                   const std::vector<HumanTrajectory>& dataset) {
  std::string out = "# config_hash=" + config_hash(config) + "\n" + kDatasetHeader + "\n";
  for (std::size_t id = 0; id < dataset.size(); ++id) {
    const auto& traj = dataset[id];
    LowPassFilter filter;
    for (const auto& s : traj.samples) {
      const Vec3 smoothed = filter(s.position);
      out += std::to_string(id) + ',' + std::to_string(s.frame) + ',' +
             std::to_string(traj.label.value());
      put_vec(out, s.position);
      put_vec(out, smoothed);
      out += '\n';
    }
  }
  io::atomic_write(path, out);
}

std::vector<HumanTrajectory> read_dataset(const fs::path& path, std::string* hash) {
  io::LineReader in(path);
  const auto meta = in.read_comments();
  if (hash) *hash = io::meta_value(meta, "config_hash");
  std::string line;
  if (!in.next(line)) throw in.where().fail("missing header row");
  if (line != kDatasetHeader) throw in.where().fail("header does not match the dataset schema");

  std::vector<HumanTrajectory> out;
  long last_id = -1;
  while (in.next(line)) {
    const auto where = in.where();
    const auto f = io::split(line, ',');
    if (f.size() != 9) throw where.fail("expected 9 fields, found " + std::to_string(f.size()));
    const long id = io::to_int(f[0], where);
    const long frame = io::to_int(f[1], where);
    const long label = io::to_int(f[2], where);
    if (label < 1 || label > ActionLabel::kCount) throw where.fail("label out of range");
    if (id != last_id) {
      if (id != last_id + 1) throw where.fail("trial ids must be consecutive");
      if (frame != 0) throw where.fail("a trajectory must start at frame 0");
      out.push_back({{}, ActionLabel(static_cast<int>(label)), 0});
      last_id = id;
    }
    auto& traj = out.back();
    if (frame != static_cast<long>(traj.samples.size())) throw where.fail("frames must be consecutive");
    if (label != traj.label.value()) throw where.fail("label changes within a trajectory");
    const Vec3 raw(io::to_double(f[3], where), io::to_double(f[4], where), io::to_double(f[5], where));
    traj.samples.push_back({raw, frame});
  }
  return out;
}

// ---- models -----------------------------------------------------------------

std::string model_file_name(PredictorKind kind) {
  if (kind == PredictorKind::None) throw ConfigError("the baseline has no model file");
  return std::string(to_string(kind)) + ".model";
}

void write_model(const fs::path& path, const ExperimentConfig& config, PredictorKind kind,
                 const TrainedBundle& bundle) {
  std::string out = std::string(kModelMagic) + "\nkind " + std::string(to_string(kind)) +
                    "\nconfig_hash " + config_hash(config) + "\n";
  const auto scalar = [&](const char* name, double v) {
    out += std::string("scalar ") + name + ' ' + io::fmt(v) + '\n';
  };
  const auto matrix = [&](const char* name, const Eigen::MatrixXd& m) {
    out += std::string("matrix ") + name + ' ' + std::to_string(m.rows()) + ' ' +
           std::to_string(m.cols()) + '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c) out += ' ';
        out += io::fmt(m(r, c));
      }
      out += '\n';
    }
  };
  switch (kind) {
    case PredictorKind::FixedLinear:
    case PredictorKind::AdaptiveLinear:
      matrix("theta", bundle.linear.theta);
      break;
    case PredictorKind::FixedNetwork:
    case PredictorKind::AdaptiveNetwork:
      matrix("hidden", bundle.network.hidden);
      matrix("output", bundle.network.output);
      break;
    case PredictorKind::None:
      throw ConfigError("the baseline has no model file");
  }
  if (is_adaptive(kind)) {
    scalar("gain_scale", config.gain_scale);
    scalar("lambda1", config.schedule.lambda1);
    scalar("lambda2", config.schedule.lambda2);
  }
  io::atomic_write(path, out);
}

ModelFile read_model_file(const fs::path& path) {
  io::LineReader in(path);
  std::string line;
  if (!in.next(line) || line != kModelMagic) throw in.where().fail("not a model file");
  ModelFile file;
  bool have_kind = false;
  while (in.next(line)) {
    const auto where = in.where();
    std::istringstream words(line);
    std::string tag, name;
    words >> tag;
    if (tag == "kind") {
      words >> name;
      try {
        file.kind = parse_predictor_kind(name);
      } catch (const ConfigError&) {
        throw where.fail("unknown model kind '" + name + "'");
      }
      have_kind = true;
    } else if (tag == "config_hash") {
      words >> file.config_hash;
    } else if (tag == "scalar") {
      std::string value;
      words >> name >> value;
      file.scalars[name] = io::to_double(value, where);
    } else if (tag == "matrix") {
      long rows = 0, cols = 0;
      if (!(words >> name >> rows >> cols) || rows < 1 || cols < 1)
        throw where.fail("malformed matrix header");
      Eigen::MatrixXd m(rows, cols);
      for (long r = 0; r < rows; ++r) {
        if (!in.next(line)) throw in.where().fail("matrix '" + name + "' is truncated");
        const auto row_where = in.where();
        std::istringstream values(line);
        std::string v;
        long c = 0;
        while (values >> v) {
          if (c >= cols) throw row_where.fail("too many values in matrix row");
          m(r, c++) = io::to_double(v, row_where);
        }
        if (c != cols) throw row_where.fail("too few values in matrix row");
      }
      file.matrices[name] = std::move(m);
    } else if (!tag.empty()) {
      throw where.fail("unknown entry '" + tag + "'");
    }
  }
  if (!have_kind) throw ValidationError(path.string() + ": model kind missing");
  return file;
}

TrainedModels ModelFile::models() const {
  const auto get = [&](const char* name) -> const Eigen::MatrixXd& {
    const auto it = matrices.find(name);
    if (it == matrices.end())
      throw ConfigError(std::string("model file lacks matrix '") + name + "'");
    return it->second;
  };
  TrainedModels m;
  if (uses_network(kind)) {
    m.network = NetworkParams{get("hidden"), get("output")};
    if (m.network->hidden.rows() != m.network->output.rows())
      throw ConfigError("network matrices disagree on the hidden width");
  } else if (kind != PredictorKind::None) {
    m.linear = LinearParams{get("theta")};
  }
  if (is_adaptive(kind)) {
    const auto scalar = [&](const char* name) {
      const auto it = scalars.find(name);
      if (it == scalars.end()) throw ConfigError(std::string("model file lacks '") + name + "'");
      return it->second;
    };
    m.adaptation.gain_scale = scalar("gain_scale");
    m.adaptation.schedule = {scalar("lambda1"), scalar("lambda2")};
    try {
      m.adaptation.schedule.validate();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  return m;
}

// ---- trial logs -------------------------------------------------------------

std::string trial_log_name(const TrialCell& cell) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s_trial%02d_%s.csv", pattern_name(cell.pattern_index).c_str(),
                cell.trial + 1, std::string(to_string(cell.model)).c_str());
  return buf;
}

void write_trial_log(const fs::path& path, const std::string& hash, const TrialCell& cell,
                     const TrialLog& log, double d_rt, int horizon) {
  std::string out;
  out += "# config_hash=" + hash + "\n";
  out += "# model=" + std::string(to_string(cell.model)) + "\n";
  out += "# pattern=" + std::to_string(cell.pattern_index) + "\n";
  out += "# trial=" + std::to_string(cell.trial) + "\n";
  out += "# seed=" + std::to_string(log.seed) + "\n";
  out += "# base=" + io::fmt(log.base.x()) + ',' + io::fmt(log.base.y()) + ',' +
         io::fmt(log.base.z()) + "\n";
  out += "# d_safe=" + io::fmt(log.d_safe) + "\n";
  out += "# d_rt=" + io::fmt(d_rt) + "\n";
  out += "# horizon=" + std::to_string(horizon) + "\n";
  out += log_header(horizon) + "\n";
  for (const auto& r : log.records) {
    out += std::to_string(r.frame);
    put_vec(out, r.human);
    put_vec(out, r.ee);
    if (r.prediction && r.prediction->steps() != horizon)
      throw DimensionError("prediction horizon differs from the log header");
    for (int m = 0; m < horizon; ++m) {
      if (r.prediction) {
        put_vec(out, r.prediction->position(m));
      } else {
        out += ",,,";
      }
    }
    out += ',' + io::fmt(r.min_dist);
    out += r.replan ? ",1" : ",0";
    put_vec(out, r.target);
    out += r.projected ? ",1\n" : ",0\n";
  }
  io::atomic_write(path, out);
}

LoadedTrial read_trial_log(const fs::path& path) {
  io::LineReader in(path);
  const auto meta = in.read_comments();
  const auto where0 = in.where();
  LoadedTrial t;
  int horizon = 0;
  try {
    t.config_hash = io::meta_value(meta, "config_hash");
    t.model = io::meta_value(meta, "model");
    t.cell.model = parse_predictor_kind(t.model);
    t.cell.pattern_index = static_cast<std::size_t>(io::to_int(io::meta_value(meta, "pattern"), where0));
    t.cell.trial = static_cast<int>(io::to_int(io::meta_value(meta, "trial"), where0));
    t.log.seed = std::stoull(io::meta_value(meta, "seed"));
    t.log.base = parse_vec3(io::meta_value(meta, "base"), where0);
    t.log.d_safe = io::to_double(io::meta_value(meta, "d_safe"), where0);
    t.d_rt = io::to_double(io::meta_value(meta, "d_rt"), where0);
    horizon = static_cast<int>(io::to_int(io::meta_value(meta, "horizon"), where0));
  } catch (const ConfigError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  } catch (const std::logic_error&) {
    throw ValidationError(path.string() + ": malformed seed");
  }
  if (horizon < 1) throw where0.fail("horizon must be positive");
  t.log.predictor = t.cell.model;
  t.log.horizon = horizon;

  std::string line;
  if (!in.next(line)) throw in.where().fail("missing header row");
  if (line != log_header(horizon)) throw in.where().fail("header does not match the trial-log schema");
  const std::size_t width = 7 + 3 * static_cast<std::size_t>(horizon) + 6;
  while (in.next(line)) {
    const auto where = in.where();
    const auto f = io::split(line, ',');
    if (f.size() != width) throw where.fail("expected " + std::to_string(width) + " fields");
    FrameRecord r;
    r.frame = io::to_int(f[0], where);
    const auto vec = [&](std::size_t i) {
      return Vec3(io::to_double(f[i], where), io::to_double(f[i + 1], where),
                  io::to_double(f[i + 2], where));
    };
    r.human = vec(1);
    r.ee = vec(4);
    const std::size_t p0 = 7;
    const bool has_pred = !f[p0].empty();
    if (has_pred) {
      Eigen::VectorXd future(3 * horizon);
      for (int i = 0; i < 3 * horizon; ++i) future(i) = io::to_double(f[p0 + i], where);
      r.prediction = PredictedTrajectory{future};
    } else {
      for (int i = 0; i < 3 * horizon; ++i)
        if (!f[p0 + i].empty()) throw where.fail("partially empty prediction");
    }
    const std::size_t q = p0 + 3 * horizon;
    r.min_dist = io::to_double(f[q], where);
    r.replan = io::to_int(f[q + 1], where) != 0;
    r.target = vec(q + 2);
    r.projected = io::to_int(f[q + 5], where) != 0;
    t.log.records.push_back(std::move(r));
  }
  return t;
}

}  // namespace hmp::bench
