#include "hmp/predictor.hpp"

#include <array>
#include <utility>

namespace hmp {

namespace {

constexpr std::array<std::pair<PredictorKind, std::string_view>, 5> kNames{{
    {PredictorKind::None, "baseline"},
    {PredictorKind::FixedLinear, "fixed-linear"},
    {PredictorKind::FixedNetwork, "fixed-network"},
    {PredictorKind::AdaptiveLinear, "adaptive-linear"},
    {PredictorKind::AdaptiveNetwork, "adaptive-network"},
}};

}  // namespace

std::string_view to_string(PredictorKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

PredictorKind parse_predictor_kind(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  if (name == "none") return PredictorKind::None;
  throw ConfigError("unknown predictor '" + std::string(name) + "'");
}

OnlinePredictor::OnlinePredictor(PredictorKind kind, const TrainedModels& models)
    : kind_(kind), adaptation_(models.adaptation) {
  if (kind == PredictorKind::None) throw ConfigError("the baseline has no predictor");
  if (uses_network(kind)) {
    if (!models.network) throw ConfigError(std::string(to_string(kind)) + " needs a network model");
    network_ = models.network;
    horizon_ = network_->outputs() / 3;
  } else {
    if (!models.linear) throw ConfigError(std::string(to_string(kind)) + " needs a linear model");
    linear_ = models.linear;
    horizon_ = linear_->outputs() / 3;
  }
  if (is_adaptive(kind)) {
    const Eigen::MatrixXd& theta0 = network_ ? network_->output : linear_->theta;
    adaptive_ = AdaptiveState<double>::initial(theta0, adaptation_.gain_scale,
                                               adaptation_.schedule);
  }
}

Eigen::VectorXd OnlinePredictor::features(const MotionWindow& window) const {
  if (network_) return nn_hidden(*network_, build_network_input(window));
  return build_linear_regressor(window);
}

PredictedTrajectory OnlinePredictor::step(const MotionWindow& window) {
  Eigen::VectorXd phi = features(window);

  if (!adaptive_) {
    Eigen::VectorXd out = network_ ? Eigen::VectorXd(network_->output.transpose() * phi)
                                   : Eigen::VectorXd(linear_->theta.transpose() * phi);
    return PredictedTrajectory{std::move(out)};
  }

  if (adaptation_.enabled) {
    recent_.push_back(window.newest());
    if (static_cast<int>(recent_.size()) > horizon_) recent_.pop_front();

    if (static_cast<int>(pending_.size()) == horizon_) {
      Eigen::VectorXd observed(3 * horizon_);
      for (int m = 0; m < horizon_; ++m) observed.segment<3>(3 * m) = recent_[m];
      try {
        theta_update(*adaptive_, pending_.front(), observed);
      } catch (const NumericalError&) {
        adaptive_->gain = adaptation_.gain_scale *
                          Eigen::MatrixXd::Identity(adaptive_->features(), adaptive_->features());
        ++gain_resets_;
      }
      pending_.pop_front();
    }
    pending_.push_back(phi);
  }
  return PredictedTrajectory{apriori_predict(*adaptive_, phi)};
}

void OnlinePredictor::reset_stream() {
  pending_.clear();
  recent_.clear();
}

}  // namespace hmp
