#pragma once

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "hmp/errors.hpp"

namespace hmp {

/// Forgetting factor λ₁ ∈ (0, 1] and gain weight λ₂ ∈ [0, 2].
///   λ₁ = 1, λ₂ = 1     standard least squares gain
///   λ₁ < 1, λ₂ = 1     least squares with forgetting
///   λ₁ = 1, λ₂ = 0     constant adaptation gain
struct LambdaSchedule {
  double lambda1 = 0.998;
  double lambda2 = 1.0;

  void validate() const {
    if (!(lambda1 > 0.0 && lambda1 <= 1.0)) {
      throw ValidationError("lambda1 must lie in (0, 1], got " + std::to_string(lambda1));
    }
    if (!(lambda2 >= 0.0 && lambda2 <= 2.0)) {
      throw ValidationError("lambda2 must lie in [0, 2], got " + std::to_string(lambda2));
    }
  }
};

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Parameters and gain of one RLS-PAA estimator.
///
/// The regression has 3M outputs sharing a single regressor row φ, so the full
/// 3M × 3M·d block-diagonal data matrix has identical diagonal blocks. Under a
/// block-diagonal initial gain the full gain stays block-diagonal with identical
/// blocks, so a single d × d gain `gain` is stored. Column j of `theta` is the
/// parameter block of output j; stacking the columns gives the parameter vector.
template <typename Scalar>
struct AdaptiveState {
  MatrixX<Scalar> theta;  // d × outputs
  MatrixX<Scalar> gain;   // d × d, symmetric positive definite
  LambdaSchedule schedule;

  static AdaptiveState initial(const MatrixX<Scalar>& theta0, Scalar gain_scale,
                               LambdaSchedule schedule) {
    schedule.validate();
    if (!(gain_scale > Scalar(0))) throw ValidationError("initial gain scale must be positive");
    return {theta0, gain_scale * MatrixX<Scalar>::Identity(theta0.rows(), theta0.rows()),
            schedule};
  }

  int features() const noexcept { return static_cast<int>(theta.rows()); }
  int outputs() const noexcept { return static_cast<int>(theta.cols()); }

  /// Column stack of `theta`.
  VectorX<Scalar> parameter_vector() const {
    return Eigen::Map<const VectorX<Scalar>>(theta.data(), theta.size());
  }
};

/// Logical block-diagonal regressor: `blocks` copies of `feature` on the diagonal.
template <typename Scalar>
struct BlockRegressor {
  VectorX<Scalar> feature;
  int blocks = 0;

  MatrixX<Scalar> dense() const {
    const auto d = feature.size();
    MatrixX<Scalar> phi = MatrixX<Scalar>::Zero(blocks, blocks * d);
    for (int j = 0; j < blocks; ++j) phi.block(j, j * d, 1, d) = feature.transpose();
    return phi;
  }
};

/// Smallest-eigenvalue-free positive definiteness check via Cholesky.
template <typename Derived>
bool is_positive_definite(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (!m.allFinite()) return false;
  Eigen::LLT<MatrixX<Scalar>> llt(m);
  return llt.info() == Eigen::Success;
}

/// F' = (1/λ₁) [F − λ₂ F φ φᵀ F / (λ₁ + λ₂ φᵀ F φ)], symmetrised.
/// Throws NumericalError when the result is no longer positive definite.
template <typename DerivedF, typename DerivedPhi>
MatrixX<typename DerivedF::Scalar> gain_update(const Eigen::MatrixBase<DerivedF>& gain,
                                                const Eigen::MatrixBase<DerivedPhi>& feature,
                                                const LambdaSchedule& schedule) {
  using Scalar = typename DerivedF::Scalar;
  if (gain.rows() != gain.cols() || gain.rows() != feature.size()) {
    throw DimensionError("gain is " + std::to_string(gain.rows()) + "x" +
                         std::to_string(gain.cols()) + " but feature has " +
                         std::to_string(feature.size()) + " entries");
  }
  const Scalar l1 = static_cast<Scalar>(schedule.lambda1);
  const Scalar l2 = static_cast<Scalar>(schedule.lambda2);
  const VectorX<Scalar> f_phi = gain * feature;
  const Scalar denom = l1 + l2 * feature.dot(f_phi);

  MatrixX<Scalar> next = gain;
  next.noalias() -= (l2 / denom) * f_phi * f_phi.transpose();
  next /= l1;
  next = Scalar(0.5) * (next + next.transpose()).eval();

  if (!is_positive_definite(next)) {
    throw NumericalError("adaptation gain lost positive definiteness");
  }
  return next;
}

template <typename Scalar, typename DerivedPhi>
VectorX<Scalar> apriori_predict(const AdaptiveState<Scalar>& state,
                                const Eigen::MatrixBase<DerivedPhi>& feature) {
  if (feature.size() != state.features()) {
    throw DimensionError("feature has " + std::to_string(feature.size()) +
                         " entries, estimator expects " + std::to_string(state.features()));
  }
  return state.theta.transpose() * feature;
}

template <typename Scalar>
VectorX<Scalar> apriori_predict(const AdaptiveState<Scalar>& state,
                                const BlockRegressor<Scalar>& regressor) {
  if (regressor.blocks != state.outputs()) throw DimensionError("block count mismatch");
  return apriori_predict(state, regressor.feature);
}

/// One RLS-PAA correction from a matured (feature, observation) pair. The gain is
/// updated first and the parameters are corrected with the updated gain, which
/// is the ordering of the semi-adaptable network loop; returns the a-priori residual.
template <typename Scalar, typename DerivedPhi, typename DerivedObs>
VectorX<Scalar> theta_update(AdaptiveState<Scalar>& state,
                             const Eigen::MatrixBase<DerivedPhi>& feature,
                             const Eigen::MatrixBase<DerivedObs>& observed) {
  if (observed.size() != state.outputs()) {
    throw DimensionError("observation has " + std::to_string(observed.size()) +
                         " entries, estimator emits " + std::to_string(state.outputs()));
  }
  const VectorX<Scalar> residual = observed - apriori_predict(state, feature);
  state.gain = gain_update(state.gain, feature, state.schedule);
  state.theta.noalias() += (state.gain * feature) * residual.transpose();
  return residual;
}

}  // namespace hmp
