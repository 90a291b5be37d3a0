#pragma once

#include <Eigen/Core>

#include "abtrack/geometry.hpp"

namespace abtrack {

using StateVector = Eigen::Matrix<double, 8, 1>;
using StateMatrix = Eigen::Matrix<double, 8, 8>;
using MeasurementMatrix = Eigen::Matrix<double, 4, 4>;

/// Constant-velocity box state (x, y, w, h, vx, vy, vw, vh), dt = 1 frame.
struct KalmanState {
  StateVector mean = StateVector::Zero();
  StateMatrix covariance = StateMatrix::Identity();

  /// Position part as a box; extent clamped to stay positive.
  Box2D box() const noexcept;
};

/// Zero-velocity state centered on `z`; position variance `position_var`,
/// velocity variance `velocity_var`.
KalmanState kalman_init(const Box2D& z, double position_var, double velocity_var);

/// x' = F x, P' = F P F^T + Q.
KalmanState kalman_predict(const KalmanState& s, const StateMatrix& q);

/// Standard correction with the 4-dim box measurement. Components whose
/// innovation variance is zero are left at the prior. Throws
/// PreconditionError when `r` is not symmetric positive semidefinite.
KalmanState kalman_update(const KalmanState& s, const Box2D& z, const MeasurementMatrix& r);

StateMatrix process_noise(double position_var, double velocity_var);
MeasurementMatrix measurement_noise(double var);

}  // namespace abtrack
