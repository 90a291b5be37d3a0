#include "abtrack/kalman.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>

#include "abtrack/error.hpp"

namespace abtrack {

namespace {

constexpr double kMinExtent = 1e-3;

using ObservationMatrix = Eigen::Matrix<double, 4, 8>;

StateMatrix transition() {
  StateMatrix f = StateMatrix::Identity();
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
  return f;
}

ObservationMatrix observation() {
  ObservationMatrix h = ObservationMatrix::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
  return h;
}

void require_psd(const MeasurementMatrix& r) {
  if (!r.allFinite()) throw PreconditionError("measurement noise must be finite");
  const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
  if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw PreconditionError("measurement noise must be symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<MeasurementMatrix> eig(r, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
    throw PreconditionError("measurement noise must be positive semidefinite");
  }
}

}  // namespace

Box2D KalmanState::box() const noexcept {
  return {mean(0), mean(1), std::max(mean(2), kMinExtent), std::max(mean(3), kMinExtent)};
}

KalmanState kalman_init(const Box2D& z, double position_var, double velocity_var) {
  KalmanState s;
  s.mean << z.x, z.y, z.w, z.h, 0.0, 0.0, 0.0, 0.0;
  s.covariance.setZero();
  s.covariance.diagonal() << position_var, position_var, position_var, position_var, velocity_var,
      velocity_var, velocity_var, velocity_var;
  return s;
}

KalmanState kalman_predict(const KalmanState& s, const StateMatrix& q) {
  static const StateMatrix f = transition();
  KalmanState out;
  out.mean = f * s.mean;
  out.covariance = f * s.covariance * f.transpose() + q;
  return out;
}

KalmanState kalman_update(const KalmanState& s, const Box2D& z, const MeasurementMatrix& r) {
  require_psd(r);
  static const ObservationMatrix h = observation();
  const Eigen::Matrix<double, 4, 1> measured(z.x, z.y, z.w, z.h);
  const Eigen::Matrix<double, 4, 1> innovation = measured - h * s.mean;
  const MeasurementMatrix innovation_cov = h * s.covariance * h.transpose() + r;

  // K = P H^T S^-1, computed as (S^-1 H P)^T with S symmetric. A singular S
  // means some measured components are already certain; they get zero gain.
  Eigen::Matrix<double, 8, 4> gain;
  const Eigen::LDLT<MeasurementMatrix> ldlt(innovation_cov);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive() && ldlt.vectorD().minCoeff() > 0.0) {
    gain = ldlt.solve(h * s.covariance).transpose();
  } else {
    const MeasurementMatrix pinv = innovation_cov.completeOrthogonalDecomposition().pseudoInverse();
    gain = s.covariance * h.transpose() * pinv;
  }

  KalmanState out;
  out.mean = s.mean + gain * innovation;
  // Joseph form keeps the covariance symmetric PSD.
  const StateMatrix ikh = StateMatrix::Identity() - gain * h;
  out.covariance = ikh * s.covariance * ikh.transpose() + gain * r * gain.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  out.mean(2) = std::max(out.mean(2), kMinExtent);
  out.mean(3) = std::max(out.mean(3), kMinExtent);
  return out;
}

StateMatrix process_noise(double position_var, double velocity_var) {
  StateMatrix q = StateMatrix::Zero();
  q.diagonal() << position_var, position_var, position_var, position_var, velocity_var, velocity_var,
      velocity_var, velocity_var;
  return q;
}

MeasurementMatrix measurement_noise(double var) {
  return MeasurementMatrix::Identity() * var;
}

}  // namespace abtrack
