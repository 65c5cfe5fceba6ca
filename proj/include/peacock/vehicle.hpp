#ifndef PEACOCK_VEHICLE_HPP
#define PEACOCK_VEHICLE_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "peacock/trajgen.hpp"

namespace peacock {

struct VehicleState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // body -> world
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();         // body frame

  double yaw() const { return std::atan2(rotation(1, 0), rotation(0, 0)); }
};

struct VehicleParams {
  double mass = 1.5;     // kg
  double gravity = 9.81;
  Eigen::Matrix3d inertia =
      Eigen::Vector3d(0.029, 0.029, 0.055).asDiagonal();  // kg m^2
  // Position/velocity gains scale with mass, attitude gains with the
  // nominal inertia; numeric values below already include those factors.
  double k_pos = 24.0;  // 16 per unit mass
  double k_vel = 8.4;   // 5.6 per unit mass
  double k_rot = 8.81;
  double k_omega = 2.54;
};

struct ControlInput {
  double thrust = 0.0;                              // N along body z
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();  // N m, body frame
};

/// Flat trajectory target for one control tick.
struct FlatTarget {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d acceleration = Eigen::Vector3d::Zero();
  double yaw = 0.0;
};

/// Geometric tracking controller on SE(3): thrust from the desired
/// acceleration direction, moments from the rotation-matrix attitude error.
ControlInput geometric_control(const VehicleState& state, const FlatTarget& target,
                               const VehicleParams& params);

/// One RK4 step of the rigid-body model; the rotation matrix is
/// re-orthonormalized afterwards. dt must be in (0, 0.01].
VehicleState step_dynamics(const VehicleState& state, const ControlInput& input,
                           const VehicleParams& params, double dt);

struct TimedState {
  double t;
  VehicleState state;
};

struct TrackResult {
  std::vector<TimedState> history;  // one entry per control tick plus the end
  double max_position_error = 0.0;
};

/// Closed-loop rollout along a segment: the controller is re-evaluated at
/// control_rate (>= 100 Hz) and dynamics integrated at dt between ticks.
/// fixed_yaw pins the desired yaw; otherwise it follows the horizontal
/// desired velocity (held when slower than 0.1 m/s).
TrackResult track(const VehicleState& initial, const Segment3D& segment,
                  const VehicleParams& params, double dt, double control_rate,
                  std::optional<double> fixed_yaw = std::nullopt);

/// Kinematic mode: the vehicle state implied by the segment at time t, with
/// a level, yaw-aligned attitude. fallback_yaw is used below 0.1 m/s
/// horizontal speed.
VehicleState follow_exact(const Segment3D& segment, double t, double fallback_yaw = 0.0);

}  // namespace peacock

#endif
