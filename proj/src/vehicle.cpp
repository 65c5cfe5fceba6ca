#include "peacock/vehicle.hpp"

#include <cmath>

#include "peacock/errors.hpp"
#include "peacock/geometry.hpp"

namespace peacock {

namespace {

Eigen::Matrix3d hat(const Eigen::Vector3d& w) {
  Eigen::Matrix3d m;
  m << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return m;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& m) {
  return {m(2, 1), m(0, 2), m(1, 0)};
}

Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& r) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) = -u.col(2);
  return u * v.transpose();
}

}  // namespace

ControlInput geometric_control(const VehicleState& state, const FlatTarget& target,
                               const VehicleParams& params) {
  const Eigen::Vector3d e3(0.0, 0.0, 1.0);
  const Eigen::Vector3d e_p = target.position - state.position;
  const Eigen::Vector3d e_v = target.velocity - state.velocity;
  const Eigen::Vector3d force = params.mass * target.acceleration + params.k_pos * e_p +
                                params.k_vel * e_v + params.mass * params.gravity * e3;
  const double force_norm = force.norm();
  if (force_norm < 1e-9)
    throw DegenerateThrust("commanded thrust vector vanishes (free fall)");

  const Eigen::Vector3d b3d = force / force_norm;
  ControlInput input;
  input.thrust = force.dot(state.rotation * e3);

  const Eigen::Vector3d heading(std::cos(target.yaw), std::sin(target.yaw), 0.0);
  Eigen::Vector3d b2d_raw = b3d.cross(heading);
  const double b2_norm = b2d_raw.norm();
  if (b2_norm < 1e-9)
    throw DegenerateHeading("desired thrust axis parallel to heading");
  const Eigen::Vector3d b2d = b2d_raw / b2_norm;
  const Eigen::Vector3d b1d = b2d.cross(b3d);

  Eigen::Matrix3d rot_d;
  rot_d.col(0) = b1d;
  rot_d.col(1) = b2d;
  rot_d.col(2) = b3d;

  // Angular-velocity feedforward: differentiate R_d along the commanded
  // force. Without it, the attitude loop lags the position loop badly enough
  // on large steps to sustain a limit cycle instead of settling.
  const Eigen::Vector3d accel =
      (input.thrust / params.mass) * (state.rotation * e3) - params.gravity * e3;
  const Eigen::Vector3d force_dot =
      params.k_pos * (target.velocity - state.velocity) +
      params.k_vel * (target.acceleration - accel);
  const Eigen::Vector3d b3d_dot =
      (force_dot - b3d * b3d.dot(force_dot)) / force_norm;
  const Eigen::Vector3d b2d_raw_dot = b3d_dot.cross(heading);
  const Eigen::Vector3d b2d_dot =
      (b2d_raw_dot - b2d * b2d.dot(b2d_raw_dot)) / b2_norm;
  const Eigen::Vector3d b1d_dot = b2d_dot.cross(b3d) + b2d.cross(b3d_dot);
  Eigen::Matrix3d rot_d_dot;
  rot_d_dot.col(0) = b1d_dot;
  rot_d_dot.col(1) = b2d_dot;
  rot_d_dot.col(2) = b3d_dot;
  const Eigen::Vector3d omega_d =
      0.5 * vee(rot_d.transpose() * rot_d_dot -
                rot_d_dot.transpose() * rot_d);

  const Eigen::Vector3d e_rot =
      0.5 * vee(rot_d.transpose() * state.rotation - state.rotation.transpose() * rot_d);
  const Eigen::Vector3d e_omega =
      state.omega - state.rotation.transpose() * rot_d * omega_d;
  input.moment = -params.k_rot * e_rot - params.k_omega * e_omega +
                 state.omega.cross(params.inertia * state.omega);
  return input;
}

namespace {

struct Derivative {
  Eigen::Vector3d dp, dv, domega;
  Eigen::Matrix3d drot;
};

Derivative dynamics(const VehicleState& s, const ControlInput& u,
                    const VehicleParams& params) {
  const Eigen::Vector3d e3(0.0, 0.0, 1.0);
  Derivative d;
  d.dp = s.velocity;
  d.dv = (u.thrust / params.mass) * (s.rotation * e3) - params.gravity * e3;
  d.drot = s.rotation * hat(s.omega);
  d.domega = params.inertia.inverse() *
             (u.moment - s.omega.cross(params.inertia * s.omega));
  return d;
}

VehicleState advance(const VehicleState& s, const Derivative& d, double h) {
  VehicleState out;
  out.position = s.position + h * d.dp;
  out.velocity = s.velocity + h * d.dv;
  out.rotation = s.rotation + h * d.drot;
  out.omega = s.omega + h * d.domega;
  return out;
}

}  // namespace

VehicleState step_dynamics(const VehicleState& state, const ControlInput& input,
                           const VehicleParams& params, double dt) {
  if (!(dt > 0.0) || dt > 0.01)
    throw InvalidTimestep("dt must be in (0, 0.01]");

  const Derivative k1 = dynamics(state, input, params);
  const Derivative k2 = dynamics(advance(state, k1, 0.5 * dt), input, params);
  const Derivative k3 = dynamics(advance(state, k2, 0.5 * dt), input, params);
  const Derivative k4 = dynamics(advance(state, k3, dt), input, params);

  VehicleState out;
  out.position = state.position +
                 (dt / 6.0) * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
  out.velocity = state.velocity +
                 (dt / 6.0) * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
  out.omega = state.omega +
              (dt / 6.0) * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega);
  out.rotation = state.rotation +
                 (dt / 6.0) * (k1.drot + 2.0 * k2.drot + 2.0 * k3.drot + k4.drot);
  // keep R on SO(3); the integrator alone drifts off the manifold
  if ((out.rotation - state.rotation).norm() > 0.0)
    out.rotation = orthonormalize(out.rotation);
  return out;
}

TrackResult track(const VehicleState& initial, const Segment3D& segment,
                  const VehicleParams& params, double dt, double control_rate,
                  std::optional<double> fixed_yaw) {
  if (control_rate < 100.0) throw InvalidParams("control_rate must be >= 100 Hz");

  TrackResult result;
  VehicleState state = initial;
  const double tick = 1.0 / control_rate;
  const int ticks = static_cast<int>(std::ceil(segment.duration / tick - 1e-12));
  double yaw_d = fixed_yaw.value_or(initial.yaw());

  for (int i = 0; i < ticks; ++i) {
    const double t0 = i * tick;
    const double t1 = std::min(segment.duration, t0 + tick);

    FlatTarget target;
    target.position = evaluate(segment, t0);
    target.velocity = evaluate(segment, t0, 1);
    target.acceleration = evaluate(segment, t0, 2);
    if (!fixed_yaw) {
      const Eigen::Vector2d vh = target.velocity.head<2>();
      if (vh.norm() >= 0.1) yaw_d = std::atan2(vh.y(), vh.x());
    }
    target.yaw = yaw_d;

    result.history.push_back({t0, state});
    result.max_position_error =
        std::max(result.max_position_error, (state.position - target.position).norm());

    const ControlInput input = geometric_control(state, target, params);
    const int substeps = std::max(1, static_cast<int>(std::round((t1 - t0) / dt)));
    const double h = (t1 - t0) / substeps;
    for (int k = 0; k < substeps; ++k) state = step_dynamics(state, input, params, h);
  }

  result.history.push_back({segment.duration, state});
  result.max_position_error = std::max(
      result.max_position_error,
      (state.position - evaluate(segment, segment.duration)).norm());
  return result;
}

VehicleState follow_exact(const Segment3D& segment, double t, double fallback_yaw) {
  VehicleState s;
  s.position = evaluate(segment, t);
  s.velocity = evaluate(segment, t, 1);
  const Eigen::Vector3d acc = evaluate(segment, t, 2);
  const Eigen::Vector2d vh = s.velocity.head<2>();
  double yaw = fallback_yaw;
  double yaw_rate = 0.0;
  const double h2 = vh.squaredNorm();
  if (std::sqrt(h2) >= 0.1) {
    yaw = std::atan2(vh.y(), vh.x());
    yaw_rate = (vh.x() * acc.y() - vh.y() * acc.x()) / h2;
  }
  s.rotation = rot_z(yaw);
  s.omega = Eigen::Vector3d(0.0, 0.0, yaw_rate);
  return s;
}

}  // namespace peacock
