#ifndef PEACOCK_TRAJGEN_HPP
#define PEACOCK_TRAJGEN_HPP

#include <Eigen/Dense>
#include <array>

namespace peacock {

/// Full flat-output boundary condition of one segment endpoint:
/// position and its first three derivatives.
struct BoundaryState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d acceleration = Eigen::Vector3d::Zero();
  Eigen::Vector3d jerk = Eigen::Vector3d::Zero();

  static BoundaryState at_rest(const Eigen::Vector3d& p) {
    BoundaryState s;
    s.position = p;
    return s;
  }
};

/// Degree-7 monomial polynomial x(t) = c0 + c1 t + ... + c7 t^7 on [0, duration].
struct Polynomial1D {
  std::array<double, 8> coefficients{};
  double duration = 0.0;

  /// Analytic derivative of given order (0..7) evaluated at t.
  double eval(double t, int derivative_order = 0) const;
};

/// One trajectory piece: a degree-7 polynomial per axis over a shared duration.
struct Segment3D {
  Polynomial1D x, y, z;
  double duration = 0.0;
};

/// Interpolate the unique degree-7 polynomial per axis matching position,
/// velocity, acceleration and jerk at t = 0 and t = duration.
/// Minimizes the integral of squared snap over all trajectories with
/// those boundary conditions.
Segment3D solve_min_snap_segment(const BoundaryState& start, const BoundaryState& end,
                                 double duration);

/// Evaluate position (order 0) or a derivative up to snap (order 4) at t in
/// [0, duration].
Eigen::Vector3d evaluate(const Segment3D& segment, double t, int derivative_order = 0);

/// Closed-form integral of the squared snap norm over [0, duration],
/// summed over the three axes.
double snap_cost(const Segment3D& segment);

}  // namespace peacock

#endif
