#ifndef PEACOCK_GEOMETRY_HPP
#define PEACOCK_GEOMETRY_HPP

#include <Eigen/Dense>

namespace peacock {

struct AABB {
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Zero();

  bool contains(const Eigen::Vector3d& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
  Eigen::Vector3d center() const { return 0.5 * (min + max); }
  Eigen::Vector3d extent() const { return max - min; }
  double volume() const {
    const Eigen::Vector3d e = extent();
    return e.x() * e.y() * e.z();
  }
  bool valid() const { return (max.array() > min.array()).all(); }
};

inline Eigen::Matrix3d rot_z(double yaw) {
  Eigen::Matrix3d r;
  const double c = std::cos(yaw), s = std::sin(yaw);
  r << c, -s, 0, s, c, 0, 0, 0, 1;
  return r;
}

}  // namespace peacock

#endif
