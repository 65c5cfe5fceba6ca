#ifndef PEACOCK_WORLD_HPP
#define PEACOCK_WORLD_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "peacock/geometry.hpp"

namespace peacock {

/// Ground-truth scene: an axis-aligned bounding volume containing
/// axis-aligned box obstacles.
struct World {
  AABB bounds;
  std::vector<AABB> boxes;
};

/// Depth camera with a spherical ray fan: uniform angular spacing across
/// both field-of-view axes, inclusive of the edges.
struct CameraModel {
  double h_fov = 60.0 * M_PI / 180.0;
  double v_fov = 45.0 * M_PI / 180.0;
  double min_range = 0.11;  // m; closer returns are dropped
  double max_range = 15.0;  // m
  int ray_cols = 64;
  int ray_rows = 48;

  /// Camera-frame ray direction; the camera looks along +X, +Z up.
  Eigen::Vector3d ray_direction(int row, int col) const;
};

struct DepthImage {
  int rows = 0;
  int cols = 0;
  std::vector<double> ranges;  // row-major; NaN marks no return
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  CameraModel camera;

  double at(int row, int col) const { return ranges[static_cast<size_t>(row * cols + col)]; }
};

/// Parse the line-oriented world format: `bounds x0 y0 z0 x1 y1 z1` followed
/// by `box ...` lines; `#` starts a comment.
World load_world(std::istream& in);
World load_world_file(const std::string& path);
void save_world(const World& world, std::ostream& out);

/// First hit distance against the scene boxes, or nullopt beyond max_range.
std::optional<double> raycast(const World& world, const Eigen::Vector3d& origin,
                              const Eigen::Vector3d& direction, double max_range);

DepthImage render_depth(const World& world, const Eigen::Vector3d& position,
                        const Eigen::Matrix3d& rotation, const CameraModel& camera);

/// World-frame points of all finite returns.
std::vector<Eigen::Vector3d> depth_to_points(const DepthImage& image);

/// Signed distance to the nearest obstacle surface or world boundary;
/// negative inside a box or outside the bounds.
double clearance(const World& world, const Eigen::Vector3d& position);

}  // namespace peacock

#endif
