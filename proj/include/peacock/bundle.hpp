#ifndef PEACOCK_BUNDLE_HPP
#define PEACOCK_BUNDLE_HPP

#include <Eigen/Dense>
#include <vector>

#include "peacock/trajgen.hpp"

namespace peacock {

/// Geometry of the precomputed trajectory fan. Rows index pitch, columns
/// index yaw; each first step fans into `branches` planar second steps.
struct BundleParams {
  double speed = 5.0;             // m/s
  double period = 0.5;            // s per step
  int rows = 9;                   // pitch samples
  int cols = 9;                   // yaw samples
  int branches = 7;               // second-step yaw samples
  double yaw_range = 60.0 * M_PI / 180.0;         // half-range, symmetric
  double pitch_range = 40.0 * M_PI / 180.0;       // half-range, symmetric
  double branch_yaw_range = 27.0 * M_PI / 180.0;  // half-range of branch offsets
  double sample_spacing = 0.25;   // m along-curve spacing of cached samples

  void validate() const;
};

struct CurveSample {
  double t;
  Eigen::Vector3d point;
};

struct SecondStep {
  double yaw_offset;  // added to the parent first step's yaw
  Segment3D segment;
  std::vector<CurveSample> samples;
};

struct FirstStep {
  double yaw;
  double pitch;
  Segment3D segment;
  Eigen::Vector3d endpoint;
  std::vector<CurveSample> samples;
  std::vector<SecondStep> second_steps;
};

/// Canonical-frame fan: start at the origin heading +X at `speed`.
/// Immutable after precompute; rigid transforms re-anchor it at runtime.
struct PeacockBundle {
  BundleParams params;
  std::vector<FirstStep> grid;  // row-major, rows x cols

  const FirstStep& at(int row, int col) const;
  int samples_per_family(int row, int col) const;
};

PeacockBundle precompute_bundle(const BundleParams& params);

/// World-frame sample points of one (row, col) family, first and second
/// step kept apart so the planner can weight them differently.
struct FamilySamples {
  std::vector<Eigen::Vector3d> first;
  std::vector<Eigen::Vector3d> second;
};

/// Rotate every cached sample about world Z by `yaw`, then translate by
/// `position`. Output is row-major over the grid.
std::vector<FamilySamples> transform_bundle_samples(const PeacockBundle& bundle,
                                                    const Eigen::Vector3d& position,
                                                    double yaw);

/// The (row, col) first-step segment expressed in the world frame.
Segment3D selected_world_segment(const PeacockBundle& bundle, int row, int col,
                                 const Eigen::Vector3d& position, double yaw);

/// Apply the same yaw+translation rigid transform to an arbitrary segment.
Segment3D transform_segment(const Segment3D& canonical, const Eigen::Vector3d& position,
                            double yaw);

}  // namespace peacock

#endif
