#ifndef PEACOCK_PLANNER_HPP
#define PEACOCK_PLANNER_HPP

#include <optional>
#include <vector>

#include "peacock/bundle.hpp"
#include "peacock/voxmap.hpp"

namespace peacock {

struct ScoreWeights {
  double free_weight = 1.0;     // added per Free sample
  double unknown_weight = 3.0;  // added per Unknown sample; must exceed free_weight

  void validate() const;
};

struct PlannerOptions {
  ScoreWeights weights;
  /// When false, an Occupied sample resets the family score to zero but
  /// scoring continues (the literal reset rule) instead of permanently
  /// disqualifying the family.
  bool occupied_blocks_permanently = true;
  /// Whether an Occupied second-step sample blocks the family; when false
  /// second-step hits merely contribute nothing.
  bool second_step_blocks = true;
  /// Samples closer than this to the map boundary (or beyond it) count as
  /// occupied; keeps the planner from chasing cells it may never fly to.
  double bounds_margin = 0.0;  // m
  int threads = 1;
};

struct ScoreMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> score;  // row-major, >= 0
  std::vector<char> blocked;

  double at(int row, int col) const { return score[static_cast<size_t>(row * cols + col)]; }
  bool is_blocked(int row, int col) const {
    return blocked[static_cast<size_t>(row * cols + col)] != 0;
  }
};

struct PlanDecision {
  bool all_blocked = false;
  int row = -1;
  int col = -1;
};

/// Score every (row, col) candidate family against the map: Free samples add
/// the free weight, Unknown samples the unknown weight, Occupied samples
/// block the family.
ScoreMatrix score_bundle(const OccupancyOctree& map,
                         const std::vector<FamilySamples>& world_samples, int rows,
                         int cols, const PlannerOptions& options);

/// Highest unblocked score wins; ties resolve to the lower median of the
/// tied row and column index sets. All blocked or all zero -> all_blocked.
PlanDecision select_best(const ScoreMatrix& scores);

struct PlanResult {
  PlanDecision decision;
  std::optional<Segment3D> segment;  // world frame, set when selected
  double max_score = 0.0;
  int blocked_count = 0;
  /// True when some unblocked family still sees Unknown cells, i.e. its
  /// score exceeds the all-Free baseline. Drives stall detection.
  bool any_unknown_gain = false;
};

PlanResult plan_step(const OccupancyOctree& map, const PeacockBundle& bundle,
                     const Eigen::Vector3d& position, double yaw,
                     const PlannerOptions& options);

}  // namespace peacock

#endif
