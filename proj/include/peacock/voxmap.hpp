#ifndef PEACOCK_VOXMAP_HPP
#define PEACOCK_VOXMAP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "peacock/geometry.hpp"

namespace peacock {

struct MapParams {
  double resolution = 0.5;         // m leaf edge
  double hit_prob = 0.65;
  double miss_prob = 0.35;
  double occupancy_threshold = 0.5;
  double clamp_min = 0.12;
  double clamp_max = 0.97;
  int max_depth = 16;              // tree levels; leaves live at this depth
  int query_depth = 15;            // default depth for planner queries

  void validate() const;
};

enum class CellState { Unknown, Free, Occupied };

/// Log-odds occupancy octree over a fixed world-anchored cube.
/// Unknown cells have no node; known cells carry a clamped log-odds leaf at
/// max_depth. Inner nodes cache the subtree max so depth-limited queries can
/// aggregate without descending further.
class OccupancyOctree {
 public:
  OccupancyOctree(const MapParams& params, const AABB& world_bounds);

  struct ScanSummary {
    std::size_t hit_cells = 0;
    std::size_t miss_cells = 0;
  };

  /// Insert one depth scan: rays from origin to each endpoint. Endpoint
  /// voxels get a hit update, strictly traversed voxels a miss update;
  /// per-scan each voxel is updated once, hits winning over misses.
  /// Endpoints beyond max_range mark only free space up to max_range.
  ScanSummary insert_scan(const Eigen::Vector3d& origin,
                          const std::vector<Eigen::Vector3d>& endpoints,
                          double max_range);

  /// Tri-state query descending at most `depth` levels. At a depth-limited
  /// inner node: Occupied if any descendant leaf is Occupied, else Free.
  CellState search(const Eigen::Vector3d& point, int depth) const;
  CellState search(const Eigen::Vector3d& point) const {
    return search(point, params_.query_depth);
  }

  /// Same query without touching the shared visit counter; safe to call from
  /// several reader threads at once.
  CellState search_counted(const Eigen::Vector3d& point, int depth, int* visits) const;

  /// (free, occupied) known volume in m^3.
  std::pair<double, double> mapped_volumes() const;

  /// Occupied leaf centers with occupancy probability, in Z-order.
  std::vector<std::pair<Eigen::Vector3d, double>> export_occupied() const;

  /// Log-odds of the leaf containing `point`, if known.
  bool leaf_log_odds(const Eigen::Vector3d& point, double* out) const;

  const MapParams& params() const { return params_; }
  const AABB& bounds() const { return bounds_; }

  /// Nodes touched by the most recent search() call.
  int last_search_visits() const { return last_search_visits_; }

 private:
  struct Node {
    std::unique_ptr<Node> children[8];
    double log_odds = 0.0;     // leaves only
    double subtree_max = 0.0;  // max leaf log-odds below (or own value at leaf)
    bool is_leaf = false;
  };

  struct Key {
    uint32_t x, y, z;
  };

  bool key_of(const Eigen::Vector3d& p, Key* key) const;
  void update_leaf(const Key& key, double delta);
  uint64_t pack(const Key& key) const;

  MapParams params_;
  AABB bounds_;
  Eigen::Vector3d key_origin_;  // min corner of the key cube
  double log_hit_ = 0.0;
  double log_miss_ = 0.0;
  double clamp_lo_ = 0.0;
  double clamp_hi_ = 0.0;
  double threshold_log_ = 0.0;
  std::unique_ptr<Node> root_;
  mutable int last_search_visits_ = 0;
};

}  // namespace peacock

#endif
