#ifndef PEACOCK_MISSION_HPP
#define PEACOCK_MISSION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peacock/bundle.hpp"
#include "peacock/planner.hpp"
#include "peacock/vehicle.hpp"
#include "peacock/voxmap.hpp"
#include "peacock/world.hpp"

namespace peacock {

enum class MissionMode { Dynamic, Kinematic };

enum class MissionOutcome { Completed, Stalled, TimedOut, CollisionFailure };

struct GoalRegion {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 1.0;
};

struct MissionConfig {
  double takeoff_altitude = 2.0;   // m above the start point
  double takeoff_duration = 2.0;   // s
  double start_altitude = 0.6;     // m; initial hover height before takeoff
  double max_mission_time = 120.0; // s simulated
  std::optional<GoalRegion> goal_region;
  int stall_cycles = 5;
  double vehicle_radius = 0.4;     // m; clearance below this is a crash
  MissionMode mode = MissionMode::Dynamic;
  uint32_t seed = 0;
  double sim_dt = 0.001;           // s physics step (dynamic mode)
  double control_rate = 200.0;     // Hz
  std::optional<Eigen::Vector2d> start_xy;  // defaults to the bounds center

  BundleParams bundle;
  MapParams map;
  CameraModel camera;
  VehicleParams vehicle;
  PlannerOptions planner;
};

struct MetricsSample {
  double t = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  double yaw = 0.0;
  double path_length = 0.0;
  double free_volume = 0.0;
  double occupied_volume = 0.0;
  int cycle = 0;
  double score = 0.0;
  int blocked_count = 0;
};

struct PlanLogEntry {
  int cycle = 0;
  int row = -1;
  int col = -1;
  double max_score = 0.0;
  int blocked_count = 0;
  double plan_ms = 0.0;  // wall time; lives outside metrics.csv to keep it reproducible
};

struct MissionSummary {
  double duration = 0.0;          // s
  double flight_length = 0.0;     // m
  double avg_velocity = 0.0;      // m/s
  double mapped_volume = 0.0;     // m^3 free + occupied
  double mapping_rate = 0.0;      // m^3/s
  double mapping_efficiency = 0.0;  // m^3/m
  MissionOutcome outcome = MissionOutcome::TimedOut;
};

struct PathSample {
  double t;
  Eigen::Vector3d position;
};

struct MissionMetrics {
  std::vector<MetricsSample> series;   // one row per planning cycle
  std::vector<PlanLogEntry> plan_log;
  std::vector<PathSample> path;        // one row per control tick
  MissionSummary summary;
  double min_clearance = 0.0;
};

struct MissionResult {
  MissionMetrics metrics;
  std::vector<std::pair<Eigen::Vector3d, double>> occupied_cells;
  double map_resolution = 0.5;
};

MissionResult run_mission(const World& world, const MissionConfig& config);

MissionSummary compute_summary(const std::vector<MetricsSample>& series,
                               MissionOutcome outcome);

/// Write metrics.csv, planner.csv, path.csv, map.ply, map.csv, summary.txt
/// and topdown.svg under `out_dir` (created if missing).
void write_artifacts(const MissionResult& result, const World& world,
                     const std::string& out_dir);

const char* outcome_name(MissionOutcome outcome);

}  // namespace peacock

#endif
