#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "peacock/errors.hpp"
#include "peacock/mission.hpp"
#include "peacock/worldgen.hpp"

using namespace peacock;

namespace {

World empty_room() {
  World w;
  w.bounds = {{0, 0, 0}, {20, 20, 4}};
  return w;
}

MissionConfig kinematic_config() {
  MissionConfig c;
  c.mode = MissionMode::Kinematic;
  return c;
}

}  // namespace

TEST_CASE("kinematic exploration of an empty room maps most of it and stalls") {
  const World w = empty_room();
  MissionConfig c = kinematic_config();
  const MissionResult r = run_mission(w, c);

  CHECK((r.metrics.summary.outcome == MissionOutcome::Stalled ||
         r.metrics.summary.outcome == MissionOutcome::Completed));
  CHECK(r.metrics.min_clearance > c.vehicle_radius);
  CHECK(r.metrics.summary.mapped_volume > 0.5 * w.bounds.volume());
  CHECK(r.metrics.summary.mapped_volume <= w.bounds.volume() + 1e-6);
  CHECK(r.metrics.summary.flight_length > 1.0);
  CHECK(r.occupied_cells.empty());  // nothing to hit in an empty room
}

TEST_CASE("a sealed chamber stalls the mission near its start") {
  World w;
  w.bounds = {{0, 0, 0}, {20, 20, 4}};
  // a closed 6x6 room centred on the start column
  w.boxes.push_back({{7, 7, 0}, {7.5, 13, 4}});
  w.boxes.push_back({{12.5, 7, 0}, {13, 13, 4}});
  w.boxes.push_back({{7, 7, 0}, {13, 7.5, 4}});
  w.boxes.push_back({{7, 12.5, 0}, {13, 13, 4}});

  MissionConfig c = kinematic_config();
  const MissionResult r = run_mission(w, c);
  CHECK(r.metrics.summary.outcome == MissionOutcome::Stalled);
  CHECK(r.metrics.min_clearance > c.vehicle_radius);
  // the walls cap how far it can roam
  for (const PathSample& s : r.metrics.path) {
    CHECK(s.position.x() > 7.5);
    CHECK(s.position.x() < 12.5);
    CHECK(s.position.y() > 7.5);
    CHECK(s.position.y() < 12.5);
  }
  CHECK_FALSE(r.occupied_cells.empty());
}

TEST_CASE("known volume grows monotonically over planning cycles") {
  const World w = generate_world(WorldKind::Desk, 2);
  MissionConfig c = kinematic_config();
  c.max_mission_time = 20.0;
  const MissionResult r = run_mission(w, c);
  REQUIRE(r.metrics.series.size() > 3);
  for (size_t i = 1; i < r.metrics.series.size(); ++i) {
    const MetricsSample& a = r.metrics.series[i - 1];
    const MetricsSample& b = r.metrics.series[i];
    CHECK(b.free_volume + b.occupied_volume >= a.free_volume + a.occupied_volume - 1e-9);
    CHECK(b.t >= a.t);
    CHECK(b.path_length >= a.path_length);
  }
}

TEST_CASE("same seed and world reproduce the run exactly") {
  const World w = generate_world(WorldKind::Desk, 7);
  MissionConfig c = kinematic_config();
  c.max_mission_time = 15.0;
  const MissionResult a = run_mission(w, c);
  const MissionResult b = run_mission(w, c);

  REQUIRE(a.metrics.series.size() == b.metrics.series.size());
  for (size_t i = 0; i < a.metrics.series.size(); ++i) {
    CHECK(a.metrics.series[i].t == b.metrics.series[i].t);
    CHECK((a.metrics.series[i].position - b.metrics.series[i].position).norm() == 0.0);
    CHECK(a.metrics.series[i].free_volume == b.metrics.series[i].free_volume);
    CHECK(a.metrics.series[i].occupied_volume == b.metrics.series[i].occupied_volume);
  }
  REQUIRE(a.metrics.path.size() == b.metrics.path.size());
  REQUIRE(a.occupied_cells.size() == b.occupied_cells.size());
}

TEST_CASE("goal region ends the mission as completed") {
  const World w = empty_room();
  MissionConfig c = kinematic_config();
  c.goal_region = GoalRegion{{10.0, 10.0, 1.5}, 1.0};
  const MissionResult r = run_mission(w, c);
  CHECK(r.metrics.summary.outcome == MissionOutcome::Completed);
  CHECK(r.metrics.summary.duration < 5.0);  // reached while taking off
}

TEST_CASE("dynamic mode flies the closed loop without incident") {
  const World w = empty_room();
  MissionConfig c;
  c.mode = MissionMode::Dynamic;
  c.max_mission_time = 6.0;
  const MissionResult r = run_mission(w, c);
  CHECK(r.metrics.min_clearance > c.vehicle_radius);
  CHECK(r.metrics.summary.mapped_volume > 0.0);
  CHECK(r.metrics.path.size() > 100);
}

TEST_CASE("summary statistics follow their definitions") {
  std::vector<MetricsSample> series(2);
  series[1].t = 140.24;
  series[1].path_length = 140.24;
  series[1].free_volume = 400.0;
  series[1].occupied_volume = 67.327;
  const MissionSummary s = compute_summary(series, MissionOutcome::Stalled);
  CHECK(s.duration == 140.24);
  CHECK(s.mapped_volume == doctest::Approx(467.327));
  CHECK(s.avg_velocity == doctest::Approx(1.0));
  CHECK(s.mapping_rate == doctest::Approx(467.327 / 140.24));
  CHECK(s.mapping_efficiency == doctest::Approx(467.327 / 140.24));

  const MissionSummary zero = compute_summary({}, MissionOutcome::TimedOut);
  CHECK(zero.mapped_volume == 0.0);
  CHECK(zero.avg_velocity == 0.0);
}

TEST_CASE("planner log stays within the candidate grid") {
  const World w = generate_world(WorldKind::Desk, 4);
  MissionConfig c = kinematic_config();
  c.max_mission_time = 10.0;
  const MissionResult r = run_mission(w, c);
  REQUIRE_FALSE(r.metrics.plan_log.empty());
  for (const PlanLogEntry& e : r.metrics.plan_log) {
    if (e.row >= 0) {
      CHECK(e.row < c.bundle.rows);
      CHECK(e.col >= 0);
      CHECK(e.col < c.bundle.cols);
    }
    CHECK(e.max_score >= 0.0);
    CHECK(e.blocked_count <= c.bundle.rows * c.bundle.cols);
  }
  // path starts at the configured start column and altitude
  REQUIRE_FALSE(r.metrics.path.empty());
  const Eigen::Vector3d& first = r.metrics.path.front().position;
  CHECK(std::abs(first.x() - 10.0) < 0.5);
  CHECK(std::abs(first.y() - 10.0) < 0.5);
  CHECK(first.z() < 1.0);
}

TEST_CASE("artifact files are written with their headers") {
  const World w = empty_room();
  MissionConfig c = kinematic_config();
  c.max_mission_time = 5.0;
  const MissionResult r = run_mission(w, c);
  const std::string dir = "mission_artifacts_test";
  write_artifacts(r, w, dir);

  auto first_line = [&](const std::string& name) {
    std::ifstream in(dir + "/" + name);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    return line;
  };
  CHECK(first_line("metrics.csv") ==
        "t,x,y,z,vx,vy,vz,yaw,path_length_m,free_m3,occ_m3,known_m3,cycle,score,"
        "blocked_count");
  CHECK(first_line("planner.csv") == "cycle,row,col,max_score,blocked_count,plan_ms");
  CHECK(first_line("path.csv") == "t,x,y,z");
  CHECK(first_line("map.csv") == "x,y,z,probability");
  CHECK(first_line("map.ply") == "ply");
  CHECK(first_line("summary.txt").rfind("Outcome: ", 0) == 0);
  CHECK(first_line("topdown.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("bad mission parameters are rejected") {
  const World w = empty_room();
  MissionConfig c = kinematic_config();
  c.vehicle_radius = 0.0;
  CHECK_THROWS_AS(run_mission(w, c), InvalidParams);
  c = kinematic_config();
  c.stall_cycles = 0;
  CHECK_THROWS_AS(run_mission(w, c), InvalidParams);
}
