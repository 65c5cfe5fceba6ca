#include "peacock/mission.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "peacock/errors.hpp"
#include "peacock/geometry.hpp"

namespace peacock {

namespace {

enum class ExecStatus { Ok, Abort, Terminal };

// Speed-ramp acceleration budget for dynamic-mode replanning (m/s^2).
constexpr double kRampAccel = 4.0;

struct Loop {
  const World& world;
  const MissionConfig& config;
  PeacockBundle bundle;
  OccupancyOctree map;
  PlannerOptions planner_opts;
  VehicleState state;
  MissionMetrics metrics;
  double t = 0.0;
  double path_length = 0.0;
  MissionOutcome outcome = MissionOutcome::TimedOut;

  Loop(const World& w, const MissionConfig& c)
      : world(w), config(c), bundle(precompute_bundle(c.bundle)), map(c.map, w.bounds),
        planner_opts(c.planner) {
    // Keep the planner from chasing cells inside the mid-segment abort band.
    planner_opts.bounds_margin =
        std::max(planner_opts.bounds_margin, 2.0 * c.vehicle_radius);
  }

  // Advance bookkeeping for one control tick; false ends the mission.
  bool observe_tick(const VehicleState& next, double dt_tick) {
    path_length += (next.position - state.position).norm();
    state = next;
    t += dt_tick;
    metrics.path.push_back({t, state.position});
    const double c = clearance(world, state.position);
    metrics.min_clearance = std::min(metrics.min_clearance, c);
    if (c <= config.vehicle_radius) {
      outcome = MissionOutcome::CollisionFailure;
      return false;
    }
    if (config.goal_region &&
        (state.position - config.goal_region->center).norm() <=
            config.goal_region->radius) {
      outcome = MissionOutcome::Completed;
      return false;
    }
    return true;
  }

  ExecStatus execute_segment(const Segment3D& seg, std::optional<double> fixed_yaw,
                             bool allow_abort) {
    const double tick = 1.0 / config.control_rate;
    const int ticks = static_cast<int>(std::ceil(seg.duration / tick - 1e-12));
    double yaw_d = fixed_yaw.value_or(state.yaw());

    for (int i = 0; i < ticks; ++i) {
      const double t0 = i * tick;
      const double t1 = std::min(seg.duration, t0 + tick);
      VehicleState next;
      if (config.mode == MissionMode::Dynamic) {
        FlatTarget target;
        target.position = evaluate(seg, t0);
        target.velocity = evaluate(seg, t0, 1);
        target.acceleration = evaluate(seg, t0, 2);
        if (!fixed_yaw) {
          const Eigen::Vector2d vh = target.velocity.head<2>();
          if (vh.norm() >= 0.1) yaw_d = std::atan2(vh.y(), vh.x());
        }
        target.yaw = yaw_d;
        const ControlInput input = geometric_control(state, target, config.vehicle);
        const int substeps =
            std::max(1, static_cast<int>(std::round((t1 - t0) / config.sim_dt)));
        const double h = (t1 - t0) / substeps;
        next = state;
        for (int k = 0; k < substeps; ++k)
          next = step_dynamics(next, input, config.vehicle, h);
      } else {
        next = follow_exact(seg, t1, yaw_d);
      }
      if (!observe_tick(next, t1 - t0)) return ExecStatus::Terminal;
      if (t >= config.max_mission_time) {
        outcome = MissionOutcome::TimedOut;
        return ExecStatus::Terminal;
      }
      // Abort margin covers the distance needed to brake from the current
      // speed; in kinematic mode the stop is instantaneous.
      double abort_margin = 2.0 * config.vehicle_radius;
      if (config.mode == MissionMode::Dynamic)
        abort_margin += state.velocity.squaredNorm() / (2.0 * kRampAccel);
      if (allow_abort && clearance(world, state.position) < abort_margin)
        return ExecStatus::Abort;
    }
    return ExecStatus::Ok;
  }

  // Brake to a stop and re-aim the fan 45 degrees to the left.
  ExecStatus recover() {
    const double target_yaw = state.yaw() + M_PI / 4.0;
    if (config.mode == MissionMode::Dynamic) {
      // Ramp the velocity down over the braking segment instead of snapping
      // the reference to a fixed hover point at cruise speed.
      BoundaryState from;
      from.position = state.position;
      from.velocity = state.velocity;
      const double brake_time = std::max(config.bundle.period,
                                         state.velocity.norm() / kRampAccel);
      const BoundaryState to =
          BoundaryState::at_rest(state.position + 0.5 * brake_time * state.velocity);
      const Segment3D brake = solve_min_snap_segment(from, to, brake_time);
      return execute_segment(brake, target_yaw, false);
    }
    const double tick = 1.0 / config.control_rate;
    const int ticks =
        static_cast<int>(std::ceil(config.bundle.period / tick - 1e-12));
    const double yaw0 = state.yaw();
    for (int i = 0; i < ticks; ++i) {
      VehicleState next = state;
      next.velocity.setZero();
      next.omega.setZero();
      next.rotation =
          rot_z(yaw0 + (target_yaw - yaw0) * static_cast<double>(i + 1) / ticks);
      if (!observe_tick(next, tick)) return ExecStatus::Terminal;
      if (t >= config.max_mission_time) {
        outcome = MissionOutcome::TimedOut;
        return ExecStatus::Terminal;
      }
    }
    return ExecStatus::Ok;
  }

  void sense() {
    const DepthImage img =
        render_depth(world, state.position, state.rotation, config.camera);
    std::vector<Eigen::Vector3d> endpoints;
    endpoints.reserve(static_cast<size_t>(img.rows * img.cols));
    for (int r = 0; r < img.rows; ++r) {
      for (int c = 0; c < img.cols; ++c) {
        const Eigen::Vector3d dir =
            (img.rotation * img.camera.ray_direction(r, c)).normalized();
        const double range = img.at(r, c);
        // no-return rays still carve free space out to max range
        const double reach =
            std::isfinite(range) ? range : img.camera.max_range * 1.05;
        endpoints.push_back(img.position + reach * dir);
      }
    }
    map.insert_scan(img.position, endpoints, config.camera.max_range);
  }

  void record_cycle(int cycle, const PlanResult& plan, double plan_ms) {
    const auto [free_vol, occ_vol] = map.mapped_volumes();
    MetricsSample s;
    s.t = t;
    s.position = state.position;
    s.velocity = state.velocity;
    s.yaw = state.yaw();
    s.path_length = path_length;
    s.free_volume = free_vol;
    s.occupied_volume = occ_vol;
    s.cycle = cycle;
    s.score = plan.max_score;
    s.blocked_count = plan.blocked_count;
    metrics.series.push_back(s);

    PlanLogEntry log;
    log.cycle = cycle;
    log.row = plan.decision.row;
    log.col = plan.decision.col;
    log.max_score = plan.max_score;
    log.blocked_count = plan.blocked_count;
    log.plan_ms = plan_ms;
    metrics.plan_log.push_back(log);
  }

  void append_final_sample(int cycle) {
    const auto [free_vol, occ_vol] = map.mapped_volumes();
    MetricsSample s;
    s.t = t;
    s.position = state.position;
    s.velocity = state.velocity;
    s.yaw = state.yaw();
    s.path_length = path_length;
    s.free_volume = free_vol;
    s.occupied_volume = occ_vol;
    s.cycle = cycle;
    metrics.series.push_back(s);
  }

  MissionResult run() {
    metrics.min_clearance = std::numeric_limits<double>::infinity();

    const Eigen::Vector2d start_xy =
        config.start_xy.value_or(world.bounds.center().head<2>());
    state.position = Eigen::Vector3d(start_xy.x(), start_xy.y(),
                                     world.bounds.min.z() + config.start_altitude);

    // Scripted vertical takeoff before the explore loop.
    const BoundaryState lift_from = BoundaryState::at_rest(state.position);
    const BoundaryState lift_to = BoundaryState::at_rest(
        state.position + Eigen::Vector3d(0, 0, config.takeoff_altitude -
                                                   config.start_altitude));
    const Segment3D takeoff =
        solve_min_snap_segment(lift_from, lift_to, config.takeoff_duration);
    bool terminal = execute_segment(takeoff, state.yaw(), false) == ExecStatus::Terminal;

    int cycle = 0;
    int stall_count = 0;
    while (!terminal && t < config.max_mission_time) {
      sense();

      const auto wall0 = std::chrono::steady_clock::now();
      const PlanResult plan =
          plan_step(map, bundle, state.position, state.yaw(), planner_opts);
      const double plan_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                    wall0)
              .count();
      record_cycle(cycle, plan, plan_ms);

      if (plan.decision.all_blocked || !plan.any_unknown_gain)
        ++stall_count;
      else
        stall_count = 0;
      if (stall_count >= config.stall_cycles) {
        outcome = MissionOutcome::Stalled;
        break;
      }

      if (plan.decision.all_blocked) {
        terminal = recover() == ExecStatus::Terminal;
      } else {
        Segment3D seg = *plan.segment;
        if (config.mode == MissionMode::Dynamic) {
          // The precomputed family assumes a level start at cruise speed.
          // Re-solve from the vehicle's actual velocity so the reference has
          // no jump at the cycle boundary, and ramp the speed under an
          // acceleration budget: a rest-to-cruise segment over one period
          // would demand several g and saturate the attitude loop.
          const double cruise = bundle.params.speed;
          const double v0 = state.velocity.norm();
          const double v1 =
              std::min(cruise, v0 + kRampAccel * seg.duration);
          const double frac = 0.5 * (v0 + v1) / cruise;
          const Eigen::Vector3d end_pos = evaluate(seg, seg.duration);
          const Eigen::Vector3d end_dir =
              evaluate(seg, seg.duration, 1).normalized();
          BoundaryState from;
          from.position = state.position;
          from.velocity = state.velocity;
          BoundaryState to;
          to.position = state.position + frac * (end_pos - state.position);
          to.velocity = v1 * end_dir;
          seg = solve_min_snap_segment(from, to, seg.duration);
        }
        const ExecStatus st = execute_segment(seg, std::nullopt, true);
        if (st == ExecStatus::Terminal)
          terminal = true;
        else if (st == ExecStatus::Abort)
          terminal = recover() == ExecStatus::Terminal;
      }
      ++cycle;
    }

    append_final_sample(cycle);
    metrics.summary = compute_summary(metrics.series, outcome);

    MissionResult result;
    result.metrics = std::move(metrics);
    result.occupied_cells = map.export_occupied();
    result.map_resolution = map.params().resolution;
    return result;
  }
};

}  // namespace

MissionResult run_mission(const World& world, const MissionConfig& config) {
  if (!(config.vehicle_radius > 0.0) || !(config.max_mission_time > 0.0) ||
      !(config.takeoff_altitude > 0.0) || config.stall_cycles < 1)
    throw InvalidParams("invalid mission config");
  Loop loop(world, config);
  return loop.run();
}

MissionSummary compute_summary(const std::vector<MetricsSample>& series,
                               MissionOutcome outcome) {
  MissionSummary s;
  s.outcome = outcome;
  if (series.empty()) return s;
  const MetricsSample& last = series.back();
  s.duration = last.t;
  s.flight_length = last.path_length;
  s.mapped_volume = last.free_volume + last.occupied_volume;
  if (s.duration > 0.0) {
    s.avg_velocity = s.flight_length / s.duration;
    s.mapping_rate = s.mapped_volume / s.duration;
  }
  if (s.flight_length > 0.0) s.mapping_efficiency = s.mapped_volume / s.flight_length;
  return s;
}

const char* outcome_name(MissionOutcome outcome) {
  switch (outcome) {
    case MissionOutcome::Completed: return "Completed";
    case MissionOutcome::Stalled: return "Stalled";
    case MissionOutcome::TimedOut: return "TimedOut";
    case MissionOutcome::CollisionFailure: return "CollisionFailure";
  }
  return "?";
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

void write_ply(const std::vector<std::pair<Eigen::Vector3d, double>>& cells,
               const std::filesystem::path& p) {
  std::ofstream out = open_out(p);
  out << "ply\nformat ascii 1.0\nelement vertex " << cells.size()
      << "\nproperty float x\nproperty float y\nproperty float z\n"
         "property float intensity\nend_header\n";
  char buf[128];
  for (const auto& [c, prob] : cells) {
    std::snprintf(buf, sizeof(buf), "%.3f %.3f %.3f %.4f\n", c.x(), c.y(), c.z(), prob);
    out << buf;
  }
}

void write_topdown_svg(const MissionResult& result, const World& world,
                       const std::filesystem::path& p) {
  std::ofstream out = open_out(p);
  const AABB& b = world.bounds;
  const double w = b.extent().x(), h = b.extent().y();
  const double scale = 600.0 / std::max(w, h);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
                "height=\"%.0f\" viewBox=\"0 0 %.3f %.3f\">\n",
                w * scale, h * scale, w, h);
  out << buf;
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // occupied cells, XY projection (y flipped so +y points up)
  const double res = result.map_resolution;
  for (const auto& [c, prob] : result.occupied_cells) {
    (void)prob;
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" "
                  "fill=\"#888\"/>\n",
                  c.x() - b.min.x() - res / 2, h - (c.y() - b.min.y()) - res / 2, res,
                  res);
    out << buf;
  }
  out << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"0.15\" points=\"";
  for (const PathSample& s : result.metrics.path) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f ", s.position.x() - b.min.x(),
                  h - (s.position.y() - b.min.y()));
    out << buf;
  }
  out << "\"/>\n</svg>\n";
}

}  // namespace

void write_artifacts(const MissionResult& result, const World& world,
                     const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  char buf[512];

  {
    std::ofstream out = open_out(dir / "metrics.csv");
    out << "t,x,y,z,vx,vy,vz,yaw,path_length_m,free_m3,occ_m3,known_m3,cycle,score,"
           "blocked_count\n";
    for (const MetricsSample& s : result.metrics.series) {
      std::snprintf(buf, sizeof(buf),
                    "%.4f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%d,"
                    "%.3f,%d\n",
                    s.t, s.position.x(), s.position.y(), s.position.z(), s.velocity.x(),
                    s.velocity.y(), s.velocity.z(), s.yaw, s.path_length, s.free_volume,
                    s.occupied_volume, s.free_volume + s.occupied_volume, s.cycle,
                    s.score, s.blocked_count);
      out << buf;
    }
  }
  {
    std::ofstream out = open_out(dir / "planner.csv");
    out << "cycle,row,col,max_score,blocked_count,plan_ms\n";
    for (const PlanLogEntry& e : result.metrics.plan_log) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.3f,%d,%.3f\n", e.cycle, e.row, e.col,
                    e.max_score, e.blocked_count, e.plan_ms);
      out << buf;
    }
  }
  {
    std::ofstream out = open_out(dir / "path.csv");
    out << "t,x,y,z\n";
    for (const PathSample& s : result.metrics.path) {
      std::snprintf(buf, sizeof(buf), "%.4f,%.6f,%.6f,%.6f\n", s.t, s.position.x(),
                    s.position.y(), s.position.z());
      out << buf;
    }
  }
  {
    std::ofstream out = open_out(dir / "map.csv");
    out << "x,y,z,probability\n";
    for (const auto& [c, prob] : result.occupied_cells) {
      std::snprintf(buf, sizeof(buf), "%.3f,%.3f,%.3f,%.4f\n", c.x(), c.y(), c.z(), prob);
      out << buf;
    }
  }
  write_ply(result.occupied_cells, dir / "map.ply");
  {
    const MissionSummary& s = result.metrics.summary;
    std::ofstream out = open_out(dir / "summary.txt");
    std::snprintf(buf, sizeof(buf),
                  "Outcome: %s\nDuration [s]: %.2f\nFlight Length [m]: %.3f\n"
                  "Avg. Velocity [m/s]: %.2f\nMapped Volume [m^3]: %.3f\n"
                  "Avg. Rate of Mapping [m^3/s]: %.2f\nMapping Efficiency [m^3/m]: %.2f\n"
                  "Min Clearance [m]: %.3f\n",
                  outcome_name(s.outcome), s.duration, s.flight_length, s.avg_velocity,
                  s.mapped_volume, s.mapping_rate, s.mapping_efficiency,
                  result.metrics.min_clearance);
    out << buf;
  }
  write_topdown_svg(result, world, dir / "topdown.svg");
}

}  // namespace peacock
