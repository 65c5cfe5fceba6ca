// End-to-end acceptance gate: one line per criterion, non-zero exit if any
// fail. Run with --slow to include the large-world endurance check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "peacock/config.hpp"
#include "peacock/mission.hpp"
#include "peacock/worldgen.hpp"

using namespace peacock;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  int id;
  const char* label;
  bool passed;
  std::string detail;
};

std::vector<Criterion> results;

void report(int id, const char* label, bool passed, const std::string& detail = "") {
  results.push_back({id, label, passed, detail});
  std::printf("[%d] %-52s %s%s%s\n", id, label, passed ? "PASS" : "FAIL",
              detail.empty() ? "" : "  -- ", detail.c_str());
  std::fflush(stdout);
}

// ---------------------------------------------------------------- criterion 1

BoundaryState random_state(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  BoundaryState s;
  for (int i = 0; i < 3; ++i) {
    s.position[i] = u(rng);
    s.velocity[i] = u(rng);
    s.acceleration[i] = u(rng);
    s.jerk[i] = u(rng);
  }
  return s;
}

void criterion_solver() {
  constexpr double kResidualTol = 1e-9;
  constexpr double kCostTol = 1e-9;
  constexpr double kBudgetSec = 5.0;
  const auto t0 = Clock::now();

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> ut(0.5, 5.0);  // operating duration range
  double worst_residual = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const BoundaryState a = random_state(rng), b = random_state(rng);
    const double T = ut(rng);
    const Segment3D seg = solve_min_snap_segment(a, b, T);
    const Eigen::Vector3d sv[4] = {a.position, a.velocity, a.acceleration, a.jerk};
    const Eigen::Vector3d ev[4] = {b.position, b.velocity, b.acceleration, b.jerk};
    for (int order = 0; order < 4; ++order) {
      worst_residual = std::max(
          worst_residual, (evaluate(seg, 0.0, order) - sv[order]).cwiseAbs().maxCoeff());
      worst_residual = std::max(
          worst_residual, (evaluate(seg, T, order) - ev[order]).cwiseAbs().maxCoeff());
    }
  }

  // Degree-9 perturbations q(t) = t^4 (t-T)^4 (a + b t) keep all boundary
  // conditions; none may undercut the solver's snap cost.
  const double T = 1.3;
  const BoundaryState a = random_state(rng), b = random_state(rng);
  const Segment3D seg = solve_min_snap_segment(a, b, T);
  const double base_cost = snap_cost(seg);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  bool never_beaten = true;
  const int n = 20000;
  for (int trial = 0; trial < 100; ++trial) {
    double pa = u(rng), pb = u(rng);
    if (std::abs(pa) + std::abs(pb) < 0.01) pa = 0.5;
    auto q = [&](double t) { return std::pow(t, 4) * std::pow(t - T, 4) * (pa + pb * t); };
    double cost = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t = T * i / n;
      const double h = 1e-3;
      const double q4 =
          (q(t - 2 * h) - 4 * q(t - h) + 6 * q(t) - 4 * q(t + h) + q(t + 2 * h)) /
          (h * h * h * h);
      const double sx = seg.x.eval(t, 4) + q4;
      const double v = sx * sx + seg.y.eval(t, 4) * seg.y.eval(t, 4) +
                       seg.z.eval(t, 4) * seg.z.eval(t, 4);
      cost += (i == 0 || i == n) ? 0.5 * v : v;
    }
    cost *= T / n;
    if (cost < base_cost - kCostTol) never_beaten = false;
  }

  const double elapsed = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "residual %.2e, optimal %s, %.2f s", worst_residual,
                never_beaten ? "yes" : "NO", elapsed);
  report(1, "minimum-snap solver: residuals and optimality",
         worst_residual < kResidualTol && never_beaten && elapsed < kBudgetSec, buf);
}

// ---------------------------------------------------------------- criterion 2

void criterion_bundle() {
  constexpr double kEndpointTol = 1e-9;
  constexpr double kMedianMsBudget = 10.0;

  std::vector<double> times_ms;
  PeacockBundle bundle;
  for (int run = 0; run < 20; ++run) {
    const auto t0 = Clock::now();
    bundle = precompute_bundle(BundleParams{});
    times_ms.push_back(seconds_since(t0) * 1e3);
  }
  std::sort(times_ms.begin(), times_ms.end());
  const double median_ms = times_ms[times_ms.size() / 2];

  size_t seconds = 0;
  double worst = 0.0;
  for (const FirstStep& fs : bundle.grid) {
    seconds += fs.second_steps.size();
    const Eigen::Vector3d expected =
        bundle.params.speed * bundle.params.period *
        Eigen::Vector3d(std::cos(fs.yaw) * std::cos(fs.pitch),
                        std::sin(fs.yaw) * std::cos(fs.pitch), std::sin(fs.pitch));
    worst = std::max(worst, (fs.endpoint - expected).norm());
    worst = std::max(worst, (evaluate(fs.segment, fs.segment.duration) - fs.endpoint).norm());
    for (const SecondStep& ss : fs.second_steps) {
      const Eigen::Vector3d end2 =
          fs.endpoint + bundle.params.speed * bundle.params.period *
                            Eigen::Vector3d(std::cos(fs.yaw + ss.yaw_offset),
                                            std::sin(fs.yaw + ss.yaw_offset), 0.0);
      worst = std::max(worst, (evaluate(ss.segment, ss.segment.duration) - end2).norm());
    }
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu first, %zu second, residual %.2e, median %.2f ms",
                bundle.grid.size(), seconds, worst, median_ms);
  report(2, "trajectory fan: counts, endpoints, precompute time",
         bundle.grid.size() == 81 && seconds == 567 && worst < kEndpointTol &&
             median_ms < kMedianMsBudget,
         buf);
}

// ---------------------------------------------------------------- criterion 3

// Flat-grid reference with exact per-voxel slab-overlap ray enumeration.
struct DenseOracle {
  MapParams params;
  AABB bounds;
  int nx, ny, nz;
  std::vector<double> lo;
  std::vector<char> known;

  DenseOracle(const MapParams& p, const AABB& b) : params(p), bounds(b) {
    nx = static_cast<int>(std::round(b.extent().x() / p.resolution));
    ny = static_cast<int>(std::round(b.extent().y() / p.resolution));
    nz = static_cast<int>(std::round(b.extent().z() / p.resolution));
    lo.assign(static_cast<size_t>(nx * ny * nz), 0.0);
    known.assign(lo.size(), 0);
  }

  int index_of(const Eigen::Vector3d& p) const {
    if (!bounds.contains(p)) return -1;
    const int ix = std::min(nx - 1, static_cast<int>((p.x() - bounds.min.x()) / params.resolution));
    const int iy = std::min(ny - 1, static_cast<int>((p.y() - bounds.min.y()) / params.resolution));
    const int iz = std::min(nz - 1, static_cast<int>((p.z() - bounds.min.z()) / params.resolution));
    return (ix * ny + iy) * nz + iz;
  }

  bool crosses(const Eigen::Vector3d& o, const Eigen::Vector3d& dir, double len,
               int ix, int iy, int iz, double* entry) const {
    double t0 = 0.0, t1 = len;
    const Eigen::Vector3d corner = bounds.min + params.resolution * Eigen::Vector3d(ix, iy, iz);
    for (int a = 0; a < 3; ++a) {
      const double mn = corner[a], mx = mn + params.resolution;
      if (dir[a] == 0.0) {
        if (o[a] <= mn || o[a] >= mx) return false;
        continue;
      }
      double ta = (mn - o[a]) / dir[a], tb = (mx - o[a]) / dir[a];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
    }
    *entry = t0;
    return t1 > t0;
  }

  void insert_scan(const Eigen::Vector3d& origin,
                   const std::vector<Eigen::Vector3d>& endpoints, double max_range) {
    std::vector<char> is_hit(lo.size(), 0), is_miss(lo.size(), 0);
    for (const Eigen::Vector3d& e : endpoints) {
      const double dist = (e - origin).norm();
      if (!(dist > 0.0)) continue;
      const bool hit = dist <= max_range;
      const double len = hit ? dist : max_range;
      const Eigen::Vector3d dir = (e - origin) / dist;
      const int endv = hit ? index_of(e) : -1;

      double exit_len = len;
      for (int a = 0; a < 3; ++a) {
        if (dir[a] == 0.0) continue;
        const double t = ((dir[a] > 0 ? bounds.max[a] : bounds.min[a]) - origin[a]) / dir[a];
        if (t > 0.0) exit_len = std::min(exit_len, t);
      }
      for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
          for (int iz = 0; iz < nz; ++iz) {
            double entry = 0.0;
            if (!crosses(origin, dir, len, ix, iy, iz, &entry)) continue;
            if (entry > exit_len) continue;
            const int v = (ix * ny + iy) * nz + iz;
            if (v != endv) is_miss[static_cast<size_t>(v)] = 1;
          }
      if (endv >= 0 && exit_len >= len) is_hit[static_cast<size_t>(endv)] = 1;
    }
    const double lhit = std::log(params.hit_prob) - std::log(1 - params.hit_prob);
    const double lmiss = std::log(params.miss_prob) - std::log(1 - params.miss_prob);
    const double clo = std::log(params.clamp_min) - std::log(1 - params.clamp_min);
    const double chi = std::log(params.clamp_max) - std::log(1 - params.clamp_max);
    for (size_t i = 0; i < lo.size(); ++i) {
      if (is_hit[i]) {
        lo[i] = std::clamp(lo[i] + lhit, clo, chi);
        known[i] = 1;
      } else if (is_miss[i]) {
        lo[i] = std::clamp(lo[i] + lmiss, clo, chi);
        known[i] = 1;
      }
    }
  }

  CellState state(int ix, int iy, int iz) const {
    const size_t i = static_cast<size_t>((ix * ny + iy) * nz + iz);
    if (!known[i]) return CellState::Unknown;
    return lo[i] > 0.0 ? CellState::Occupied : CellState::Free;
  }

  Eigen::Vector3d center(int ix, int iy, int iz) const {
    return bounds.min + params.resolution * Eigen::Vector3d(ix + 0.5, iy + 0.5, iz + 0.5);
  }
};

void criterion_octree() {
  constexpr double kLogOddsTol = 1e-12;
  const AABB bounds{{0, 0, 0}, {4, 2, 2}};  // 16 m^3
  const MapParams params;
  bool ok = true;
  std::ostringstream why;

  {
    OccupancyOctree map(params, bounds);
    const Eigen::Vector3d origin(0.25, 0.25, 0.25), target(3.25, 1.25, 1.25);
    map.insert_scan(origin, {target}, 15.0);
    double lo = 0.0;
    if (!map.leaf_log_odds(target, &lo) ||
        std::abs(lo - std::log(0.65 / 0.35)) > kLogOddsTol) {
      ok = false;
      why << "single-hit log-odds off; ";
    }

    const Eigen::Vector3d dir = (target - origin).normalized();
    map.insert_scan(origin, {origin + 20.0 * dir}, 15.0);  // miss through target voxel
    if (!map.leaf_log_odds(target, &lo) || lo != 0.0) {
      ok = false;
      why << "hit+miss not exactly zero; ";
    }

    for (int i = 0; i < 40; ++i) map.insert_scan(origin, {target}, 15.0);
    if (!map.leaf_log_odds(target, &lo) ||
        std::abs(lo - std::log(0.97 / 0.03)) > kLogOddsTol) {
      ok = false;
      why << "clamp off; ";
    }
  }

  {
    OccupancyOctree map(params, bounds);
    DenseOracle oracle(params, bounds);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ux(0.05, 3.95), uyz(0.05, 1.95);
    const Eigen::Vector3d origin(0.77, 0.91, 1.03);
    for (int s = 0; s < 10; ++s) {
      std::vector<Eigen::Vector3d> scan;
      for (int i = 0; i < 100; ++i) scan.push_back({ux(rng), uyz(rng), uyz(rng)});
      map.insert_scan(origin, scan, 15.0);
      oracle.insert_scan(origin, scan, 15.0);
    }
    int mismatches = 0;
    int max_visits = 0;
    for (int ix = 0; ix < oracle.nx; ++ix)
      for (int iy = 0; iy < oracle.ny; ++iy)
        for (int iz = 0; iz < oracle.nz; ++iz) {
          if (map.search(oracle.center(ix, iy, iz), 16) != oracle.state(ix, iy, iz))
            ++mismatches;
          max_visits = std::max(max_visits, map.last_search_visits());
        }
    if (mismatches > 0) {
      ok = false;
      why << mismatches << " oracle mismatches; ";
    }
    if (max_visits > 16) {
      ok = false;
      why << "search visited " << max_visits << " nodes; ";
    }
  }

  report(3, "occupancy octree: updates, oracle, query depth", ok,
         ok ? "1000-ray dense-grid match exact" : why.str());
}

// ---------------------------------------------------------------- criterion 4

void criterion_planner() {
  constexpr double kBudgetSec = 10.0;
  const auto t0 = Clock::now();
  const AABB bounds{{-16, -16, -16}, {16, 16, 16}};
  bool ok = true;
  std::ostringstream why;

  // fully unknown map picks the straight-ahead centre family
  {
    const OccupancyOctree map(MapParams{}, bounds);
    const PeacockBundle bundle = precompute_bundle(BundleParams{});
    const PlanResult res =
        plan_step(map, bundle, Eigen::Vector3d::Zero(), 0.0, PlannerOptions{});
    if (res.decision.all_blocked || res.decision.row != 4 || res.decision.col != 4) {
      ok = false;
      why << "unknown map chose (" << res.decision.row << "," << res.decision.col
          << "); ";
    }
  }

  // score/selection equivalence with a per-sample reference on seeded maps
  BundleParams bp;
  bp.rows = 5;
  bp.cols = 5;
  bp.branches = 3;
  const PeacockBundle bundle = precompute_bundle(bp);
  int score_mismatch = 0, blocked_selected = 0;
  for (uint32_t seed = 0; seed < 50 && ok; ++seed) {
    std::mt19937 rng(seed);
    OccupancyOctree map(MapParams{}, bounds);
    std::uniform_real_distribution<double> u(-7.0, 7.0);
    std::bernoulli_distribution occ(0.25);
    for (int i = 0; i < 80; ++i) {
      const Eigen::Vector3d p(u(rng), u(rng), u(rng));
      if (occ(rng))
        map.insert_scan(p - Eigen::Vector3d(0.01, 0, 0), {p}, 15.0);  // hit only
      else
        map.insert_scan(p, {p + Eigen::Vector3d(100, 0, 0)}, 0.02);  // miss only
    }
    const Eigen::Vector3d pos(u(rng) * 0.3, u(rng) * 0.3, u(rng) * 0.3);
    const double yaw = u(rng);
    const auto fams = transform_bundle_samples(bundle, pos, yaw);
    const PlannerOptions opt;
    const ScoreMatrix got = score_bundle(map, fams, bp.rows, bp.cols, opt);

    for (size_t i = 0; i < fams.size(); ++i) {
      double score = 0.0;
      bool blocked = false;
      auto visit = [&](const Eigen::Vector3d& p) {
        switch (map.search(p)) {
          case CellState::Occupied: blocked = true; break;
          case CellState::Free: score += opt.weights.free_weight; break;
          case CellState::Unknown: score += opt.weights.unknown_weight; break;
        }
        return !blocked;
      };
      for (const auto& p : fams[i].first)
        if (!visit(p)) break;
      if (!blocked)
        for (const auto& p : fams[i].second)
          if (!visit(p)) break;
      if (blocked != (got.blocked[i] != 0) || (!blocked && score != got.score[i]))
        ++score_mismatch;
    }
    const PlanDecision d = select_best(got);
    if (!d.all_blocked && got.is_blocked(d.row, d.col)) ++blocked_selected;
  }
  if (score_mismatch > 0 || blocked_selected > 0) {
    ok = false;
    why << score_mismatch << " score mismatches, " << blocked_selected
        << " blocked selections; ";
  }

  const double elapsed = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "50 seeded maps, %.2f s", elapsed);
  report(4, "planner: reference equivalence and selection", ok && elapsed < kBudgetSec,
         ok ? buf : why.str());
}

// ---------------------------------------------------------------- criterion 5

void criterion_controller() {
  constexpr double kHoverDriftTol = 1e-9;
  constexpr double kStepErrTol = 0.05;
  constexpr double kOrthoTol = 1e-6;
  constexpr double kTrackTol = 0.3;
  const VehicleParams params;
  bool ok = true;
  std::ostringstream why;

  {
    VehicleState s;
    s.position = {1, 1, 2};
    ControlInput hover;
    hover.thrust = params.mass * params.gravity;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const VehicleState next = step_dynamics(s, hover, params, 0.001);
      worst = std::max(worst, (next.position - s.position).norm());
      s = next;
    }
    if (worst >= kHoverDriftTol) {
      ok = false;
      why << "hover drift " << worst << "; ";
    }
  }

  {
    VehicleState s;
    s.position = {0, 0, 2};
    FlatTarget target;
    target.position = {2, 0, 2};
    for (int i = 0; i < 1000; ++i)
      s = step_dynamics(s, geometric_control(s, target, params), params, 0.005);
    const double err = (s.position - target.position).norm();
    if (err >= kStepErrTol) {
      ok = false;
      why << "step error " << err << " at 5 s; ";
    }
  }

  {
    VehicleState s;
    s.omega = {1.0, -2.0, 3.0};
    ControlInput u;
    u.thrust = params.mass * params.gravity;
    for (int i = 0; i < 100000; ++i) s = step_dynamics(s, u, params, 0.001);
    const double drift =
        (s.rotation.transpose() * s.rotation - Eigen::Matrix3d::Identity()).norm();
    if (drift >= kOrthoTol) {
      ok = false;
      why << "orthonormality drift " << drift << "; ";
    }
  }

  double track_err = 0.0;
  {
    BoundaryState start;
    start.velocity = {5, 0, 0};
    BoundaryState end;
    end.position = {2.5, 0, 0};
    end.velocity = {5, 0, 0};
    const Segment3D seg = solve_min_snap_segment(start, end, 0.5);
    VehicleState s;
    s.velocity = {5, 0, 0};
    track_err = track(s, seg, params, 0.001, 200.0).max_position_error;
    if (track_err >= kTrackTol) {
      ok = false;
      why << "tracking error " << track_err << "; ";
    }
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf), "dash tracking error %.3f m", track_err);
  report(5, "controller: hover, step, orthonormality, tracking", ok,
         ok ? buf : why.str());
}

// ---------------------------------------------------------------- criterion 6

double reachable_free_volume(const World& w, const Eigen::Vector3d& start, double res) {
  const Eigen::Vector3d ext = w.bounds.extent();
  const int nx = static_cast<int>(std::round(ext.x() / res));
  const int ny = static_cast<int>(std::round(ext.y() / res));
  const int nz = static_cast<int>(std::round(ext.z() / res));
  auto idx = [&](int x, int y, int z) { return (x * ny + y) * nz + z; };

  std::vector<char> free_cell(static_cast<size_t>(nx * ny * nz), 0);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      for (int z = 0; z < nz; ++z) {
        const Eigen::Vector3d lo = w.bounds.min + res * Eigen::Vector3d(x, y, z);
        const Eigen::Vector3d hi = lo + Eigen::Vector3d::Constant(res);
        bool blocked = false;
        for (const AABB& box : w.boxes)
          if ((hi.array() > box.min.array()).all() && (lo.array() < box.max.array()).all()) {
            blocked = true;
            break;
          }
        free_cell[static_cast<size_t>(idx(x, y, z))] = blocked ? 0 : 1;
      }

  const int sx = std::clamp(
      static_cast<int>((start.x() - w.bounds.min.x()) / res), 0, nx - 1);
  const int sy = std::clamp(
      static_cast<int>((start.y() - w.bounds.min.y()) / res), 0, ny - 1);
  const int sz = std::clamp(
      static_cast<int>((start.z() - w.bounds.min.z()) / res), 0, nz - 1);

  std::vector<char> seen(free_cell.size(), 0);
  std::deque<std::array<int, 3>> queue;
  if (free_cell[static_cast<size_t>(idx(sx, sy, sz))]) {
    queue.push_back({sx, sy, sz});
    seen[static_cast<size_t>(idx(sx, sy, sz))] = 1;
  }
  size_t count = 0;
  const int dx[6] = {1, -1, 0, 0, 0, 0};
  const int dy[6] = {0, 0, 1, -1, 0, 0};
  const int dz[6] = {0, 0, 0, 0, 1, -1};
  while (!queue.empty()) {
    const auto [x, y, z] = queue.front();
    queue.pop_front();
    ++count;
    for (int k = 0; k < 6; ++k) {
      const int a = x + dx[k], b = y + dy[k], c = z + dz[k];
      if (a < 0 || b < 0 || c < 0 || a >= nx || b >= ny || c >= nz) continue;
      const size_t i = static_cast<size_t>(idx(a, b, c));
      if (!seen[i] && free_cell[i]) {
        seen[i] = 1;
        queue.push_back({a, b, c});
      }
    }
  }
  return static_cast<double>(count) * res * res * res;
}

constexpr uint32_t kDeskSeed = 11;

bool criterion_desk_maze(World* world_out, MissionConfig* config_out,
                         MissionResult* result_out) {
  constexpr double kCoverageFraction = 0.60;
  constexpr double kWallBudgetSec = 300.0;
  const auto t0 = Clock::now();

  const World world = generate_world(WorldKind::Desk, kDeskSeed);
  MissionConfig config;  // dynamic mode defaults
  const MissionResult result = run_mission(world, config);
  const double elapsed = seconds_since(t0);

  bool ok = true;
  std::ostringstream why;
  const MissionOutcome outcome = result.metrics.summary.outcome;
  if (outcome != MissionOutcome::Completed && outcome != MissionOutcome::Stalled) {
    ok = false;
    why << "outcome " << outcome_name(outcome) << "; ";
  }
  if (!(result.metrics.min_clearance > config.vehicle_radius)) {
    ok = false;
    why << "min clearance " << result.metrics.min_clearance << "; ";
  }
  for (size_t i = 1; i < result.metrics.series.size(); ++i) {
    const auto& a = result.metrics.series[i - 1];
    const auto& b = result.metrics.series[i];
    if (b.free_volume + b.occupied_volume < a.free_volume + a.occupied_volume - 1e-9) {
      ok = false;
      why << "known volume shrank at cycle " << b.cycle << "; ";
      break;
    }
  }
  const Eigen::Vector3d start(world.bounds.center().x(), world.bounds.center().y(),
                              world.bounds.min.z() + config.takeoff_altitude);
  const double reachable = reachable_free_volume(world, start, config.map.resolution);
  const double known = result.metrics.summary.mapped_volume;
  if (known < kCoverageFraction * reachable) {
    ok = false;
    why << "known " << known << " of reachable " << reachable << "; ";
  }
  if (elapsed >= kWallBudgetSec) {
    ok = false;
    why << elapsed << " s wall time; ";
  }

  char buf[200];
  std::snprintf(buf, sizeof(buf), "%s, known %.0f / reachable %.0f m^3, %.0f s",
                outcome_name(outcome), known, reachable, elapsed);
  report(6, "closed-loop maze flight: safety and coverage", ok, ok ? buf : why.str());
  *world_out = world;
  *config_out = config;
  *result_out = result;
  return ok;
}

// ---------------------------------------------------------------- criterion 7

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism(const World& world, const MissionConfig& config,
                           const MissionResult& first) {
  write_artifacts(first, world, "acceptance_run_a");
  const MissionResult second = run_mission(world, config);
  write_artifacts(second, world, "acceptance_run_b");
  const std::string a = slurp("acceptance_run_a/metrics.csv");
  const std::string b = slurp("acceptance_run_b/metrics.csv");
  const bool ok = !a.empty() && a == b;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "metrics.csv %zu bytes, %s", a.size(),
                ok ? "identical" : "DIFFER");
  report(7, "repeated run is byte-identical", ok, buf);
}

// ---------------------------------------------------------------- criterion 8

void criterion_large_world() {
  constexpr double kVolumeLo = 10000.0;
  constexpr double kVolumeHi = 60000.0;

  const World world = generate_world(WorldKind::Full, 3);
  MissionConfig config;
  config.mode = MissionMode::Kinematic;
  config.max_mission_time = 600.0;
  // The two-step horizon has no global frontier memory; give the endurance
  // run more patience before declaring the maze exhausted than the desk-room
  // default, which is tuned for a single chamber.
  config.stall_cycles = 60;
  const MissionResult result = run_mission(world, config);

  const MissionOutcome outcome = result.metrics.summary.outcome;
  const double volume = result.metrics.summary.mapped_volume;
  const bool ok = outcome != MissionOutcome::CollisionFailure &&
                  result.metrics.min_clearance > config.vehicle_radius &&
                  volume >= kVolumeLo && volume <= kVolumeHi;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s, mapped %.0f m^3, flight %.0f m",
                outcome_name(outcome), volume, result.metrics.summary.flight_length);
  report(8, "large-world endurance run (kinematic)", ok, buf);
}

}  // namespace

int main(int argc, char** argv) {
  bool slow = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--slow") == 0) slow = true;

  criterion_solver();
  criterion_bundle();
  criterion_octree();
  criterion_planner();
  criterion_controller();

  World world;
  MissionConfig config;
  MissionResult result;
  criterion_desk_maze(&world, &config, &result);
  criterion_determinism(world, config, result);

  if (slow) criterion_large_world();

  int failed = 0;
  for (const Criterion& c : results)
    if (!c.passed) ++failed;
  std::printf("%zu criteria checked, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
