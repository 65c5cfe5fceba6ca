#include "peacock/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "peacock/errors.hpp"

namespace peacock {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

std::string fmt_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* b = v.data();
  auto [p, ec] = std::from_chars(b, b + v.size(), out);
  if (ec != std::errc() || p != b + v.size())
    throw InvalidParams("config key " + key + ": bad number '" + v + "'");
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const char* b = v.data();
  auto [p, ec] = std::from_chars(b, b + v.size(), out);
  if (ec != std::errc() || p != b + v.size())
    throw InvalidParams("config key " + key + ": bad integer '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw InvalidParams("config key " + key + ": expected true/false, got '" + v + "'");
}

struct KeySpec {
  std::string name;
  std::function<std::string(const MissionConfig&)> get;
  std::function<void(MissionConfig&, const std::string&)> set;
};

std::vector<KeySpec> registry() {
  using C = MissionConfig;
  std::vector<KeySpec> keys;
  auto dbl = [&keys](const std::string& name, auto getter, auto setter) {
    keys.push_back({name, [getter](const C& c) { return fmt_double(getter(c)); },
                    [setter, name](C& c, const std::string& v) {
                      setter(c, parse_double(name, v));
                    }});
  };
  auto deg = [&keys](const std::string& name, auto getter, auto setter) {
    // stored internally in radians, exposed in degrees; snap to 12
    // significant decimals so deg->rad->deg noise cannot leak into the file
    keys.push_back({name,
                    [getter](const C& c) {
                      const double d = getter(c) / kDegToRad;
                      return fmt_double(std::round(d * 1e12) / 1e12);
                    },
                    [setter, name](C& c, const std::string& v) {
                      setter(c, parse_double(name, v) * kDegToRad);
                    }});
  };
  auto num = [&keys](const std::string& name, auto getter, auto setter) {
    keys.push_back({name,
                    [getter](const C& c) { return std::to_string(getter(c)); },
                    [setter, name](C& c, const std::string& v) {
                      setter(c, parse_int(name, v));
                    }});
  };
  auto flag = [&keys](const std::string& name, auto getter, auto setter) {
    keys.push_back({name,
                    [getter](const C& c) { return getter(c) ? "true" : "false"; },
                    [setter, name](C& c, const std::string& v) {
                      setter(c, parse_bool(name, v));
                    }});
  };

  dbl("bundle.speed", [](const C& c) { return c.bundle.speed; },
      [](C& c, double v) { c.bundle.speed = v; });
  dbl("bundle.period", [](const C& c) { return c.bundle.period; },
      [](C& c, double v) { c.bundle.period = v; });
  num("bundle.rows", [](const C& c) { return c.bundle.rows; },
      [](C& c, int v) { c.bundle.rows = v; });
  num("bundle.cols", [](const C& c) { return c.bundle.cols; },
      [](C& c, int v) { c.bundle.cols = v; });
  num("bundle.branches", [](const C& c) { return c.bundle.branches; },
      [](C& c, int v) { c.bundle.branches = v; });
  deg("bundle.yaw_range_deg", [](const C& c) { return c.bundle.yaw_range; },
      [](C& c, double v) { c.bundle.yaw_range = v; });
  deg("bundle.pitch_range_deg", [](const C& c) { return c.bundle.pitch_range; },
      [](C& c, double v) { c.bundle.pitch_range = v; });
  deg("bundle.branch_yaw_range_deg", [](const C& c) { return c.bundle.branch_yaw_range; },
      [](C& c, double v) { c.bundle.branch_yaw_range = v; });
  dbl("bundle.sample_spacing", [](const C& c) { return c.bundle.sample_spacing; },
      [](C& c, double v) { c.bundle.sample_spacing = v; });

  dbl("map.resolution", [](const C& c) { return c.map.resolution; },
      [](C& c, double v) { c.map.resolution = v; });
  dbl("map.hit_prob", [](const C& c) { return c.map.hit_prob; },
      [](C& c, double v) { c.map.hit_prob = v; });
  dbl("map.miss_prob", [](const C& c) { return c.map.miss_prob; },
      [](C& c, double v) { c.map.miss_prob = v; });
  dbl("map.occupancy_threshold", [](const C& c) { return c.map.occupancy_threshold; },
      [](C& c, double v) { c.map.occupancy_threshold = v; });
  dbl("map.clamp_min", [](const C& c) { return c.map.clamp_min; },
      [](C& c, double v) { c.map.clamp_min = v; });
  dbl("map.clamp_max", [](const C& c) { return c.map.clamp_max; },
      [](C& c, double v) { c.map.clamp_max = v; });
  num("map.max_depth", [](const C& c) { return c.map.max_depth; },
      [](C& c, int v) { c.map.max_depth = v; });
  num("map.query_depth", [](const C& c) { return c.map.query_depth; },
      [](C& c, int v) { c.map.query_depth = v; });

  deg("camera.h_fov_deg", [](const C& c) { return c.camera.h_fov; },
      [](C& c, double v) { c.camera.h_fov = v; });
  deg("camera.v_fov_deg", [](const C& c) { return c.camera.v_fov; },
      [](C& c, double v) { c.camera.v_fov = v; });
  dbl("camera.min_range", [](const C& c) { return c.camera.min_range; },
      [](C& c, double v) { c.camera.min_range = v; });
  dbl("camera.max_range", [](const C& c) { return c.camera.max_range; },
      [](C& c, double v) { c.camera.max_range = v; });
  num("camera.ray_cols", [](const C& c) { return c.camera.ray_cols; },
      [](C& c, int v) { c.camera.ray_cols = v; });
  num("camera.ray_rows", [](const C& c) { return c.camera.ray_rows; },
      [](C& c, int v) { c.camera.ray_rows = v; });

  dbl("vehicle.mass", [](const C& c) { return c.vehicle.mass; },
      [](C& c, double v) { c.vehicle.mass = v; });
  dbl("vehicle.gravity", [](const C& c) { return c.vehicle.gravity; },
      [](C& c, double v) { c.vehicle.gravity = v; });
  dbl("vehicle.inertia_xx", [](const C& c) { return c.vehicle.inertia(0, 0); },
      [](C& c, double v) { c.vehicle.inertia(0, 0) = v; });
  dbl("vehicle.inertia_yy", [](const C& c) { return c.vehicle.inertia(1, 1); },
      [](C& c, double v) { c.vehicle.inertia(1, 1) = v; });
  dbl("vehicle.inertia_zz", [](const C& c) { return c.vehicle.inertia(2, 2); },
      [](C& c, double v) { c.vehicle.inertia(2, 2) = v; });
  dbl("vehicle.k_pos", [](const C& c) { return c.vehicle.k_pos; },
      [](C& c, double v) { c.vehicle.k_pos = v; });
  dbl("vehicle.k_vel", [](const C& c) { return c.vehicle.k_vel; },
      [](C& c, double v) { c.vehicle.k_vel = v; });
  dbl("vehicle.k_rot", [](const C& c) { return c.vehicle.k_rot; },
      [](C& c, double v) { c.vehicle.k_rot = v; });
  dbl("vehicle.k_omega", [](const C& c) { return c.vehicle.k_omega; },
      [](C& c, double v) { c.vehicle.k_omega = v; });

  dbl("planner.free_weight", [](const C& c) { return c.planner.weights.free_weight; },
      [](C& c, double v) { c.planner.weights.free_weight = v; });
  dbl("planner.unknown_weight",
      [](const C& c) { return c.planner.weights.unknown_weight; },
      [](C& c, double v) { c.planner.weights.unknown_weight = v; });
  flag("planner.occupied_blocks_permanently",
       [](const C& c) { return c.planner.occupied_blocks_permanently; },
       [](C& c, bool v) { c.planner.occupied_blocks_permanently = v; });
  flag("planner.second_step_blocks",
       [](const C& c) { return c.planner.second_step_blocks; },
       [](C& c, bool v) { c.planner.second_step_blocks = v; });
  num("planner.threads", [](const C& c) { return c.planner.threads; },
      [](C& c, int v) { c.planner.threads = v; });

  dbl("mission.takeoff_altitude", [](const C& c) { return c.takeoff_altitude; },
      [](C& c, double v) { c.takeoff_altitude = v; });
  dbl("mission.takeoff_duration", [](const C& c) { return c.takeoff_duration; },
      [](C& c, double v) { c.takeoff_duration = v; });
  dbl("mission.start_altitude", [](const C& c) { return c.start_altitude; },
      [](C& c, double v) { c.start_altitude = v; });
  dbl("mission.max_time", [](const C& c) { return c.max_mission_time; },
      [](C& c, double v) { c.max_mission_time = v; });
  num("mission.stall_cycles", [](const C& c) { return c.stall_cycles; },
      [](C& c, int v) { c.stall_cycles = v; });
  dbl("mission.vehicle_radius", [](const C& c) { return c.vehicle_radius; },
      [](C& c, double v) { c.vehicle_radius = v; });
  dbl("mission.sim_dt", [](const C& c) { return c.sim_dt; },
      [](C& c, double v) { c.sim_dt = v; });
  dbl("mission.control_rate", [](const C& c) { return c.control_rate; },
      [](C& c, double v) { c.control_rate = v; });

  keys.push_back({"mission.mode",
                  [](const C& c) {
                    return std::string(c.mode == MissionMode::Dynamic ? "dynamic"
                                                                      : "kinematic");
                  },
                  [](C& c, const std::string& v) {
                    if (v == "dynamic")
                      c.mode = MissionMode::Dynamic;
                    else if (v == "kinematic")
                      c.mode = MissionMode::Kinematic;
                    else
                      throw InvalidParams("mission.mode must be dynamic or kinematic");
                  }});
  keys.push_back({"mission.seed",
                  [](const C& c) { return std::to_string(c.seed); },
                  [](C& c, const std::string& v) {
                    c.seed = static_cast<uint32_t>(parse_int("mission.seed", v));
                  }});
  keys.push_back({"mission.start_xy",
                  [](const C& c) {
                    if (!c.start_xy) return std::string("auto");
                    return fmt_double(c.start_xy->x()) + " " + fmt_double(c.start_xy->y());
                  },
                  [](C& c, const std::string& v) {
                    if (v == "auto") {
                      c.start_xy.reset();
                      return;
                    }
                    std::istringstream ss(v);
                    double x, y;
                    if (!(ss >> x >> y))
                      throw InvalidParams("mission.start_xy: expected 'auto' or two reals");
                    c.start_xy = Eigen::Vector2d(x, y);
                  }});
  keys.push_back({"mission.goal",
                  [](const C& c) {
                    if (!c.goal_region) return std::string("none");
                    const GoalRegion& g = *c.goal_region;
                    return fmt_double(g.center.x()) + " " + fmt_double(g.center.y()) +
                           " " + fmt_double(g.center.z()) + " " + fmt_double(g.radius);
                  },
                  [](C& c, const std::string& v) {
                    if (v == "none") {
                      c.goal_region.reset();
                      return;
                    }
                    std::istringstream ss(v);
                    GoalRegion g;
                    if (!(ss >> g.center.x() >> g.center.y() >> g.center.z() >> g.radius))
                      throw InvalidParams("mission.goal: expected 'none' or four reals");
                    c.goal_region = g;
                  }});
  return keys;
}

void refresh_raw(RunConfig& config) {
  config.raw.clear();
  for (const KeySpec& k : registry()) config.raw[k.name] = k.get(config.mission);
}

}  // namespace

RunConfig default_run_config() {
  RunConfig config;
  refresh_raw(config);
  return config;
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig config;
  const std::vector<KeySpec> keys = registry();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    line = line.substr(a, b - a + 1);
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(line_no, 1, "expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto strip = [](std::string& s) {
      const size_t x = s.find_first_not_of(" \t");
      const size_t y = s.find_last_not_of(" \t");
      s = x == std::string::npos ? "" : s.substr(x, y - x + 1);
    };
    strip(key);
    strip(value);
    const auto it =
        std::find_if(keys.begin(), keys.end(), [&](const KeySpec& k) { return k.name == key; });
    if (it == keys.end())
      throw ParseError(line_no, 1, "unknown config key '" + key + "'");
    it->set(config.mission, value);
  }
  refresh_raw(config);
  return config;
}

RunConfig parse_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_run_config(in);
}

void serialize_run_config(const RunConfig& config, std::ostream& out) {
  for (const KeySpec& k : registry())
    out << k.name << '=' << k.get(config.mission) << '\n';
}

}  // namespace peacock
