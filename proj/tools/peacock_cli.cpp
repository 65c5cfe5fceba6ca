#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "peacock/config.hpp"
#include "peacock/mission.hpp"
#include "peacock/worldgen.hpp"

namespace {

using namespace peacock;

RunConfig load_config(const std::string& path) {
  if (path.empty()) return default_run_config();
  return parse_run_config_file(path);
}

void dump_bundle_csv(const PeacockBundle& bundle, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "step,row,col,branch,t,x,y,z\n";
  char buf[160];
  for (int r = 0; r < bundle.params.rows; ++r) {
    for (int c = 0; c < bundle.params.cols; ++c) {
      const FirstStep& fs = bundle.at(r, c);
      for (const CurveSample& s : fs.samples) {
        std::snprintf(buf, sizeof(buf), "1,%d,%d,-1,%.4f,%.6f,%.6f,%.6f\n", r, c, s.t,
                      s.point.x(), s.point.y(), s.point.z());
        out << buf;
      }
      for (size_t b = 0; b < fs.second_steps.size(); ++b) {
        for (const CurveSample& s : fs.second_steps[b].samples) {
          std::snprintf(buf, sizeof(buf), "2,%d,%d,%zu,%.4f,%.6f,%.6f,%.6f\n", r, c, b,
                        s.t, s.point.x(), s.point.y(), s.point.z());
          out << buf;
        }
      }
    }
  }
}

int cmd_precompute(const std::string& config_path, const std::string& out_path) {
  const RunConfig config = load_config(config_path);

  std::vector<double> times_ms;
  PeacockBundle bundle;
  for (int i = 0; i < 20; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    bundle = precompute_bundle(config.mission.bundle);
    times_ms.push_back(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count());
  }
  std::sort(times_ms.begin(), times_ms.end());

  dump_bundle_csv(bundle, out_path);
  std::printf("first_steps=%d second_steps=%d\n",
              bundle.params.rows * bundle.params.cols,
              bundle.params.rows * bundle.params.cols * bundle.params.branches);
  std::printf("precompute_ms median=%.3f p90=%.3f max=%.3f over %zu runs\n",
              times_ms[times_ms.size() / 2], times_ms[times_ms.size() * 9 / 10],
              times_ms.back(), times_ms.size());
  return 0;
}

int cmd_explore(const std::string& world_path, const std::string& config_path,
                int seed, const std::string& out_dir) {
  RunConfig config = load_config(config_path);
  if (seed >= 0) config.mission.seed = static_cast<uint32_t>(seed);
  const World world = load_world_file(world_path);

  const MissionResult result = run_mission(world, config.mission);
  write_artifacts(result, world, out_dir);
  {
    std::ofstream out(std::filesystem::path(out_dir) / "config.txt");
    serialize_run_config(config, out);
  }

  const MissionSummary& s = result.metrics.summary;
  std::printf("outcome=%s duration=%.2fs length=%.2fm mapped=%.1fm3 min_clearance=%.2fm\n",
              outcome_name(s.outcome), s.duration, s.flight_length, s.mapped_volume,
              result.metrics.min_clearance);
  const bool ok = s.outcome == MissionOutcome::Completed ||
                  s.outcome == MissionOutcome::Stalled;
  return ok ? 0 : 1;
}

int cmd_genworld(const std::string& kind, int seed, const std::string& out_path) {
  const WorldKind k = kind == "full" ? WorldKind::Full : WorldKind::Desk;
  const World world = generate_world(k, static_cast<uint32_t>(seed));
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  save_world(world, out);
  std::printf("%s world with %zu boxes -> %s\n", kind.c_str(), world.boxes.size(),
              out_path.c_str());
  return 0;
}

int cmd_export(const std::string& in_path, const std::string& format,
               const std::string& out_path) {
  // input is the occupied-voxel CSV written by `explore` (map.csv)
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open map artifact: " + in_path);
  std::vector<std::pair<Eigen::Vector3d, double>> cells;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Eigen::Vector3d p;
    double prob;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &p.x(), &p.y(), &p.z(), &prob) != 4)
      throw std::runtime_error("bad map csv line: " + line);
    cells.push_back({p, prob});
  }

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  char buf[128];
  if (format == "ply") {
    out << "ply\nformat ascii 1.0\nelement vertex " << cells.size()
        << "\nproperty float x\nproperty float y\nproperty float z\n"
           "property float intensity\nend_header\n";
    for (const auto& [p, prob] : cells) {
      std::snprintf(buf, sizeof(buf), "%.3f %.3f %.3f %.4f\n", p.x(), p.y(), p.z(), prob);
      out << buf;
    }
  } else {
    out << "x,y,z,probability\n";
    for (const auto& [p, prob] : cells) {
      std::snprintf(buf, sizeof(buf), "%.3f,%.3f,%.3f,%.4f\n", p.x(), p.y(), p.z(), prob);
      out << buf;
    }
  }
  std::printf("%zu voxels -> %s\n", cells.size(), out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"peacock exploration stack"};
  app.require_subcommand(1);

  std::string config_path, world_path, out_path = "out", kind = "desk", format = "ply";
  std::string in_path;
  int seed = -1;

  CLI::App* precompute = app.add_subcommand("precompute", "precompute the trajectory fan");
  precompute->add_option("--config", config_path, "config file");
  precompute->add_option("--out", out_path, "bundle CSV path")->required();

  CLI::App* explore = app.add_subcommand("explore", "run an exploration mission");
  explore->add_option("--world", world_path, "world file")->required();
  explore->add_option("--config", config_path, "config file");
  explore->add_option("--seed", seed, "override mission.seed");
  explore->add_option("--out", out_path, "output directory")->required();

  CLI::App* genworld = app.add_subcommand("genworld", "generate a maze world file");
  genworld->add_option("--kind", kind, "desk or full")
      ->check(CLI::IsMember({"desk", "full"}));
  genworld->add_option("--seed", seed, "generator seed");
  genworld->add_option("--out", out_path, "world file path")->required();

  CLI::App* exportc = app.add_subcommand("export", "convert a map artifact");
  exportc->add_option("--in", in_path, "map.csv from a run")->required();
  exportc->add_option("--format", format, "ply or csv")
      ->check(CLI::IsMember({"ply", "csv"}));
  exportc->add_option("--out", out_path, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (precompute->parsed()) return cmd_precompute(config_path, out_path);
    if (explore->parsed()) return cmd_explore(world_path, config_path, seed, out_path);
    if (genworld->parsed())
      return cmd_genworld(kind, seed < 0 ? 0 : seed, out_path);
    if (exportc->parsed()) return cmd_export(in_path, format, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
