#include "peacock/worldgen.hpp"

#include <algorithm>
#include <random>

namespace peacock {

namespace {

struct MazeSpec {
  double side;          // square footprint edge
  double height;        // full wall height
  double half_height;   // upper/lower blocked wall height
  double wall_thickness;
  int wall_count;
  double min_len, max_len;
  double start_clear;   // keep this radius around the start free
};

void add_perimeter(World& world, double thickness) {
  const AABB& b = world.bounds;
  const double t = thickness;
  world.boxes.push_back({{b.min.x(), b.min.y(), b.min.z()}, {b.max.x(), b.min.y() + t, b.max.z()}});
  world.boxes.push_back({{b.min.x(), b.max.y() - t, b.min.z()}, {b.max.x(), b.max.y(), b.max.z()}});
  world.boxes.push_back({{b.min.x(), b.min.y(), b.min.z()}, {b.min.x() + t, b.max.y(), b.max.z()}});
  world.boxes.push_back({{b.max.x() - t, b.min.y(), b.min.z()}, {b.max.x(), b.max.y(), b.max.z()}});
}

World generate(const MazeSpec& spec, uint32_t seed) {
  World world;
  world.bounds.min = Eigen::Vector3d::Zero();
  world.bounds.max = Eigen::Vector3d(spec.side, spec.side, spec.height);
  add_perimeter(world, spec.wall_thickness);

  const Eigen::Vector2d start(0.5 * spec.side, 0.5 * spec.side);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> upos(spec.wall_thickness + 1.0,
                                              spec.side - spec.wall_thickness - 1.0);
  std::uniform_real_distribution<double> ulen(spec.min_len, spec.max_len);
  std::uniform_int_distribution<int> ukind(0, 2);  // full / upper / lower
  std::uniform_int_distribution<int> uaxis(0, 1);

  int placed = 0;
  int attempts = 0;
  while (placed < spec.wall_count && attempts < spec.wall_count * 50) {
    ++attempts;
    const bool along_x = uaxis(rng) == 0;
    const double at = upos(rng);
    const double from = upos(rng);
    const double len = ulen(rng);
    const double to = std::min(from + len, spec.side - spec.wall_thickness - 1.0);
    if (to - from < spec.min_len * 0.5) continue;

    AABB box;
    if (along_x) {
      box.min = Eigen::Vector3d(from, at, 0.0);
      box.max = Eigen::Vector3d(to, at + spec.wall_thickness, spec.height);
    } else {
      box.min = Eigen::Vector3d(at, from, 0.0);
      box.max = Eigen::Vector3d(at + spec.wall_thickness, to, spec.height);
    }
    switch (ukind(rng)) {
      case 1:  // upper blocked: wall hangs from the ceiling
        box.min.z() = spec.height - spec.half_height;
        break;
      case 2:  // lower blocked
        box.max.z() = spec.half_height;
        break;
      default:
        break;
    }

    // keep the start area free regardless of wall height
    const Eigen::Vector2d lo = box.min.head<2>().array() - spec.start_clear;
    const Eigen::Vector2d hi = box.max.head<2>().array() + spec.start_clear;
    if (start.x() >= lo.x() && start.x() <= hi.x() && start.y() >= lo.y() &&
        start.y() <= hi.y())
      continue;

    world.boxes.push_back(box);
    ++placed;
  }
  return world;
}

}  // namespace

World generate_world(WorldKind kind, uint32_t seed) {
  MazeSpec spec;
  if (kind == WorldKind::Desk) {
    spec = {20.0, 4.0, 2.0, 0.4, 6, 4.0, 9.0, 3.0};
  } else {
    spec = {90.0, 8.0, 4.0, 0.5, 28, 8.0, 25.0, 4.0};
  }
  return generate(spec, seed);
}

}  // namespace peacock
