#ifndef PEACOCK_WORLDGEN_HPP
#define PEACOCK_WORLDGEN_HPP

#include <cstdint>

#include "peacock/world.hpp"

namespace peacock {

enum class WorldKind { Desk, Full };

/// Seeded maze generator. `Desk` is a 20x20x4 m arena for fast runs; `Full`
/// is a 90x90x8 m maze with full-height walls plus upper/lower half walls.
/// The area around the start point (the bounds center) is kept clear.
World generate_world(WorldKind kind, uint32_t seed);

}  // namespace peacock

#endif
