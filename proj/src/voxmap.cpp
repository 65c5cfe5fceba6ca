#include "peacock/voxmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "peacock/errors.hpp"

namespace peacock {

namespace {

// log(p) - log(1-p) rather than log(p/(1-p)): for complementary hit/miss
// probabilities the two updates are then exact negations, so a hit followed
// by a miss cancels to exactly zero.
double log_odds_of(double p) { return std::log(p) - std::log(1.0 - p); }

}  // namespace

void MapParams::validate() const {
  if (!(resolution > 0.0)) throw InvalidParams("resolution must be > 0");
  if (!(0.0 < miss_prob && miss_prob < 0.5 && 0.5 < hit_prob && hit_prob < 1.0))
    throw InvalidParams("need 0 < miss_prob < 0.5 < hit_prob < 1");
  if (!(clamp_min < 0.5 && 0.5 < clamp_max))
    throw InvalidParams("need clamp_min < 0.5 < clamp_max");
  if (query_depth < 1 || query_depth > max_depth)
    throw InvalidParams("need 1 <= query_depth <= max_depth");
  if (max_depth < 1 || max_depth > 21) throw InvalidParams("max_depth out of range");
}

OccupancyOctree::OccupancyOctree(const MapParams& params, const AABB& world_bounds)
    : params_(params), bounds_(world_bounds) {
  params_.validate();
  if (!bounds_.valid()) throw InvalidParams("degenerate map bounds");
  const double side = params_.resolution * std::ldexp(1.0, params_.max_depth);
  if ((bounds_.extent().array() > side).any())
    throw InvalidParams("world bounds exceed the octree cube");
  key_origin_ = bounds_.center() - 0.5 * Eigen::Vector3d::Constant(side);
  log_hit_ = log_odds_of(params_.hit_prob);
  log_miss_ = log_odds_of(params_.miss_prob);
  clamp_lo_ = log_odds_of(params_.clamp_min);
  clamp_hi_ = log_odds_of(params_.clamp_max);
  threshold_log_ = log_odds_of(params_.occupancy_threshold);
  root_ = std::make_unique<Node>();
}

bool OccupancyOctree::key_of(const Eigen::Vector3d& p, Key* key) const {
  if (!bounds_.contains(p)) return false;
  for (int a = 0; a < 3; ++a) {
    const double rel = (p[a] - key_origin_[a]) / params_.resolution;
    (&key->x)[a] = static_cast<uint32_t>(std::floor(rel));
  }
  return true;
}

uint64_t OccupancyOctree::pack(const Key& key) const {
  return (static_cast<uint64_t>(key.x) << 42) | (static_cast<uint64_t>(key.y) << 21) |
         static_cast<uint64_t>(key.z);
}

namespace {

struct InsertCtx {
  int max_depth;
  double clamp_lo, clamp_hi;
};

int child_index(uint32_t kx, uint32_t ky, uint32_t kz, int depth, int max_depth) {
  const int b = max_depth - 1 - depth;
  return static_cast<int>((((kx >> b) & 1u) << 2) | (((ky >> b) & 1u) << 1) |
                          ((kz >> b) & 1u));
}

}  // namespace

void OccupancyOctree::update_leaf(const Key& key, double delta) {
  // Iterative descent, then recompute subtree_max back up the path.
  Node* path[32];
  Node* n = root_.get();
  int depth = 0;
  for (; depth < params_.max_depth; ++depth) {
    path[depth] = n;
    const int idx = child_index(key.x, key.y, key.z, depth, params_.max_depth);
    if (!n->children[idx]) n->children[idx] = std::make_unique<Node>();
    n = n->children[idx].get();
  }
  n->is_leaf = true;
  n->log_odds = std::clamp(n->log_odds + delta, clamp_lo_, clamp_hi_);
  n->subtree_max = n->log_odds;
  for (int d = params_.max_depth - 1; d >= 0; --d) {
    Node* p = path[d];
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& c : p->children)
      if (c) m = std::max(m, c->subtree_max);
    p->subtree_max = m;
  }
}

OccupancyOctree::ScanSummary OccupancyOctree::insert_scan(
    const Eigen::Vector3d& origin, const std::vector<Eigen::Vector3d>& endpoints,
    double max_range) {
  Key okey;
  if (!key_of(origin, &okey)) throw OriginOutOfBounds("scan origin outside map bounds");

  std::unordered_set<uint64_t> hits, misses;
  std::vector<Key> traversed;
  const double res = params_.resolution;

  for (const Eigen::Vector3d& e : endpoints) {
    const Eigen::Vector3d delta = e - origin;
    const double dist = delta.norm();
    if (!(dist > 0.0)) continue;
    const bool is_hit = dist <= max_range;
    const double length = is_hit ? dist : max_range;
    const Eigen::Vector3d dir = delta / dist;

    // Amanatides-Woo voxel walk from origin toward the (possibly truncated)
    // endpoint, stopping at the map bounds.
    traversed.clear();
    Key cur = okey;
    int step[3];
    double t_max[3], t_delta[3];
    for (int a = 0; a < 3; ++a) {
      const uint32_t k = (&cur.x)[a];
      if (dir[a] > 0.0) {
        step[a] = 1;
        t_max[a] = (key_origin_[a] + (k + 1) * res - origin[a]) / dir[a];
        t_delta[a] = res / dir[a];
      } else if (dir[a] < 0.0) {
        step[a] = -1;
        t_max[a] = (key_origin_[a] + k * res - origin[a]) / dir[a];
        t_delta[a] = -res / dir[a];
      } else {
        step[a] = 0;
        t_max[a] = std::numeric_limits<double>::infinity();
        t_delta[a] = std::numeric_limits<double>::infinity();
      }
    }
    bool exited = false;
    while (true) {
      traversed.push_back(cur);
      int m = 0;
      if (t_max[1] < t_max[m]) m = 1;
      if (t_max[2] < t_max[m]) m = 2;
      if (t_max[m] > length) break;  // ray ends inside the current voxel
      const double boundary = t_max[m];
      (&cur.x)[m] = static_cast<uint32_t>(static_cast<int64_t>((&cur.x)[m]) + step[m]);
      t_max[m] += t_delta[m];
      const Eigen::Vector3d probe = origin + (boundary + 1e-9) * dir;
      if (!bounds_.contains(probe)) {
        exited = true;
        break;
      }
    }

    if (is_hit && !exited) {
      Key ekey;
      if (key_of(e, &ekey)) {
        const uint64_t hk = pack(ekey);
        hits.insert(hk);
        for (const Key& k : traversed) {
          const uint64_t mk = pack(k);
          if (mk != hk) misses.insert(mk);
        }
        continue;
      }
    }
    for (const Key& k : traversed) misses.insert(pack(k));
  }

  ScanSummary summary;
  auto unpack = [](uint64_t v) {
    return Key{static_cast<uint32_t>(v >> 42), static_cast<uint32_t>((v >> 21) & 0x1FFFFF),
               static_cast<uint32_t>(v & 0x1FFFFF)};
  };
  for (uint64_t v : hits) {
    update_leaf(unpack(v), log_hit_);
    ++summary.hit_cells;
  }
  for (uint64_t v : misses) {
    if (hits.count(v)) continue;
    update_leaf(unpack(v), log_miss_);
    ++summary.miss_cells;
  }
  return summary;
}

CellState OccupancyOctree::search(const Eigen::Vector3d& point, int depth) const {
  return search_counted(point, depth, &last_search_visits_);
}

CellState OccupancyOctree::search_counted(const Eigen::Vector3d& point, int depth,
                                          int* visits) const {
  int local_visits = 0;
  if (!visits) visits = &local_visits;
  *visits = 0;
  depth = std::min(depth, params_.max_depth);
  Key key;
  if (!key_of(point, &key)) return CellState::Unknown;
  const Node* n = root_.get();
  int d = 0;
  while (d < depth && !n->is_leaf) {
    const int idx = child_index(key.x, key.y, key.z, d, params_.max_depth);
    const Node* c = n->children[idx].get();
    if (!c) return CellState::Unknown;
    n = c;
    ++d;
    ++*visits;
  }
  if (n->is_leaf)
    return n->log_odds > threshold_log_ ? CellState::Occupied : CellState::Free;
  if (d == 0) {
    // depth limit hit at the root: known iff any child exists
    bool any = false;
    for (const auto& c : n->children) any = any || static_cast<bool>(c);
    if (!any) return CellState::Unknown;
  }
  return n->subtree_max > threshold_log_ ? CellState::Occupied : CellState::Free;
}

std::pair<double, double> OccupancyOctree::mapped_volumes() const {
  const double leaf_vol = std::pow(params_.resolution, 3);
  double free_vol = 0.0, occ_vol = 0.0;
  struct Walker {
    double threshold;
    double leaf_vol;
    double* free_vol;
    double* occ_vol;
    void walk(const Node* n) {
      if (n->is_leaf) {
        (n->log_odds > threshold ? *occ_vol : *free_vol) += leaf_vol;
        return;
      }
      for (const auto& c : n->children)
        if (c) walk(c.get());
    }
  } w{threshold_log_, leaf_vol, &free_vol, &occ_vol};
  w.walk(root_.get());
  return {free_vol, occ_vol};
}

std::vector<std::pair<Eigen::Vector3d, double>> OccupancyOctree::export_occupied() const {
  std::vector<std::pair<Eigen::Vector3d, double>> out;
  struct Walker {
    const OccupancyOctree* self;
    std::vector<std::pair<Eigen::Vector3d, double>>* out;
    // child order 0..7 yields Z-order over cell keys
    void walk(const Node* n, uint32_t kx, uint32_t ky, uint32_t kz) {
      if (n->is_leaf) {
        if (n->log_odds > self->threshold_log_) {
          const double res = self->params_.resolution;
          Eigen::Vector3d center = self->key_origin_ +
                                   res * Eigen::Vector3d(kx + 0.5, ky + 0.5, kz + 0.5);
          const double p = 1.0 / (1.0 + std::exp(-n->log_odds));
          out->push_back({center, p});
        }
        return;
      }
      for (int idx = 0; idx < 8; ++idx) {
        const Node* c = n->children[idx].get();
        if (!c) continue;
        walk(c, (kx << 1) | static_cast<uint32_t>((idx >> 2) & 1),
             (ky << 1) | static_cast<uint32_t>((idx >> 1) & 1),
             (kz << 1) | static_cast<uint32_t>(idx & 1));
      }
    }
  } w{this, &out};
  w.walk(root_.get(), 0, 0, 0);
  return out;
}

bool OccupancyOctree::leaf_log_odds(const Eigen::Vector3d& point, double* out) const {
  Key key;
  if (!key_of(point, &key)) return false;
  const Node* n = root_.get();
  for (int d = 0; d < params_.max_depth; ++d) {
    const int idx = child_index(key.x, key.y, key.z, d, params_.max_depth);
    const Node* c = n->children[idx].get();
    if (!c) return false;
    n = c;
  }
  if (!n->is_leaf) return false;
  *out = n->log_odds;
  return true;
}

}  // namespace peacock
