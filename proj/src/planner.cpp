#include "peacock/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "peacock/errors.hpp"

namespace peacock {

void ScoreWeights::validate() const {
  if (!(unknown_weight > free_weight && free_weight > 0.0))
    throw InvalidParams("need unknown_weight > free_weight > 0");
}

namespace {

struct FamilyResult {
  double score = 0.0;
  bool blocked = false;
};

FamilyResult score_family(const OccupancyOctree& map, const FamilySamples& fam,
                          const PlannerOptions& opt) {
  const int depth = map.params().query_depth;
  const AABB& b = map.bounds();
  const Eigen::Vector3d lo = b.min + Eigen::Vector3d::Constant(opt.bounds_margin);
  const Eigen::Vector3d hi = b.max - Eigen::Vector3d::Constant(opt.bounds_margin);
  FamilyResult r;
  auto account = [&](const Eigen::Vector3d& p, bool second) -> bool {
    // Samples leaving the flyable volume can never be observed or safely
    // reached; treat them like occupied space instead of free gain.
    const bool inside = (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
    const CellState cell =
        inside ? map.search_counted(p, depth, nullptr) : CellState::Occupied;
    switch (cell) {
      case CellState::Occupied:
        if (!second || opt.second_step_blocks) {
          if (opt.occupied_blocks_permanently) {
            r.blocked = true;
            r.score = 0.0;
            return false;  // family disqualified, stop scanning
          }
          r.score = 0.0;  // literal reset, keep accumulating
        }
        break;
      case CellState::Free:
        r.score += opt.weights.free_weight;
        break;
      case CellState::Unknown:
        r.score += opt.weights.unknown_weight;
        break;
    }
    return true;
  };
  for (const Eigen::Vector3d& p : fam.first)
    if (!account(p, false)) return r;
  for (const Eigen::Vector3d& p : fam.second)
    if (!account(p, true)) return r;
  return r;
}

}  // namespace

ScoreMatrix score_bundle(const OccupancyOctree& map,
                         const std::vector<FamilySamples>& world_samples, int rows,
                         int cols, const PlannerOptions& options) {
  options.weights.validate();
  if (static_cast<size_t>(rows * cols) != world_samples.size())
    throw InvalidParams("sample grid does not match rows*cols");

  ScoreMatrix out;
  out.rows = rows;
  out.cols = cols;
  out.score.assign(world_samples.size(), 0.0);
  out.blocked.assign(world_samples.size(), 0);

  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const FamilyResult r = score_family(map, world_samples[i], options);
      out.score[i] = r.blocked ? 0.0 : r.score;
      out.blocked[i] = r.blocked ? 1 : 0;
    }
  };

  const int threads = std::max(1, options.threads);
  if (threads == 1 || world_samples.size() < 2) {
    work(0, world_samples.size());
  } else {
    // Families are independent; each thread writes disjoint cells, so the
    // result is identical to the sequential pass.
    std::vector<std::thread> pool;
    const size_t chunk = (world_samples.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const size_t begin = std::min(world_samples.size(), t * chunk);
      const size_t end = std::min(world_samples.size(), begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }
  return out;
}

PlanDecision select_best(const ScoreMatrix& scores) {
  double max_score = 0.0;
  for (int i = 0; i < scores.rows * scores.cols; ++i)
    if (!scores.blocked[static_cast<size_t>(i)])
      max_score = std::max(max_score, scores.score[static_cast<size_t>(i)]);

  PlanDecision d;
  if (max_score <= 0.0) {
    d.all_blocked = true;
    return d;
  }

  std::vector<std::pair<int, int>> tied;
  std::vector<int> tied_rows, tied_cols;
  for (int r = 0; r < scores.rows; ++r) {
    for (int c = 0; c < scores.cols; ++c) {
      if (scores.is_blocked(r, c) || scores.at(r, c) != max_score) continue;
      tied.push_back({r, c});
      tied_rows.push_back(r);
      tied_cols.push_back(c);
    }
  }

  if (tied.size() == 1) {
    d.row = tied[0].first;
    d.col = tied[0].second;
    return d;
  }

  auto lower_median = [](std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v[(v.size() - 1) / 2];
  };
  const int mr = lower_median(tied_rows);
  const int mc = lower_median(tied_cols);

  // Prefer the exact median cell; fall back to the nearest tied cell when
  // the median row/col combination is not itself tied.
  int best_dist = std::numeric_limits<int>::max();
  for (const auto& [r, c] : tied) {
    const int dist = std::abs(r - mr) + std::abs(c - mc);
    if (dist < best_dist) {
      best_dist = dist;
      d.row = r;
      d.col = c;
    }
  }
  return d;
}

PlanResult plan_step(const OccupancyOctree& map, const PeacockBundle& bundle,
                     const Eigen::Vector3d& position, double yaw,
                     const PlannerOptions& options) {
  const std::vector<FamilySamples> samples = transform_bundle_samples(bundle, position, yaw);
  PlanResult result;
  const ScoreMatrix scores =
      score_bundle(map, samples, bundle.params.rows, bundle.params.cols, options);
  result.decision = select_best(scores);
  for (size_t i = 0; i < scores.blocked.size(); ++i)
    if (scores.blocked[i]) ++result.blocked_count;
  for (int r = 0; r < bundle.params.rows && !result.any_unknown_gain; ++r)
    for (int c = 0; c < bundle.params.cols; ++c)
      if (!scores.is_blocked(r, c) &&
          scores.at(r, c) > options.weights.free_weight *
                                    bundle.samples_per_family(r, c) +
                                1e-9) {
        result.any_unknown_gain = true;
        break;
      }
  if (!result.decision.all_blocked) {
    result.max_score = scores.at(result.decision.row, result.decision.col);
    result.segment =
        selected_world_segment(bundle, result.decision.row, result.decision.col, position, yaw);
  }
  return result;
}

}  // namespace peacock
