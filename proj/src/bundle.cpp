#include "peacock/bundle.hpp"

#include <algorithm>
#include <cmath>

#include "peacock/errors.hpp"

namespace peacock {

namespace {

// Inclusive symmetric linspace over [-half_range, half_range].
double grid_angle(int i, int n, double half_range) {
  if (n == 1) return 0.0;
  return -half_range + 2.0 * half_range * static_cast<double>(i) / static_cast<double>(n - 1);
}

constexpr int kFineSteps = 500;

// Horner evaluation of the position only; the generic evaluate() carries
// per-call validation that dominates the dense sweeps below.
Eigen::Vector3d eval_pos(const Segment3D& seg, double t) {
  Eigen::Vector3d p;
  const Polynomial1D* axes[3] = {&seg.x, &seg.y, &seg.z};
  for (int a = 0; a < 3; ++a) {
    double acc = 0.0;
    for (int d = 7; d >= 0; --d) acc = acc * t + axes[a]->coefficients[static_cast<size_t>(d)];
    p[a] = acc;
  }
  return p;
}

// Dense sweep of a segment: cumulative chord arc length at uniform t steps.
struct FineSweep {
  std::array<Eigen::Vector3d, kFineSteps + 1> point;
  std::array<double, kFineSteps + 1> arc;
  double total() const { return arc[kFineSteps]; }
};

void sweep_segment(const Segment3D& seg, FineSweep* out) {
  out->point[0] = eval_pos(seg, 0.0);
  out->arc[0] = 0.0;
  for (int k = 1; k <= kFineSteps; ++k) {
    out->point[k] = eval_pos(seg, seg.duration * k / kFineSteps);
    out->arc[k] = out->arc[k - 1] + (out->point[k] - out->point[k - 1]).norm();
  }
}

// `intervals`+1 samples equally spaced in arc length. Every family uses the
// same interval count so that uniform maps score every candidate equally.
std::vector<CurveSample> sample_segment(const Segment3D& seg, const FineSweep& sweep,
                                        int intervals) {
  std::vector<CurveSample> out;
  out.reserve(static_cast<size_t>(intervals) + 1);
  out.push_back({0.0, sweep.point[0]});

  const double total = sweep.total();
  int k = 1;
  for (int next = 1; next < intervals; ++next) {
    const double target = total * next / intervals;
    while (k < kFineSteps && sweep.arc[k] < target) ++k;
    const double d = sweep.arc[k] - sweep.arc[k - 1];
    const double f = d > 0.0 ? (target - sweep.arc[k - 1]) / d : 0.0;
    const double tf = seg.duration * (k - 1 + f) / kFineSteps;
    out.push_back({tf, evaluate(seg, tf)});
  }
  out.push_back({seg.duration, evaluate(seg, seg.duration)});
  return out;
}

Eigen::Vector3d direction(double yaw, double pitch) {
  return {std::cos(yaw) * std::cos(pitch), std::sin(yaw) * std::cos(pitch),
          std::sin(pitch)};
}

}  // namespace

void BundleParams::validate() const {
  if (!(speed > 0.0) || !(period > 0.0) || rows < 1 || cols < 1 || branches < 1 ||
      !(sample_spacing > 0.0))
    throw InvalidParams("bundle params out of range");
}

const FirstStep& PeacockBundle::at(int row, int col) const {
  if (row < 0 || row >= params.rows || col < 0 || col >= params.cols)
    throw IndexOutOfRange("bundle cell index out of range");
  return grid[static_cast<size_t>(row * params.cols + col)];
}

int PeacockBundle::samples_per_family(int row, int col) const {
  const FirstStep& fs = at(row, col);
  size_t n = fs.samples.size();
  for (const SecondStep& ss : fs.second_steps) n += ss.samples.size();
  return static_cast<int>(n);
}

PeacockBundle precompute_bundle(const BundleParams& params) {
  params.validate();
  const double v = params.speed;
  const double T = params.period;

  PeacockBundle bundle;
  bundle.params = params;
  bundle.grid.reserve(static_cast<size_t>(params.rows * params.cols));

  BoundaryState start;
  start.velocity = Eigen::Vector3d(v, 0.0, 0.0);

  // First build every segment, then pick one interval count per step kind
  // (the largest any segment needs) so all families carry equal sample
  // counts while still meeting the spacing bound.
  double max_arc_first = 0.0;
  double max_arc_second = 0.0;
  std::vector<FineSweep> first_sweeps(
      static_cast<size_t>(params.rows * params.cols));
  std::vector<FineSweep> second_sweeps(
      static_cast<size_t>(params.rows * params.cols * params.branches));

  for (int row = 0; row < params.rows; ++row) {
    const double pitch = grid_angle(row, params.rows, params.pitch_range);
    for (int col = 0; col < params.cols; ++col) {
      const double yaw = grid_angle(col, params.cols, params.yaw_range);
      const Eigen::Vector3d dir = direction(yaw, pitch);

      FirstStep fs;
      fs.yaw = yaw;
      fs.pitch = pitch;
      fs.endpoint = v * T * dir;

      BoundaryState end;
      end.position = fs.endpoint;
      end.velocity = v * dir;
      fs.segment = solve_min_snap_segment(start, end, T);
      FineSweep& fsweep = first_sweeps[static_cast<size_t>(row * params.cols + col)];
      sweep_segment(fs.segment, &fsweep);
      max_arc_first = std::max(max_arc_first, fsweep.total());

      // Second steps are planar: constant z at the first-step endpoint.
      const Eigen::Vector3d horiz(std::cos(yaw), std::sin(yaw), 0.0);
      fs.second_steps.reserve(static_cast<size_t>(params.branches));
      for (int b = 0; b < params.branches; ++b) {
        const double offset = grid_angle(b, params.branches, params.branch_yaw_range);
        const double branch_yaw = yaw + offset;
        const Eigen::Vector3d bdir(std::cos(branch_yaw), std::sin(branch_yaw), 0.0);

        SecondStep ss;
        ss.yaw_offset = offset;
        BoundaryState s2;
        s2.position = fs.endpoint;
        s2.velocity = v * horiz;
        BoundaryState e2;
        e2.position = fs.endpoint + v * T * bdir;
        e2.velocity = v * bdir;
        ss.segment = solve_min_snap_segment(s2, e2, T);
        FineSweep& ssweep =
            second_sweeps[static_cast<size_t>((row * params.cols + col) *
                                                  params.branches +
                                              b)];
        sweep_segment(ss.segment, &ssweep);
        max_arc_second = std::max(max_arc_second, ssweep.total());
        fs.second_steps.push_back(std::move(ss));
      }
      bundle.grid.push_back(std::move(fs));
    }
  }

  const int n_first =
      std::max(1, static_cast<int>(std::ceil(max_arc_first / params.sample_spacing)));
  const int n_second =
      std::max(1, static_cast<int>(std::ceil(max_arc_second / params.sample_spacing)));
  for (size_t i = 0; i < bundle.grid.size(); ++i) {
    FirstStep& fs = bundle.grid[i];
    fs.samples = sample_segment(fs.segment, first_sweeps[i], n_first);
    for (size_t b = 0; b < fs.second_steps.size(); ++b) {
      SecondStep& ss = fs.second_steps[b];
      ss.samples = sample_segment(
          ss.segment, second_sweeps[i * fs.second_steps.size() + b], n_second);
    }
  }
  return bundle;
}

std::vector<FamilySamples> transform_bundle_samples(const PeacockBundle& bundle,
                                                    const Eigen::Vector3d& position,
                                                    double yaw) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  auto xf = [&](const Eigen::Vector3d& p) {
    return Eigen::Vector3d(c * p.x() - s * p.y() + position.x(),
                           s * p.x() + c * p.y() + position.y(), p.z() + position.z());
  };

  std::vector<FamilySamples> out;
  out.reserve(bundle.grid.size());
  for (const FirstStep& fs : bundle.grid) {
    FamilySamples fam;
    fam.first.reserve(fs.samples.size());
    for (const CurveSample& cs : fs.samples) fam.first.push_back(xf(cs.point));
    size_t n = 0;
    for (const SecondStep& ss : fs.second_steps) n += ss.samples.size();
    fam.second.reserve(n);
    for (const SecondStep& ss : fs.second_steps)
      for (const CurveSample& cs : ss.samples) fam.second.push_back(xf(cs.point));
    out.push_back(std::move(fam));
  }
  return out;
}

Segment3D transform_segment(const Segment3D& canonical, const Eigen::Vector3d& position,
                            double yaw) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  Segment3D out = canonical;
  for (size_t k = 0; k < 8; ++k) {
    const double cx = canonical.x.coefficients[k];
    const double cy = canonical.y.coefficients[k];
    out.x.coefficients[k] = c * cx - s * cy;
    out.y.coefficients[k] = s * cx + c * cy;
  }
  out.x.coefficients[0] += position.x();
  out.y.coefficients[0] += position.y();
  out.z.coefficients[0] += position.z();
  return out;
}

Segment3D selected_world_segment(const PeacockBundle& bundle, int row, int col,
                                 const Eigen::Vector3d& position, double yaw) {
  return transform_segment(bundle.at(row, col).segment, position, yaw);
}

}  // namespace peacock
