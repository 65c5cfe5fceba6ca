#include "peacock/world.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "peacock/errors.hpp"

namespace peacock {

namespace {

constexpr double kNoReturn = std::numeric_limits<double>::quiet_NaN();

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i + 1)});
    i = j;
  }
  return out;
}

double parse_real(const Token& tok, int line_no) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok.text, &used);
  } catch (const std::exception&) {
    throw ParseError(line_no, tok.column, "expected a number, got '" + tok.text + "'");
  }
  if (used != tok.text.size())
    throw ParseError(line_no, tok.column, "trailing characters in number '" + tok.text + "'");
  return v;
}

AABB parse_aabb(const std::vector<Token>& toks, int line_no) {
  double v[6];
  for (int k = 0; k < 6; ++k) v[k] = parse_real(toks[static_cast<size_t>(k + 1)], line_no);
  AABB box;
  box.min = Eigen::Vector3d(v[0], v[1], v[2]);
  box.max = Eigen::Vector3d(v[3], v[4], v[5]);
  return box;
}

}  // namespace

World load_world(std::istream& in) {
  World world;
  bool have_bounds = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<Token> toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0].text;
    if (kw != "bounds" && kw != "box")
      throw ParseError(line_no, toks[0].column, "unknown directive '" + kw + "'");
    if (toks.size() != 7)
      throw ParseError(line_no, toks[0].column,
                       kw + " needs 6 reals, got " + std::to_string(toks.size() - 1));
    const AABB box = parse_aabb(toks, line_no);
    if (!box.valid()) throw SemanticError(line_no, "inverted extents in " + kw);
    if (kw == "bounds") {
      if (have_bounds) throw SemanticError(line_no, "duplicate bounds");
      world.bounds = box;
      have_bounds = true;
    } else {
      if (!have_bounds) throw ParseError(line_no, toks[0].column, "box before bounds");
      if (!world.bounds.contains(box.min) || !world.bounds.contains(box.max))
        throw SemanticError(line_no, "box outside world bounds");
      world.boxes.push_back(box);
    }
  }
  if (!have_bounds) throw ParseError(line_no + 1, 1, "missing bounds line");
  return world;
}

World load_world_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open world file: " + path);
  return load_world(in);
}

void save_world(const World& world, std::ostream& out) {
  auto put = [&out](const char* kw, const AABB& b) {
    out << kw << ' ' << b.min.x() << ' ' << b.min.y() << ' ' << b.min.z() << ' '
        << b.max.x() << ' ' << b.max.y() << ' ' << b.max.z() << '\n';
  };
  put("bounds", world.bounds);
  for (const AABB& box : world.boxes) put("box", box);
}

std::optional<double> raycast(const World& world, const Eigen::Vector3d& origin,
                              const Eigen::Vector3d& direction, double max_range) {
  if (std::abs(direction.norm() - 1.0) > 1e-9)
    throw NonUnitDirection("raycast direction must be unit length");

  double best = std::numeric_limits<double>::infinity();
  for (const AABB& box : world.boxes) {
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    bool miss = false;
    for (int a = 0; a < 3 && !miss; ++a) {
      if (direction[a] == 0.0) {
        if (origin[a] < box.min[a] || origin[a] > box.max[a]) miss = true;
        continue;
      }
      double lo = (box.min[a] - origin[a]) / direction[a];
      double hi = (box.max[a] - origin[a]) / direction[a];
      if (lo > hi) std::swap(lo, hi);
      t0 = std::max(t0, lo);
      t1 = std::min(t1, hi);
      if (t0 > t1) miss = true;
    }
    if (miss) continue;
    const double t = t0 > 0.0 ? t0 : (t1 > 0.0 ? t1 : -1.0);
    if (t > 0.0) best = std::min(best, t);
  }
  if (best <= max_range) return best;
  return std::nullopt;
}

Eigen::Vector3d CameraModel::ray_direction(int row, int col) const {
  const double el =
      ray_rows == 1 ? 0.0 : -0.5 * v_fov + v_fov * static_cast<double>(row) / (ray_rows - 1);
  const double az =
      ray_cols == 1 ? 0.0 : -0.5 * h_fov + h_fov * static_cast<double>(col) / (ray_cols - 1);
  return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

DepthImage render_depth(const World& world, const Eigen::Vector3d& position,
                        const Eigen::Matrix3d& rotation, const CameraModel& camera) {
  DepthImage img;
  img.rows = camera.ray_rows;
  img.cols = camera.ray_cols;
  img.position = position;
  img.rotation = rotation;
  img.camera = camera;
  img.ranges.assign(static_cast<size_t>(img.rows * img.cols), kNoReturn);
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) {
      const Eigen::Vector3d dir = (rotation * camera.ray_direction(r, c)).normalized();
      const auto hit = raycast(world, position, dir, camera.max_range);
      if (hit && *hit >= camera.min_range)
        img.ranges[static_cast<size_t>(r * img.cols + c)] = *hit;
    }
  }
  return img;
}

std::vector<Eigen::Vector3d> depth_to_points(const DepthImage& image) {
  std::vector<Eigen::Vector3d> points;
  for (int r = 0; r < image.rows; ++r) {
    for (int c = 0; c < image.cols; ++c) {
      const double range = image.at(r, c);
      if (!std::isfinite(range)) continue;
      const Eigen::Vector3d dir =
          (image.rotation * image.camera.ray_direction(r, c)).normalized();
      points.push_back(image.position + range * dir);
    }
  }
  return points;
}

namespace {

// Signed distance to a box: negative inside.
double box_sdf(const AABB& box, const Eigen::Vector3d& p) {
  const Eigen::Vector3d c = box.center();
  const Eigen::Vector3d h = 0.5 * box.extent();
  const Eigen::Vector3d d = (p - c).cwiseAbs() - h;
  const Eigen::Vector3d outside = d.cwiseMax(0.0);
  return outside.norm() + std::min(d.maxCoeff(), 0.0);
}

}  // namespace

double clearance(const World& world, const Eigen::Vector3d& position) {
  // Distance to the bounds walls, from inside; negative outside.
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    best = std::min(best, position[a] - world.bounds.min[a]);
    best = std::min(best, world.bounds.max[a] - position[a]);
  }
  for (const AABB& box : world.boxes) best = std::min(best, box_sdf(box, position));
  return best;
}

}  // namespace peacock
