#include "nfuq/domain.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "nfuq/errors.hpp"

namespace nfuq {

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Interval: return "interval";
    case DomainKind::Grid2d: return "grid2d";
    case DomainKind::TriangulatedSurface: return "mesh";
  }
  return "?";
}

Domain::Domain(DomainKind kind, int dim, std::vector<Point> nodes, std::vector<double> weights)
    : kind_(kind), dim_(dim), nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (dim_ < 1 || dim_ > 3) throw ValidationError(fmt::format("domain dimension {} not in [1,3]", dim_));
  if (nodes_.size() != weights_.size())
    throw ValidationError("domain: node and weight counts differ");
  if (nodes_.size() < 2) throw ValidationError("domain: at least two nodes are required");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
      throw ValidationError(fmt::format("domain: weight {} of node {} is not positive", weights_[i], i));
  }
  measure_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

double euclidean_distance(const Point& a, const Point& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace {

std::vector<double> trapezoid_weights(double a, double b, int n) {
  const double h = (b - a) / (n - 1);
  std::vector<double> w(n, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

double uniform_node(double a, double b, int n, int i) {
  // exact endpoints, no accumulated drift
  if (i == n - 1) return b;
  return a + (b - a) * static_cast<double>(i) / (n - 1);
}

}  // namespace

Domain build_interval(double a, double b, int n) {
  if (!(a < b)) throw ValidationError(fmt::format("interval: need a < b, got [{}, {}]", a, b));
  if (n < 2) throw ValidationError(fmt::format("interval: need n >= 2, got {}", n));
  std::vector<Point> nodes(n);
  for (int i = 0; i < n; ++i) nodes[i] = {uniform_node(a, b, n, i), 0.0, 0.0};
  return Domain(DomainKind::Interval, 1, std::move(nodes), trapezoid_weights(a, b, n));
}

Domain build_grid2d(const Rectangle& r, int nx, int ny) {
  if (!(r.x0 < r.x1) || !(r.y0 < r.y1))
    throw ValidationError(fmt::format("grid2d: degenerate extents [{},{}]x[{},{}]", r.x0, r.x1, r.y0, r.y1));
  if (nx < 2 || ny < 2) throw ValidationError(fmt::format("grid2d: need nx, ny >= 2, got {}x{}", nx, ny));
  const auto wx = trapezoid_weights(r.x0, r.x1, nx);
  const auto wy = trapezoid_weights(r.y0, r.y1, ny);
  std::vector<Point> nodes;
  std::vector<double> weights;
  nodes.reserve(static_cast<std::size_t>(nx) * ny);
  weights.reserve(nodes.capacity());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      nodes.push_back({uniform_node(r.x0, r.x1, nx, i), uniform_node(r.y0, r.y1, ny, j), 0.0});
      weights.push_back(wx[i] * wy[j]);
    }
  }
  return Domain(DomainKind::Grid2d, 2, std::move(nodes), std::move(weights));
}

namespace {

// Next non-blank, non-comment line; returns false at EOF.
bool next_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

Domain load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open mesh file '{}'", path.string()));

  std::string line;
  int lineno = 0;
  if (!next_line(in, line, lineno)) throw ParseError("empty mesh file", lineno + 1);
  {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag != "OFF") throw ParseError("expected 'OFF' header, got '" + tag + "'", lineno);
  }

  long nv = -1, nt = -1, ne = -1;
  if (!next_line(in, line, lineno)) throw ParseError("missing count line", lineno + 1);
  {
    std::istringstream ss(line);
    if (!(ss >> nv >> nt >> ne) || nv < 3 || nt < 1)
      throw ParseError("expected '<nv> <nt> 0' with nv >= 3, nt >= 1", lineno);
  }

  std::vector<Point> verts(nv);
  for (long i = 0; i < nv; ++i) {
    if (!next_line(in, line, lineno)) throw ParseError(fmt::format("expected vertex {} of {}", i, nv), lineno + 1);
    std::istringstream ss(line);
    if (!(ss >> verts[i][0] >> verts[i][1] >> verts[i][2]))
      throw ParseError("vertex line needs three coordinates", lineno);
  }

  std::vector<double> weights(nv, 0.0);
  for (long t = 0; t < nt; ++t) {
    if (!next_line(in, line, lineno)) throw ParseError(fmt::format("expected triangle {} of {}", t, nt), lineno + 1);
    std::istringstream ss(line);
    long k = 0;
    long idx[3];
    if (!(ss >> k >> idx[0] >> idx[1] >> idx[2]) || k != 3)
      throw ParseError("face line must be '3 i j k'", lineno);
    for (long v : idx) {
      if (v < 0 || v >= nv) throw ParseError(fmt::format("vertex index {} out of range [0,{})", v, nv), lineno);
    }
    const Point& a = verts[idx[0]];
    const Point& b = verts[idx[1]];
    const Point& c = verts[idx[2]];
    const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
    const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
    const double cx = uy * vz - uz * vy, cy = uz * vx - ux * vz, cz = ux * vy - uy * vx;
    const double area = 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
    if (!(area > 0.0))
      throw ValidationError(fmt::format("mesh line {}: degenerate (zero-area) triangle", lineno));
    for (long v : idx) weights[v] += area / 3.0;
  }

  for (long i = 0; i < nv; ++i) {
    if (weights[i] == 0.0) throw ValidationError(fmt::format("mesh: vertex {} belongs to no triangle", i));
  }
  return Domain(DomainKind::TriangulatedSurface, 3, std::move(verts), std::move(weights));
}

}  // namespace nfuq
