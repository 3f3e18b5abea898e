#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <vector>

namespace nfuq {

using Point = std::array<double, 3>;

enum class DomainKind { Interval, Grid2d, TriangulatedSurface };

const char* to_string(DomainKind kind);

/// Quadrature-discretised compact domain. Every integral over D becomes a
/// weighted sum over `nodes()`. Immutable after construction.
class Domain {
 public:
  Domain(DomainKind kind, int dim, std::vector<Point> nodes, std::vector<double> weights);

  DomainKind kind() const noexcept { return kind_; }
  /// Spatial dimension d of the coordinates (1, 2 or 3).
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Point& node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  /// |D|, the sum of the quadrature weights.
  double measure() const noexcept { return measure_; }

  /// Quadrature of f sampled at the nodes.
  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
    return s;
  }

 private:
  DomainKind kind_;
  int dim_;
  std::vector<Point> nodes_;
  std::vector<double> weights_;
  double measure_;
};

/// n uniformly spaced nodes on [a,b] with composite trapezoid weights.
Domain build_interval(double a, double b, int n);

struct Rectangle {
  double x0, x1, y0, y1;
};

/// Tensor-product trapezoid grid; nodes ordered lexicographically with x
/// varying fastest.
Domain build_grid2d(const Rectangle& extents, int nx, int ny);

/// Reads an OFF triangle mesh and lumps one third of each triangle's area
/// onto each of its vertices.
Domain load_mesh(const std::filesystem::path& path);

double euclidean_distance(const Point& a, const Point& b);

}  // namespace nfuq
