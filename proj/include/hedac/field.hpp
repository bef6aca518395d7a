#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

namespace hedac {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;

  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Axis-aligned search domain [0, width] x [0, height] in meters.
struct Domain {
  double width = 0.0;
  double height = 0.0;

  bool contains(Vec2 p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }

  friend bool operator==(const Domain&, const Domain&) = default;
};

/// Uniform rectangular grid. Samples sit at cell centers: node (i, j) is at
/// ((i + 0.5) dx, (j + 0.5) dy).
class GridSpec {
 public:
  GridSpec() = default;
  GridSpec(double width_m, double height_m, int nx, int ny);

  double width() const { return width_; }
  double height() const { return height_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double dx() const { return width_ / nx_; }
  double dy() const { return height_ / ny_; }
  double cell_area() const { return dx() * dy(); }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_); }
  Domain domain() const { return {width_, height_}; }

  double node_x(int i) const { return (i + 0.5) * dx(); }
  double node_y(int j) const { return (j + 0.5) * dy(); }
  Vec2 node(int i, int j) const { return {node_x(i), node_y(j)}; }

  /// Row-major, y varies slowest.
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  double width_ = 0.0;
  double height_ = 0.0;
  int nx_ = 0;
  int ny_ = 0;
};

/// Inclusive node-index rectangle.
struct NodeRect {
  int i0 = 0, i1 = -1, j0 = 0, j1 = -1;
  bool empty() const { return i1 < i0 || j1 < j0; }
};

/// Nodes whose centers may lie within `radius` of `center`, clipped to the grid.
NodeRect nodes_near(const GridSpec& grid, Vec2 center, double radius);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& spec, double fill = 0.0);
  ScalarField(const GridSpec& spec, std::vector<double> values);

  const GridSpec& spec() const { return spec_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double& operator()(int i, int j) { return values_[spec_.index(i, j)]; }
  double operator()(int i, int j) const { return values_[spec_.index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  double max_value() const;
  double min_value() const;
  double max_abs() const;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

/// Midpoint quadrature: sum of values times cell area.
double integrate(const ScalarField& field);

/// Bilinear interpolation; `p` is clamped to the hull of node centers first.
double interpolate(const ScalarField& field, Vec2 p);

/// Central differences in the interior, one-sided at boundary nodes.
std::pair<ScalarField, ScalarField> gradient(const ScalarField& field);

/// Gradient at one node using the same stencil as `gradient`.
Vec2 gradient_at_node(const ScalarField& field, int i, int j);

/// Bilinear interpolation of the node gradients at `p` (clamped like `interpolate`).
Vec2 interpolate_gradient(const ScalarField& field, Vec2 p);

ScalarField scale_to_unit_mass(const ScalarField& field);

/// Field snapshot text format: "nx ny dx dy" then nx*ny values, row-major.
void write_snapshot(std::ostream& out, const ScalarField& field);
ScalarField read_snapshot(std::istream& in);

}  // namespace hedac
