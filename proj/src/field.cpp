#include "hedac/field.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "hedac/errors.hpp"

namespace hedac {

GridSpec::GridSpec(double width_m, double height_m, int nx, int ny)
    : width_(width_m), height_(height_m), nx_(nx), ny_(ny) {
  if (nx < 2 || ny < 2) throw ShapeError("grid needs at least 2 cells per axis");
  if (!(width_m > 0.0) || !(height_m > 0.0) || !std::isfinite(width_m) || !std::isfinite(height_m)) {
    throw ShapeError("grid extent must be positive and finite");
  }
}

NodeRect nodes_near(const GridSpec& grid, Vec2 center, double radius) {
  NodeRect r;
  r.i0 = std::max(0, static_cast<int>(std::ceil((center.x - radius) / grid.dx() - 0.5)));
  r.i1 = std::min(grid.nx() - 1, static_cast<int>(std::floor((center.x + radius) / grid.dx() - 0.5)));
  r.j0 = std::max(0, static_cast<int>(std::ceil((center.y - radius) / grid.dy() - 0.5)));
  r.j1 = std::min(grid.ny() - 1, static_cast<int>(std::floor((center.y + radius) / grid.dy() - 0.5)));
  return r;
}

ScalarField::ScalarField(const GridSpec& spec, double fill) : spec_(spec), values_(spec.size(), fill) {}

ScalarField::ScalarField(const GridSpec& spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.size()) throw ShapeError("value count does not match grid");
}

double ScalarField::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double integrate(const ScalarField& field) {
  double sum = 0.0;
  for (double v : field.values()) {
    if (!std::isfinite(v)) throw NumericDomainError("non-finite value in integrand");
    sum += v;
  }
  return sum * field.spec().cell_area();
}

namespace {

struct Stencil {
  int i0, j0;
  double tx, ty;
};

Stencil locate(const GridSpec& g, Vec2 p) {
  if (!(p.x >= 0.0 && p.x <= g.width() && p.y >= 0.0 && p.y <= g.height())) {
    throw OutOfDomainError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                           ") outside domain");
  }
  const double fx = std::clamp(p.x / g.dx() - 0.5, 0.0, g.nx() - 1.0);
  const double fy = std::clamp(p.y / g.dy() - 0.5, 0.0, g.ny() - 1.0);
  const int i0 = std::min(static_cast<int>(fx), g.nx() - 2);
  const int j0 = std::min(static_cast<int>(fy), g.ny() - 2);
  return {i0, j0, fx - i0, fy - j0};
}

}  // namespace

double interpolate(const ScalarField& field, Vec2 p) {
  const Stencil s = locate(field.spec(), p);
  const double f00 = field(s.i0, s.j0);
  const double f10 = field(s.i0 + 1, s.j0);
  const double f01 = field(s.i0, s.j0 + 1);
  const double f11 = field(s.i0 + 1, s.j0 + 1);
  return (1 - s.ty) * ((1 - s.tx) * f00 + s.tx * f10) + s.ty * ((1 - s.tx) * f01 + s.tx * f11);
}

Vec2 gradient_at_node(const ScalarField& f, int i, int j) {
  const GridSpec& g = f.spec();
  double gx, gy;
  if (i == 0) {
    gx = (f(1, j) - f(0, j)) / g.dx();
  } else if (i == g.nx() - 1) {
    gx = (f(i, j) - f(i - 1, j)) / g.dx();
  } else {
    gx = (f(i + 1, j) - f(i - 1, j)) / (2.0 * g.dx());
  }
  if (j == 0) {
    gy = (f(i, 1) - f(i, 0)) / g.dy();
  } else if (j == g.ny() - 1) {
    gy = (f(i, j) - f(i, j - 1)) / g.dy();
  } else {
    gy = (f(i, j + 1) - f(i, j - 1)) / (2.0 * g.dy());
  }
  return {gx, gy};
}

std::pair<ScalarField, ScalarField> gradient(const ScalarField& field) {
  const GridSpec& g = field.spec();
  ScalarField gx(g), gy(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const Vec2 d = gradient_at_node(field, i, j);
      gx(i, j) = d.x;
      gy(i, j) = d.y;
    }
  }
  return {std::move(gx), std::move(gy)};
}

Vec2 interpolate_gradient(const ScalarField& field, Vec2 p) {
  const Stencil s = locate(field.spec(), p);
  const Vec2 g00 = gradient_at_node(field, s.i0, s.j0);
  const Vec2 g10 = gradient_at_node(field, s.i0 + 1, s.j0);
  const Vec2 g01 = gradient_at_node(field, s.i0, s.j0 + 1);
  const Vec2 g11 = gradient_at_node(field, s.i0 + 1, s.j0 + 1);
  return (1 - s.ty) * ((1 - s.tx) * g00 + s.tx * g10) + s.ty * ((1 - s.tx) * g01 + s.tx * g11);
}

ScalarField scale_to_unit_mass(const ScalarField& field) {
  for (double v : field.values()) {
    if (!std::isfinite(v)) throw NumericDomainError("non-finite prior value");
    if (v < 0.0) throw DegeneratePriorError("prior has negative values");
  }
  const double mass = integrate(field);
  if (!(mass > 0.0)) throw DegeneratePriorError("prior has zero total mass");
  ScalarField out = field;
  for (double& v : out.values()) v /= mass;
  return out;
}

void write_snapshot(std::ostream& out, const ScalarField& field) {
  const GridSpec& g = field.spec();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g\n", g.nx(), g.ny(), g.dx(), g.dy());
  out << buf;
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      std::snprintf(buf, sizeof buf, i == 0 ? "%.17g" : " %.17g", field(i, j));
      out << buf;
    }
    out << '\n';
  }
}

ScalarField read_snapshot(std::istream& in) {
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;
  if (!(in >> nx >> ny >> dx >> dy)) throw ShapeError("bad snapshot header");
  GridSpec spec(nx * dx, ny * dy, nx, ny);
  std::vector<double> values(spec.size());
  for (double& v : values) {
    if (!(in >> v)) throw ShapeError("snapshot truncated");
  }
  return ScalarField(spec, std::move(values));
}

}  // namespace hedac
