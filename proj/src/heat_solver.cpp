#include "hedac/heat_solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "hedac/errors.hpp"

namespace hedac {

void HedacParams::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("must be positive", "hedac.alpha");
  if (!(beta > 0.0)) throw ConfigError("must be positive", "hedac.beta");
  if (!(length_scale > 0.0)) throw ConfigError("must be positive", "hedac.length_scale");
  if (!(solver_tol > 0.0 && solver_tol < 1.0)) throw ConfigError("must be in (0, 1)", "hedac.tol");
  if (max_iters < 0) throw ConfigError("must be >= 0", "hedac.max_iters");
}

namespace {

struct Coefficients {
  double ax;  // alpha / hx^2
  double ay;  // alpha / hy^2
  double beta;
};

Coefficients coefficients(const GridSpec& g, const HedacParams& p) {
  const double hx = g.dx() / p.length_scale;
  const double hy = g.dy() / p.length_scale;
  return {p.alpha / (hx * hx), p.alpha / (hy * hy), p.beta};
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void apply(const GridSpec& g, const Coefficients& c, const std::vector<double>& u, std::vector<double>& out) {
  const int nx = g.nx();
  const int ny = g.ny();
  for (int j = 0; j < ny; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * nx;
    const double* up = j > 0 ? &u[row - nx] : &u[row];
    const double* dn = j < ny - 1 ? &u[row + nx] : &u[row];
    const double* cu = &u[row];
    double* o = &out[row];
    // mirrored ghosts make the missing neighbor equal to the node itself
    for (int i = 0; i < nx; ++i) {
      const double center = cu[i];
      const double left = i > 0 ? cu[i - 1] : center;
      const double right = i < nx - 1 ? cu[i + 1] : center;
      const double lap = c.ax * (left + right - 2.0 * center) + c.ay * (up[i] + dn[i] - 2.0 * center);
      o[i] = c.beta * center - lap;
    }
  }
}

std::vector<double> diagonal(const GridSpec& g, const Coefficients& c) {
  std::vector<double> d(g.size());
  for (int j = 0; j < g.ny(); ++j) {
    const int ny_links = (j > 0) + (j < g.ny() - 1);
    for (int i = 0; i < g.nx(); ++i) {
      const int nx_links = (i > 0) + (i < g.nx() - 1);
      d[g.index(i, j)] = c.beta + c.ax * nx_links + c.ay * ny_links;
    }
  }
  return d;
}

// The operator is diagonal in the cosine basis cos(pi k (i + 1/2) / n), which
// matches the mirrored ghost nodes exactly, so this preconditioner is the
// exact inverse up to rounding.
class SpectralInverse {
 public:
  SpectralInverse(const GridSpec& g, const Coefficients& c) : nx_(g.nx()), ny_(g.ny()), coef_(c) {
    const std::size_t n = g.size();
    buf_ = static_cast<double*>(fftw_malloc(n * sizeof(double)));
    {
      std::lock_guard lock(planner_mutex());
      forward_ = fftw_plan_r2r_2d(ny_, nx_, buf_, buf_, FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
      backward_ = fftw_plan_r2r_2d(ny_, nx_, buf_, buf_, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
    }
    scale_.resize(n);
    const double norm = 4.0 * nx_ * ny_;
    for (int ky = 0; ky < ny_; ++ky) {
      const double ly = 2.0 - 2.0 * std::cos(std::numbers::pi * ky / ny_);
      for (int kx = 0; kx < nx_; ++kx) {
        const double lx = 2.0 - 2.0 * std::cos(std::numbers::pi * kx / nx_);
        scale_[static_cast<std::size_t>(ky) * nx_ + kx] = 1.0 / (norm * (c.beta + c.ax * lx + c.ay * ly));
      }
    }
  }

  SpectralInverse(const SpectralInverse&) = delete;
  SpectralInverse& operator=(const SpectralInverse&) = delete;

  ~SpectralInverse() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buf_);
  }

  bool matches(const GridSpec& g, const Coefficients& c) const {
    return g.nx() == nx_ && g.ny() == ny_ && c.ax == coef_.ax && c.ay == coef_.ay && c.beta == coef_.beta;
  }

  void apply(const std::vector<double>& r, std::vector<double>& z) {
    const std::size_t n = scale_.size();
    std::copy(r.begin(), r.end(), buf_);
    fftw_execute(forward_);
    for (std::size_t k = 0; k < n; ++k) buf_[k] *= scale_[k];
    fftw_execute(backward_);
    std::copy(buf_, buf_ + n, z.begin());
  }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  int nx_;
  int ny_;
  Coefficients coef_;
  double* buf_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
  std::vector<double> scale_;
};

SpectralInverse& spectral_inverse(const GridSpec& g, const Coefficients& c) {
  thread_local std::unique_ptr<SpectralInverse> cached;
  if (!cached || !cached->matches(g, c)) {
    cached.reset();
    cached = std::make_unique<SpectralInverse>(g, c);
  }
  return *cached;
}

}  // namespace

void apply_heat_operator(const GridSpec& grid, const HedacParams& params, const std::vector<double>& u,
                         std::vector<double>& out) {
  out.resize(grid.size());
  apply(grid, coefficients(grid, params), u, out);
}

PotentialField solve_potential(const ScalarField& m, const HedacParams& params, const PotentialField* warm_start) {
  params.validate();
  const GridSpec& g = m.spec();
  const std::size_t n = g.size();
  const Coefficients coef = coefficients(g, params);
  const int max_iters = params.max_iters > 0 ? params.max_iters : 10 * (g.nx() + g.ny());

  for (double v : m.values()) {
    if (!std::isfinite(v)) throw NumericDomainError("non-finite heat source");
  }

  PotentialField result;
  const double b_norm = std::sqrt(dot(m.values(), m.values()));
  if (b_norm == 0.0) {
    result.field = ScalarField(g, 0.0);
    return result;
  }

  std::vector<double> x(n, 0.0);
  std::vector<double> r(n), z(n), p(n), ap(n);
  if (warm_start != nullptr && warm_start->field.spec() == g) x = warm_start->field.values();

  std::vector<double> inv_diag;
  SpectralInverse* spectral = nullptr;
  if (params.preconditioner == Preconditioner::spectral) {
    spectral = &spectral_inverse(g, coef);
  } else {
    inv_diag = diagonal(g, coef);
    for (double& v : inv_diag) v = 1.0 / v;
  }
  auto precondition = [&] {
    if (spectral != nullptr) {
      spectral->apply(r, z);
    } else {
      for (std::size_t k = 0; k < n; ++k) z[k] = inv_diag[k] * r[k];
    }
  };
  const std::vector<double>& b = m.values();

  // r = b - A x, then remove the residual's mean through a constant shift of
  // x. The shift is an exact correction along the constant eigenvector
  // (eigenvalue beta), so it never increases ||r|| and makes
  // beta * sum(x) == sum(b) up to rounding.
  auto true_residual = [&] {
    apply(g, coef, x, ap);
    double mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      r[k] = b[k] - ap[k];
      mean += r[k];
    }
    mean /= static_cast<double>(n);
    const double shift = mean / coef.beta;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += shift;
      r[k] -= mean;
    }
    return std::sqrt(dot(r, r)) / b_norm;
  };

  int iters = 0;
  double rel = true_residual();
  while (rel > params.solver_tol && iters < max_iters) {
    precondition();
    p = z;
    double rz = dot(r, z);
    while (iters < max_iters) {
      apply(g, coef, p, ap);
      const double step = rz / dot(p, ap);
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += step * p[k];
        r[k] -= step * ap[k];
      }
      ++iters;
      if (std::sqrt(dot(r, r)) / b_norm <= params.solver_tol) break;
      precondition();
      const double rz_next = dot(r, z);
      const double ratio = rz_next / rz;
      rz = rz_next;
      for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + ratio * p[k];
    }
    // the recurrence drifts from the true residual; recheck and restart if needed
    rel = true_residual();
  }

  if (rel > params.solver_tol) {
    throw SolverError("potential solve did not converge: residual " + std::to_string(rel) + " after " +
                          std::to_string(iters) + " iterations",
                      rel, iters);
  }
  result.field = ScalarField(g, std::move(x));
  result.residual = rel;
  result.iters = iters;
  return result;
}

DirectionField direction_field(const PotentialField& u) {
  const GridSpec& g = u.field.spec();
  DirectionField out{ScalarField(g), ScalarField(g), std::vector<std::uint8_t>(g.size(), 0)};
  const double eps = degenerate_gradient_threshold(u.field);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const Vec2 d = gradient_at_node(u.field, i, j);
      const double len = norm(d);
      const std::size_t k = g.index(i, j);
      if (len <= eps) {
        out.degenerate[k] = 1;
        continue;
      }
      out.x[k] = d.x / len;
      out.y[k] = d.y / len;
    }
  }
  return out;
}

}  // namespace hedac
