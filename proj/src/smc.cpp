#include <cmath>
#include <numbers>

#include "hedac/controllers.hpp"
#include "hedac/errors.hpp"

namespace hedac {

void SmcParams::validate() const {
  if (k_modes < 1) throw ConfigError("must be >= 1", "smc.k_modes");
  if (!(exponent > 0.0)) throw ConfigError("must be positive", "smc.exponent");
  if (!(log_floor > 0.0 && log_floor < 1.0)) throw ConfigError("must be in (0, 1)", "smc.log_floor");
}

double smc_weight(int k1, int k2, double exponent) {
  return std::pow(1.0 + static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2, -exponent);
}

CosineBasis::CosineBasis(const GridSpec& grid, int k_modes) : grid_(grid), k_(k_modes) {
  const double pi = std::numbers::pi;
  cos_x_.resize(static_cast<std::size_t>(k_) * grid.nx());
  cos_y_.resize(static_cast<std::size_t>(k_) * grid.ny());
  for (int k = 0; k < k_; ++k) {
    for (int i = 0; i < grid.nx(); ++i) cos_x_[k * grid.nx() + i] = std::cos(k * pi * grid.node_x(i) / grid.width());
    for (int j = 0; j < grid.ny(); ++j) cos_y_[k * grid.ny() + j] = std::cos(k * pi * grid.node_y(j) / grid.height());
  }
  h_.resize(static_cast<std::size_t>(k_) * k_);
  for (int k2 = 0; k2 < k_; ++k2) {
    for (int k1 = 0; k1 < k_; ++k1) {
      const double ex = k1 == 0 ? 1.0 : 2.0;
      const double ey = k2 == 0 ? 1.0 : 2.0;
      h_[k2 * k_ + k1] = std::sqrt(grid.width() * grid.height() / (ex * ey));
    }
  }
}

std::vector<double> CosineBasis::coefficients(const ScalarField& field) const {
  if (!(field.spec() == grid_)) throw ShapeError("field grid differs from basis grid");
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  // separable transform: rows first, then columns
  std::vector<double> partial(static_cast<std::size_t>(k_) * ny, 0.0);  // [k1 * ny + j]
  for (int j = 0; j < ny; ++j) {
    const double* row = &field.values()[static_cast<std::size_t>(j) * nx];
    for (int k1 = 0; k1 < k_; ++k1) {
      const double* c = &cos_x_[static_cast<std::size_t>(k1) * nx];
      double s = 0.0;
      for (int i = 0; i < nx; ++i) s += row[i] * c[i];
      partial[static_cast<std::size_t>(k1) * ny + j] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(k_) * k_);
  const double area = grid_.cell_area();
  for (int k2 = 0; k2 < k_; ++k2) {
    const double* c = &cos_y_[static_cast<std::size_t>(k2) * ny];
    for (int k1 = 0; k1 < k_; ++k1) {
      const double* p = &partial[static_cast<std::size_t>(k1) * ny];
      double s = 0.0;
      for (int j = 0; j < ny; ++j) s += p[j] * c[j];
      out[static_cast<std::size_t>(k2) * k_ + k1] = s * area / norm_factor(k1, k2);
    }
  }
  return out;
}

namespace {

ScalarField goal_density(const ScalarField& prior, const SmcParams& params) {
  if (!params.use_log_prior) return scale_to_unit_mass(prior);
  ScalarField goal(prior.spec());
  const double floor = params.log_floor * prior.max_value();
  for (std::size_t k = 0; k < goal.values().size(); ++k) {
    goal[k] = prior[k] > floor ? std::log(prior[k] / floor) : 0.0;
  }
  return scale_to_unit_mass(goal);
}

}  // namespace

SmcModel::SmcModel(const ScalarField& prior, const SmcParams& params)
    : params_(params), basis_(prior.spec(), params.k_modes), goal_density_(goal_density(prior, params)) {
  params.validate();
  const int k = params.k_modes;
  weights_.resize(static_cast<std::size_t>(k) * k);
  for (int k2 = 0; k2 < k; ++k2) {
    for (int k1 = 0; k1 < k; ++k1) weights_[k2 * k + k1] = smc_weight(k1, k2, params.exponent);
  }
  goal_ = basis_.coefficients(goal_density_);
}

std::vector<Heading> smc_directions(std::span<const AgentState> agents, const OccurrenceField&,
                                    const CoverageField& coverage, const SmcModel& model) {
  const CosineBasis& basis = model.basis();
  const GridSpec& g = basis.grid();
  const int k = basis.modes();
  const double mass = integrate(coverage.field);

  std::vector<double> error = model.goal_coefficients();
  for (double& e : error) e = -e;
  if (mass > 0.0) {
    const std::vector<double> cov = basis.coefficients(coverage.field);
    for (std::size_t n = 0; n < error.size(); ++n) error[n] += cov[n] / mass;
  }

  // gradient magnitudes below this are rounding noise
  const double pi = std::numbers::pi;
  double scale = 0.0;
  for (int k2 = 0; k2 < k; ++k2) {
    for (int k1 = 0; k1 < k; ++k1) {
      const std::size_t n = static_cast<std::size_t>(k2) * k + k1;
      const double freq = pi * (k1 / g.width() + k2 / g.height()) + 1.0 / std::max(g.width(), g.height());
      scale += model.weights()[n] * (std::abs(error[n]) + std::abs(model.goal_coefficients()[n])) * freq /
               basis.norm_factor(k1, k2);
    }
  }
  const double eps = 1e-12 * scale;

  std::vector<double> cx(k), sx(k), cy(k), sy(k);
  std::vector<Heading> out;
  out.reserve(agents.size());
  for (const AgentState& a : agents) {
    for (int m = 0; m < k; ++m) {
      const double ax = m * pi / g.width();
      const double ay = m * pi / g.height();
      cx[m] = std::cos(ax * a.z.x);
      sx[m] = std::sin(ax * a.z.x) * ax;
      cy[m] = std::cos(ay * a.z.y);
      sy[m] = std::sin(ay * a.z.y) * ay;
    }
    Vec2 grad{};
    for (int k2 = 0; k2 < k; ++k2) {
      for (int k1 = 0; k1 < k; ++k1) {
        const std::size_t n = static_cast<std::size_t>(k2) * k + k1;
        const double w = model.weights()[n] * error[n] / basis.norm_factor(k1, k2);
        grad.x -= w * sx[k1] * cy[k2];
        grad.y -= w * cx[k1] * sy[k2];
      }
    }
    const double len = norm(grad);
    if (len <= eps || !std::isfinite(len)) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(Vec2{-grad.x / len, -grad.y / len});
    }
  }
  return out;
}

}  // namespace hedac
