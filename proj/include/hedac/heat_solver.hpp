#pragma once

#include <cstdint>
#include <vector>

#include "hedac/field.hpp"

namespace hedac {

enum class Preconditioner {
  spectral,  ///< exact inverse via 2-D cosine transforms
  jacobi,    ///< inverse diagonal
};

/// Parameters of the stationary heat equation alpha * lap(u) = beta * u - m
/// with zero normal derivative on the boundary.
struct HedacParams {
  double alpha = 0.03;
  double beta = 4.0;
  /// Length unit [m] in which the Laplacian is taken. alpha and beta are
  /// given for coordinates measured in kilometers by default.
  double length_scale = 1000.0;
  double solver_tol = 1e-6;
  /// Iteration cap; 0 selects 10 * (nx + ny).
  int max_iters = 0;
  Preconditioner preconditioner = Preconditioner::spectral;

  void validate() const;
  friend bool operator==(const HedacParams&, const HedacParams&) = default;
};

struct PotentialField {
  ScalarField field;
  double residual = 0.0;  ///< achieved ||m - A u|| / ||m||
  int iters = 0;
};

/// Apply the discrete operator (beta I - alpha lap_h) to `u` (5-point stencil,
/// mirrored ghost nodes).
void apply_heat_operator(const GridSpec& grid, const HedacParams& params, const std::vector<double>& u,
                         std::vector<double>& out);

/// Solve (beta I - alpha lap_h) u = m by preconditioned conjugate gradients,
/// optionally starting from a previous solution. Throws SolverError when the
/// tolerance is not met within the iteration cap.
PotentialField solve_potential(const ScalarField& m, const HedacParams& params,
                               const PotentialField* warm_start = nullptr);

/// Per-node unit gradient directions; nodes with |grad u| <= 1e-12 max|u|
/// are flagged degenerate and carry a zero vector.
struct DirectionField {
  ScalarField x;
  ScalarField y;
  std::vector<std::uint8_t> degenerate;
};

DirectionField direction_field(const PotentialField& u);

/// Threshold below which a gradient of `u` counts as zero.
inline double degenerate_gradient_threshold(const ScalarField& u) { return 1e-12 * u.max_abs(); }

}  // namespace hedac
