#include <doctest.h>

#include <Eigen/Dense>

#include "hedac/errors.hpp"
#include "hedac/heat_solver.hpp"
#include "hedac/rng.hpp"

using namespace hedac;

namespace {

// (beta I - alpha lap_h) assembled entry by entry; boundary nodes simply lose
// the link to the missing neighbour.
Eigen::MatrixXd dense(const GridSpec& g, const HedacParams& p) {
  const int nx = g.nx(), ny = g.ny();
  const double ax = p.alpha * p.length_scale * p.length_scale / (g.dx() * g.dx());
  const double ay = p.alpha * p.length_scale * p.length_scale / (g.dy() * g.dy());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(nx * ny, nx * ny) * p.beta;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int k = j * nx + i;
      const int nbr[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (int e = 0; e < 4; ++e) {
        const int ii = nbr[e][0], jj = nbr[e][1];
        if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
        const double a = e < 2 ? ax : ay;
        A(k, k) += a;
        A(k, jj * nx + ii) -= a;
      }
    }
  }
  return A;
}

ScalarField random_source(const GridSpec& g, Rng& rng) {
  ScalarField m(g);
  for (std::size_t k = 0; k < g.size(); ++k) m[k] = rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 3.0);
  return m;
}

double rel_diff(const ScalarField& a, const ScalarField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    num += (a[k] - b[k]) * (a[k] - b[k]);
    den += b[k] * b[k];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_SUITE("heat-solver") {

TEST_CASE("zero and uniform sources") {
  const GridSpec g(100, 100, 20, 20);
  HedacParams p;
  const PotentialField zero = solve_potential(ScalarField(g), p);
  CHECK(zero.field.max_abs() == 0.0);

  const PotentialField flat = solve_potential(ScalarField(g, 2.0), p);
  for (double v : flat.field.values()) CHECK(std::abs(v - 0.5) <= p.solver_tol * 0.5);
}

TEST_CASE("matches a dense direct solve") {
  Rng rng(21);
  for (Preconditioner pc : {Preconditioner::spectral, Preconditioner::jacobi}) {
    for (int t = 0; t < 20; ++t) {
      const GridSpec g(rng.uniform(40, 300), rng.uniform(40, 300), 16, 16);
      HedacParams p;
      p.alpha = rng.uniform(0.005, 0.05);
      p.beta = rng.uniform(1.0, 8.0);
      p.solver_tol = 1e-12;
      p.preconditioner = pc;
      const ScalarField m = random_source(g, rng);
      const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(m.values().data(), g.size());
      const Eigen::VectorXd x = dense(g, p).fullPivLu().solve(b);
      const ScalarField ref(g, std::vector<double>(x.data(), x.data() + x.size()));
      const PotentialField u = solve_potential(m, p);
      CHECK(rel_diff(u.field, ref) < 1e-8);
      CHECK(u.residual <= p.solver_tol);
    }
  }
}

TEST_CASE("operator matches the dense matrix") {
  Rng rng(22);
  const GridSpec g(70, 50, 7, 5);
  HedacParams p;
  std::vector<double> u(g.size()), out;
  for (double& v : u) v = rng.uniform(-1, 1);
  apply_heat_operator(g, p, u, out);
  const Eigen::VectorXd expect = dense(g, p) * Eigen::Map<const Eigen::VectorXd>(u.data(), u.size());
  for (std::size_t k = 0; k < u.size(); ++k) CHECK(out[k] == doctest::Approx(expect[k]).epsilon(1e-12));
}

TEST_CASE("conservation, positivity and linearity") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const GridSpec g(rng.uniform(50, 500), rng.uniform(50, 500), 4 + int(rng.uniform() * 40), 4 + int(rng.uniform() * 40));
    HedacParams p;
    p.beta = rng.uniform(0.5, 6.0);
    p.preconditioner = t % 3 == 0 ? Preconditioner::jacobi : Preconditioner::spectral;
    const ScalarField m = random_source(g, rng);
    const PotentialField u = solve_potential(m, p);
    CHECK(std::abs(p.beta * integrate(u.field) - integrate(m)) <= 1e-6 * integrate(m));
    CHECK(u.field.min_value() >= -p.solver_tol * u.field.max_value());

    const double a = rng.uniform(0.1, 10.0);
    ScalarField am = m;
    for (double& v : am.values()) v *= a;
    ScalarField au = u.field;
    for (double& v : au.values()) v *= a;
    CHECK(rel_diff(solve_potential(am, p).field, au) < 10 * p.solver_tol);
  }
}

TEST_CASE("warm start agrees with cold start") {
  Rng rng(24);
  const GridSpec g(200, 200, 40, 40);
  for (Preconditioner pc : {Preconditioner::spectral, Preconditioner::jacobi}) {
    HedacParams p;
    p.preconditioner = pc;
    const ScalarField m1 = random_source(g, rng);
    ScalarField m2 = m1;
    for (std::size_t k = 0; k < g.size(); k += 7) m2[k] *= 0.5;
    const PotentialField prev = solve_potential(m1, p);
    const PotentialField warm = solve_potential(m2, p, &prev);
    const PotentialField cold = solve_potential(m2, p);
    CHECK(rel_diff(warm.field, cold.field) < 10 * p.solver_tol);
  }
}

TEST_CASE("iteration cap raises a solver error with the residual") {
  const GridSpec g(500, 500, 60, 60);
  HedacParams p;
  p.preconditioner = Preconditioner::jacobi;
  p.max_iters = 2;
  Rng rng(25);
  try {
    solve_potential(random_source(g, rng), p);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.residual() > p.solver_tol);
    CHECK(e.iterations() == 2);
  }
}

TEST_CASE("parameter validation") {
  HedacParams p;
  p.alpha = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.solver_tol = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("direction field") {
  const GridSpec g(100, 100, 10, 10);
  PotentialField flat;
  flat.field = ScalarField(g, 3.0);
  const DirectionField d0 = direction_field(flat);
  for (auto f : d0.degenerate) CHECK(f == 1);

  PotentialField ramp;
  ramp.field = ScalarField(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) ramp.field(i, j) = g.node_x(i);
  const DirectionField d = direction_field(ramp);
  for (int j = 1; j < g.ny() - 1; ++j) {
    for (int i = 1; i < g.nx() - 1; ++i) {
      CHECK(d.x(i, j) == doctest::Approx(1.0));
      CHECK(std::abs(d.y(i, j)) < 1e-12);
    }
  }

  Rng rng(26);
  for (int t = 0; t < 100; ++t) {
    PotentialField u;
    u.field = ScalarField(g);
    for (double& v : u.field.values()) v = rng.uniform(-1, 1);
    const DirectionField r = direction_field(u);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (!r.degenerate[k]) CHECK(std::abs(std::hypot(r.x[k], r.y[k]) - 1.0) <= 1e-12);
    }
  }
}

}
