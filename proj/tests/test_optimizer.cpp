#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mindev/optimizer.hpp"

using namespace mindev;

namespace {

// Concave piecewise-linear objective min_j <rows[j], tau>, supergradient the
// active row: the exact shape of the solver's production objectives.
SimplexOracle min_linear_oracle(int dim, std::vector<std::vector<double>> rows) {
  SimplexOracle o;
  o.dim = dim;
  o.eval = [dim, rows = std::move(rows)](const double* tau, double* grad) {
    double best = HUGE_VAL;
    const std::vector<double>* active = nullptr;
    for (const auto& row : rows) {
      double v = 0;
      for (int i = 0; i < dim; ++i) v += row[i] * tau[i];
      if (v < best) {
        best = v;
        active = &row;
      }
    }
    if (grad)
      for (int i = 0; i < dim; ++i) grad[i] = (*active)[i];
    return best;
  };
  return o;
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

}  // namespace

TEST_CASE("simplex projection on hand-checked points") {
  std::vector<double> v{0.5, 0.5, -1.0};
  project_to_simplex(v);
  CHECK(v[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v[2] == doctest::Approx(0.0).epsilon(1e-12));

  v = {0.2, 0.3, 0.5};  // already feasible: fixed point
  project_to_simplex(v);
  CHECK(v[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(v[2] == doctest::Approx(0.5).epsilon(1e-12));

  v = {-5.0, -5.0};
  project_to_simplex(v);
  CHECK(v[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(0.5).epsilon(1e-12));

  v = {42.0};
  project_to_simplex(v);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-12));

  v = {2.0, 1.0};  // shift by (sum-1)/2 = 1: (1, 0)
  project_to_simplex(v);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("projection minimizes distance over a simplex lattice") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const int res = 60;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> point{u(rng), u(rng), u(rng)};
    std::vector<double> proj = point;
    project_to_simplex(proj);
    double sum = 0;
    for (double x : proj) {
      CHECK(x >= -1e-12);
      sum += x;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    double best = dist2(point, proj);
    for (int a = 0; a <= res; ++a)
      for (int b = 0; a + b <= res; ++b) {
        std::vector<double> lat{(double)a / res, (double)b / res, (double)(res - a - b) / res};
        CHECK(best <= dist2(point, lat) + 1e-9);
      }
  }
}

TEST_CASE("constant oracle certifies immediately") {
  SimplexOracle o;
  o.dim = 3;
  o.eval = [](const double*, double* grad) {
    if (grad) grad[0] = grad[1] = grad[2] = 0.25;
    return 0.25;
  };
  SolveReport rep = maximize_on_simplex(o);
  CHECK(rep.converged);
  CHECK(rep.phi == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(rep.gap == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rep.iters == 3);  // the vertex pre-scan already certifies
}

TEST_CASE("one-dimensional problems cost a single evaluation") {
  SimplexOracle o;
  o.dim = 1;
  o.eval = [](const double*, double* grad) {
    if (grad) grad[0] = 0.3;
    return 0.3;
  };
  SolveReport rep = maximize_on_simplex(o);
  CHECK(rep.converged);
  CHECK(rep.iters == 1);
  CHECK(rep.gap == 0.0);
  CHECK(rep.tau == std::vector<double>{1.0});
}

TEST_CASE("linear objectives are solved by the vertex scan") {
  SimplexOracle o;
  o.dim = 4;
  o.eval = [](const double* tau, double* grad) {
    const double c[4] = {0.1, 0.7, 0.3, 0.2};
    if (grad)
      for (int i = 0; i < 4; ++i) grad[i] = c[i];
    double v = 0;
    for (int i = 0; i < 4; ++i) v += c[i] * tau[i];
    return v;
  };
  SolveReport rep = maximize_on_simplex(o);
  CHECK(rep.converged);
  CHECK(rep.phi == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(rep.upper == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(rep.tau[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.iters == 4);
}

TEST_CASE("two-line toy problem reaches the known saddle value") {
  // min(<(0.8,0.2),tau>, <(0.2,0.8),tau>) peaks at tau = (1/2,1/2), value 1/2
  SimplexOracle o = min_linear_oracle(2, {{0.8, 0.2}, {0.2, 0.8}});
  SolveReport rep = maximize_on_simplex(o);
  CHECK(rep.converged);
  CHECK(rep.phi == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep.upper == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep.tau[0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("certificate mixture reproduces the reported upper bound") {
  SimplexOracle o = min_linear_oracle(3, {{0.9, 0.1, 0.3}, {0.2, 0.8, 0.4}, {0.3, 0.3, 0.5}});
  SolveConfig cfg;
  cfg.tol = 1e-9;
  cfg.max_iters = 20000;
  SolveReport rep = maximize_on_simplex(o, cfg);
  CHECK(rep.converged);
  REQUIRE(!rep.mix_taus.empty());
  REQUIRE(rep.mix_taus.size() == rep.mix_weights.size());
  double wsum = 0;
  for (double w : rep.mix_weights) {
    CHECK(w >= 0);
    wsum += w;
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));

  // re-evaluate every mixture point: the weighted supergradients must average
  // to mix_curve, whose maximum is the reported upper bound
  std::vector<double> avg(3, 0.0);
  std::vector<double> g(3);
  for (size_t j = 0; j < rep.mix_taus.size(); ++j) {
    o.eval(rep.mix_taus[j].data(), g.data());
    for (int i = 0; i < 3; ++i) avg[i] += rep.mix_weights[j] * g[i];
  }
  REQUIRE(rep.mix_curve.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(avg[i] == doctest::Approx(rep.mix_curve[i]).epsilon(1e-9));
  CHECK(*std::max_element(rep.mix_curve.begin(), rep.mix_curve.end()) ==
        doctest::Approx(rep.upper).epsilon(1e-12));
  CHECK(rep.phi <= rep.upper + 1e-15);
}

TEST_CASE("solver matches the brute-force grid on random problems") {
  std::mt19937_64 rng(501);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 12; ++rep) {
    int rows = 2 + (int)(rng() % 4);
    std::vector<std::vector<double>> mat(rows, std::vector<double>(3));
    for (auto& row : mat)
      for (double& v : row) v = u(rng);
    SimplexOracle o = min_linear_oracle(3, mat);

    SolveConfig cfg;
    cfg.tol = 1e-8;
    cfg.max_iters = 50000;
    SolveReport sol = maximize_on_simplex(o, cfg);
    GridSearchResult grid = grid_oracle(o, 800);

    CHECK(sol.converged);
    CHECK(sol.gap <= cfg.tol);
    CHECK(grid.value <= sol.upper + 1e-12);      // upper bound is global
    CHECK(sol.phi >= grid.value - 2e-3);         // lattice resolution slack
    CHECK(sol.phi <= grid.value + 2e-3);
  }
}

TEST_CASE("sqrt-decay stepping also converges") {
  SimplexOracle o = min_linear_oracle(2, {{0.8, 0.2}, {0.2, 0.8}});
  SolveConfig cfg;
  cfg.step = SolveConfig::Step::sqrt_decay;
  cfg.tol = 1e-4;
  cfg.max_iters = 20000;
  SolveReport rep = maximize_on_simplex(o, cfg);
  CHECK(rep.converged);
  CHECK(rep.phi == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("disabling the vertex scan still guarantees one evaluation") {
  int evals = 0;
  SimplexOracle o;
  o.dim = 2;
  o.eval = [&evals](const double* tau, double* grad) {
    ++evals;
    if (grad) {
      grad[0] = 0.4;
      grad[1] = 0.4;
    }
    return 0.4 * (tau[0] + tau[1]);
  };
  SolveConfig cfg;
  cfg.vertex_scan = false;
  cfg.max_iters = 0;
  SolveReport rep = maximize_on_simplex(o, cfg);
  CHECK(evals == 1);
  CHECK(rep.iters == 1);
  CHECK(rep.converged);
  CHECK(rep.phi == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(rep.tau[0] == doctest::Approx(0.5).epsilon(1e-12));  // the uniform start
}

TEST_CASE("solver input validation") {
  SimplexOracle o;
  o.dim = 0;
  o.eval = [](const double*, double*) { return 0.0; };
  CHECK_THROWS_AS(maximize_on_simplex(o), std::invalid_argument);
  o.dim = 2;
  o.eval = nullptr;
  CHECK_THROWS_AS(maximize_on_simplex(o), std::invalid_argument);
  o.eval = [](const double*, double*) { return 0.0; };
  SolveConfig cfg;
  cfg.tol = -1.0;
  CHECK_THROWS_AS(maximize_on_simplex(o, cfg), std::invalid_argument);

  SimplexOracle nan_oracle;
  nan_oracle.dim = 2;
  nan_oracle.eval = [](const double*, double* grad) {
    if (grad) grad[0] = grad[1] = 0;
    return std::nan("");
  };
  CHECK_THROWS_AS(maximize_on_simplex(nan_oracle), std::runtime_error);
}

TEST_CASE("grid oracle guards and exact small case") {
  SimplexOracle o = min_linear_oracle(2, {{2.0, 0.0}, {0.0, 3.0}});
  // on the lattice k/10: value min(2k/10, 3(10-k)/10) peaks at k = 6: 1.2
  GridSearchResult g = grid_oracle(o, 10);
  CHECK(g.value == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(g.tau[0] == doctest::Approx(0.6).epsilon(1e-12));

  CHECK_THROWS_AS(grid_oracle(o, 0), std::invalid_argument);
  CHECK_THROWS_AS(grid_oracle(o, 10, 5), std::invalid_argument);
  SimplexOracle big;
  big.dim = 5;
  big.eval = [](const double*, double*) { return 0.0; };
  CHECK_THROWS_AS(grid_oracle(big, 10), std::invalid_argument);
}

TEST_CASE("plain ascent without the polish still certifies loose tolerances") {
  SimplexOracle o = min_linear_oracle(2, {{0.8, 0.2}, {0.2, 0.8}});
  SolveConfig cfg;
  cfg.refine = false;
  SolveReport rep = maximize_on_simplex(o, cfg);
  CHECK(rep.converged);
  CHECK(rep.phi == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(rep.upper - rep.phi <= cfg.tol);
}

TEST_CASE("solver is deterministic") {
  SimplexOracle o = min_linear_oracle(3, {{0.9, 0.1, 0.3}, {0.2, 0.8, 0.4}});
  SolveReport a = maximize_on_simplex(o);
  SolveReport b = maximize_on_simplex(o);
  CHECK(a.phi == b.phi);
  CHECK(a.upper == b.upper);
  CHECK(a.iters == b.iters);
  CHECK(a.tau == b.tau);
}
