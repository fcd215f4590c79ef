#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mindev {

// Concave objective on the probability simplex, given by a first-order
// oracle.  eval returns the objective at tau; when grad is non-null it also
// writes a supergradient into grad[0..dim).  Callers may pass grad == nullptr
// for value-only queries.
struct SimplexOracle {
  int dim = 0;
  std::function<double(const double* tau, double* grad)> eval;
};

struct SolveConfig {
  int max_iters = 5000;
  double tol = 1e-3;
  enum class Step { polyak, sqrt_decay };
  Step step = Step::polyak;
  double step_scale = 1.0;  // multiplier on the polyak step
  double step0 = 0.0;       // sqrt_decay initial step; 0 = auto 1/(1+|g0|)
  bool vertex_scan = true;  // evaluate all simplex vertices before the ascent
  bool refine = true;       // cutting-plane polish when the ascent alone
                            // leaves the certificate gap above tol
};

struct SolveReport {
  std::vector<double> tau;  // best maximizer found
  double phi = 0.0;         // objective at tau (lower bound on the optimum)
  double upper = 0.0;       // upper bound from the best supergradient mixture
  double gap = 0.0;         // upper - phi
  int iters = 0;            // total oracle evaluations used
  bool converged = false;   // gap <= tol

  // The certifying mixture: points whose supergradients average to mix_curve,
  // with max(mix_curve) == upper.  Weights are nonnegative and sum to one.
  std::vector<std::vector<double>> mix_taus;
  std::vector<double> mix_weights;
  std::vector<double> mix_curve;
};

// Euclidean projection onto {v : v >= 0, sum v = 1}, in place.
void project_to_simplex(std::vector<double>& v);

// Projected supergradient ascent with a certified upper bound.  Deterministic:
// ties between equally good points keep the earliest one evaluated (vertices
// before ascent iterates).
SolveReport maximize_on_simplex(const SimplexOracle& oracle, const SolveConfig& config = {});

struct GridSearchResult {
  std::vector<double> tau;
  double value = 0.0;
};

// Exhaustive maximization over the lattice {c / resolution : c integral >= 0,
// sum c = resolution}, the brute-force verification oracle.  Value-only
// queries; requires dim <= 4 and at most max_points lattice points.
GridSearchResult grid_oracle(const SimplexOracle& oracle, int resolution,
                             std::size_t max_points = 50'000'000);

}  // namespace mindev
