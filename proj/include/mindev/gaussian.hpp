#pragma once

#include "mindev/model.hpp"

// The two running experiments: a 2-D Gaussian object whose second state has
// an unknown mean component, learned from a noisy supervised sample, and a
// two-class Gaussian mixture with unknown mixing probability, learned from an
// unsupervised sample.  Both are discretized onto finite grids so the exact
// solver applies.

namespace mindev {

// Uniform cell grid over [lo, hi]; cell values are the centers, and the two
// edge cells absorb the distribution tails.
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int cells = 0;
};

inline constexpr GridSpec kExample1X1Default{-6.0, 8.0, 57};
inline constexpr GridSpec kExample1X2Default{-8.0, 8.0, 65};
inline constexpr GridSpec kExample2SignalDefault{-8.0, 8.0, 65};
inline constexpr GridSpec kLearnGridDefault{-10.0, 10.0, 33};

double grid_center(const GridSpec& grid, int j);
std::vector<double> grid_centers(const GridSpec& grid);
// Cell containing v; values beyond the range land in the edge cells.
int grid_cell(const GridSpec& grid, double v);

// Standard normal CDF (absolute error far below 1e-7).
double normal_cdf(double x);

// Cell masses of N(mean, var) on the grid: CDF differences at interior
// boundaries, tails absorbed by the edge cells, so the masses sum to one.
std::vector<double> discretize_gaussian_1d(double mean, double var, const GridSpec& grid);

struct ExampleInstance {
  FiniteObject obj;
  LearningData learn;   // enumerated learning data (trivial when mc_only)
  LossMatrix loss;

  int example = 0;      // 1 or 2
  int n = 0;            // learning sample size
  bool mc_only = false; // too large to enumerate: evaluate via simulate on `base`

  // Distribution of one raw learning draw, and how many draws form one
  // learning observation.  Used by Monte-Carlo evaluation and by the
  // multiset cross-checks.
  LearningData base;
  int draws_per_sample = 0;

  std::vector<double> thetas;
  GridSpec signal1{};   // example 1 first axis / example 2 signal axis
  GridSpec signal2{};   // example 1 second axis (cells = 0 for example 2)
  GridSpec learn_grid{};

  int x_index(int i1, int i2) const { return i1 * signal2.cells + i2; }
};

// 2-D object: state 1 signals are N((2,0), I), state 2 signals are
// N((0,theta), I), equal state priors, 0/1 loss.  The learning sample is n
// draws of state-2 signals with inflated variance 16 per axis; by default it
// is compressed to the sufficient statistic (the second-coordinate sample
// mean, N(theta, 16/n) on the learn grid).  With the flag off, Z enumerates
// multisets of discretized 2-D draws, subject to `cap`.
ExampleInstance build_example1(int n, int theta_count, double theta_lo, double theta_hi,
                               const GridSpec& x1, const GridSpec& x2, const GridSpec& learn_grid,
                               bool use_sufficient_statistic = true, long long cap = kIidCap);
ExampleInstance build_example1_default(int n);

enum class Example2Mode { multiset, mc };

// Two-class mixture: class-1 signals are N(-1,1), class-2 signals are
// N(1,1), the class prior p(y=1) = theta on a uniform grid over [0,1], 0/1
// loss.  The learning sample is n unsupervised draws of the signal marginal
// on the learn grid, enumerated as multisets; mc mode skips the enumeration
// and leaves evaluation to the Monte-Carlo path.
ExampleInstance build_example2(int n, int theta_count, const GridSpec& signal,
                               const GridSpec& learn_grid, Example2Mode mode = Example2Mode::multiset,
                               long long cap = kIidCap);
ExampleInstance build_example2_default(int n);

}  // namespace mindev
