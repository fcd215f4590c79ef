#include "mindev/gaussian.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace mindev {

namespace {

std::string num_label(double v) {
  char buf[32];
  snprintf(buf, sizeof(buf), "%.6g", v);
  return std::string(buf);
}

void check_grid(const GridSpec& grid, const char* name, int min_cells) {
  if (!(grid.lo < grid.hi))
    throw std::invalid_argument(std::string(name) + " grid needs lo < hi");
  if (grid.cells < min_cells)
    throw std::invalid_argument(std::string(name) + " grid needs at least " +
                                std::to_string(min_cells) + " cells");
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("need at least one model");
  if (!(lo <= hi)) throw std::invalid_argument("model range needs lo <= hi");
  std::vector<double> out(count);
  double step = count > 1 ? (hi - lo) / (count - 1) : 0.0;
  for (int i = 0; i < count; ++i) out[i] = lo + step * i;
  return out;
}

void set_models(FiniteObject& obj, const std::vector<double>& thetas) {
  for (double t : thetas) {
    obj.models.push_back(num_label(t));
    obj.params.push_back(t);
  }
}

}  // namespace

double grid_center(const GridSpec& grid, int j) {
  double w = (grid.hi - grid.lo) / grid.cells;
  return grid.lo + (j + 0.5) * w;
}

std::vector<double> grid_centers(const GridSpec& grid) {
  std::vector<double> out(grid.cells);
  for (int j = 0; j < grid.cells; ++j) out[j] = grid_center(grid, j);
  return out;
}

int grid_cell(const GridSpec& grid, double v) {
  double w = (grid.hi - grid.lo) / grid.cells;
  int j = (int)std::floor((v - grid.lo) / w);
  if (j < 0) j = 0;
  if (j >= grid.cells) j = grid.cells - 1;
  return j;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::vector<double> discretize_gaussian_1d(double mean, double var, const GridSpec& grid) {
  check_grid(grid, "signal", 1);
  if (!(var > 0)) throw std::invalid_argument("variance must be positive");
  double sigma = std::sqrt(var);
  double w = (grid.hi - grid.lo) / grid.cells;
  std::vector<double> cdf(grid.cells - 1);
  for (int j = 1; j < grid.cells; ++j)
    cdf[j - 1] = normal_cdf((grid.lo + j * w - mean) / sigma);
  std::vector<double> mass(grid.cells);
  for (int j = 0; j < grid.cells; ++j) {
    double lo = j == 0 ? 0.0 : cdf[j - 1];
    double hi = j == grid.cells - 1 ? 1.0 : cdf[j];
    mass[j] = std::max(0.0, hi - lo);
  }
  return mass;
}

ExampleInstance build_example1(int n, int theta_count, double theta_lo, double theta_hi,
                               const GridSpec& x1, const GridSpec& x2, const GridSpec& learn_grid,
                               bool use_sufficient_statistic, long long cap) {
  if (n < 0) throw std::invalid_argument("sample size must be nonnegative");
  check_grid(x1, "x1", 3);
  check_grid(x2, "x2", 3);
  check_grid(learn_grid, "learn", 3);

  ExampleInstance inst;
  inst.example = 1;
  inst.n = n;
  inst.signal1 = x1;
  inst.signal2 = x2;
  inst.learn_grid = learn_grid;
  inst.thetas = linspace(theta_lo, theta_hi, theta_count);

  FiniteObject& obj = inst.obj;
  obj.states = {"1", "2"};
  set_models(obj, inst.thetas);
  std::vector<double> c1 = grid_centers(x1), c2 = grid_centers(x2);
  for (int i1 = 0; i1 < x1.cells; ++i1)
    for (int i2 = 0; i2 < x2.cells; ++i2)
      obj.signals.push_back("(" + num_label(c1[i1]) + "," + num_label(c2[i2]) + ")");

  // State 1: N(2,1) x N(0,1); state 2: N(0,1) x N(theta,1); priors 1/2.
  std::vector<double> s1a = discretize_gaussian_1d(2.0, 1.0, x1);
  std::vector<double> s1b = discretize_gaussian_1d(0.0, 1.0, x2);
  std::vector<double> s2a = discretize_gaussian_1d(0.0, 1.0, x1);
  obj.p_xy.assign((size_t)obj.nm() * obj.nx() * obj.ny(), 0.0);
  for (int k = 0; k < obj.nm(); ++k) {
    std::vector<double> s2b = discretize_gaussian_1d(inst.thetas[k], 1.0, x2);
    for (int i1 = 0; i1 < x1.cells; ++i1)
      for (int i2 = 0; i2 < x2.cells; ++i2) {
        int x = inst.x_index(i1, i2);
        obj.p(k, x, 0) = 0.5 * s1a[i1] * s1b[i2];
        obj.p(k, x, 1) = 0.5 * s2a[i1] * s2b[i2];
      }
  }

  inst.loss = zero_one_loss(2);

  // The learning draws are state-2 signals with variance 16 per axis.  The
  // first coordinates carry no information about theta, and the sample mean
  // of the second coordinates is sufficient for a Gaussian location, so the
  // default compresses Z to that mean, N(theta, 16/n) on the learn grid.
  if (n == 0) {
    inst.learn = trivial_learning(obj.nm());
    inst.base = inst.learn;
    inst.draws_per_sample = 1;
  } else if (use_sufficient_statistic) {
    LearningData ld;
    ld.representation = "sufficient-statistic";
    for (double c : grid_centers(learn_grid)) ld.values.push_back(num_label(c));
    ld.p_z.resize((size_t)obj.nm() * learn_grid.cells);
    for (int k = 0; k < obj.nm(); ++k) {
      std::vector<double> mass = discretize_gaussian_1d(inst.thetas[k], 16.0 / n, learn_grid);
      for (int l = 0; l < learn_grid.cells; ++l) ld.p_z[(size_t)k * learn_grid.cells + l] = mass[l];
    }
    inst.learn = ld;
    inst.base = ld;
    inst.draws_per_sample = 1;
  } else {
    LearningData base;
    std::vector<double> first = discretize_gaussian_1d(0.0, 16.0, learn_grid);
    std::vector<double> centers = grid_centers(learn_grid);
    for (int i = 0; i < learn_grid.cells; ++i)
      for (int j = 0; j < learn_grid.cells; ++j)
        base.values.push_back("(" + num_label(centers[i]) + "," + num_label(centers[j]) + ")");
    base.p_z.resize((size_t)obj.nm() * base.nz());
    for (int k = 0; k < obj.nm(); ++k) {
      std::vector<double> second = discretize_gaussian_1d(inst.thetas[k], 16.0, learn_grid);
      for (int i = 0; i < learn_grid.cells; ++i)
        for (int j = 0; j < learn_grid.cells; ++j)
          base.p_z[(size_t)k * base.nz() + i * learn_grid.cells + j] = first[i] * second[j];
    }
    inst.base = base;
    inst.draws_per_sample = n;
    inst.learn = iid_product(base, n, IidMode::multiset, cap);
  }
  return inst;
}

ExampleInstance build_example1_default(int n) {
  return build_example1(n, 41, -4.0, 4.0, kExample1X1Default, kExample1X2Default,
                        kLearnGridDefault);
}

ExampleInstance build_example2(int n, int theta_count, const GridSpec& signal,
                               const GridSpec& learn_grid, Example2Mode mode, long long cap) {
  if (n < 0) throw std::invalid_argument("sample size must be nonnegative");
  check_grid(signal, "signal", 3);
  check_grid(learn_grid, "learn", 3);

  ExampleInstance inst;
  inst.example = 2;
  inst.n = n;
  inst.signal1 = signal;
  inst.signal2 = GridSpec{0.0, 0.0, 0};
  inst.learn_grid = learn_grid;
  inst.thetas = linspace(0.0, 1.0, theta_count);

  FiniteObject& obj = inst.obj;
  obj.states = {"1", "2"};
  set_models(obj, inst.thetas);
  for (double c : grid_centers(signal)) obj.signals.push_back(num_label(c));

  // Class 1 signals are N(-1,1), class 2 signals are N(1,1); p(y=1) = theta.
  std::vector<double> d1 = discretize_gaussian_1d(-1.0, 1.0, signal);
  std::vector<double> d2 = discretize_gaussian_1d(1.0, 1.0, signal);
  obj.p_xy.assign((size_t)obj.nm() * obj.nx() * obj.ny(), 0.0);
  for (int k = 0; k < obj.nm(); ++k) {
    double t = inst.thetas[k];
    for (int i = 0; i < signal.cells; ++i) {
      obj.p(k, i, 0) = t * d1[i];
      obj.p(k, i, 1) = (1.0 - t) * d2[i];
    }
  }

  inst.loss = zero_one_loss(2);

  // Unsupervised learning: n draws from the signal marginal on the learn
  // grid (the learner sees signals, not classes).
  LearningData base;
  std::vector<double> l1 = discretize_gaussian_1d(-1.0, 1.0, learn_grid);
  std::vector<double> l2 = discretize_gaussian_1d(1.0, 1.0, learn_grid);
  for (double c : grid_centers(learn_grid)) base.values.push_back(num_label(c));
  base.p_z.resize((size_t)obj.nm() * learn_grid.cells);
  for (int k = 0; k < obj.nm(); ++k) {
    double t = inst.thetas[k];
    for (int l = 0; l < learn_grid.cells; ++l)
      base.p_z[(size_t)k * learn_grid.cells + l] = t * l1[l] + (1.0 - t) * l2[l];
  }
  inst.base = base;
  inst.draws_per_sample = std::max(n, 1);

  if (n == 0) {
    inst.learn = trivial_learning(obj.nm());
    inst.draws_per_sample = 1;
  } else if (mode == Example2Mode::mc) {
    inst.learn = trivial_learning(obj.nm());
    inst.mc_only = true;
  } else {
    inst.learn = iid_product(base, n, IidMode::multiset, cap);
  }
  return inst;
}

ExampleInstance build_example2_default(int n) {
  return build_example2(n, 41, kExample2SignalDefault, kLearnGridDefault);
}

}  // namespace mindev
