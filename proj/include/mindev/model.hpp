#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Core data model: a finite recognition object (signals, hidden states, a
// family of candidate models), model-dependent learning observations, a loss
// matrix and randomized decision strategies.

namespace mindev {

// Tolerance for probability normalization; inputs within it are renormalized
// exactly once at load time, anything further off is a validation failure.
inline constexpr double kNormTol = 1e-9;

// Joint distributions p(x,y;theta) for a finite set of candidate models.
struct FiniteObject {
  std::vector<std::string> signals;
  std::vector<std::string> states;
  std::vector<std::string> models;
  std::vector<std::optional<double>> params;  // optional numeric parameter per model
  std::vector<double> p_xy;                   // [(k*nx + i)*ny + j]

  int nx() const { return (int)signals.size(); }
  int ny() const { return (int)states.size(); }
  int nm() const { return (int)models.size(); }
  double p(int k, int i, int j) const {
    return p_xy[((size_t)k * signals.size() + i) * states.size() + j];
  }
  double& p(int k, int i, int j) {
    return p_xy[((size_t)k * signals.size() + i) * states.size() + j];
  }
};

// Model-dependent distribution of one learning observation z.  The
// representation tag records how Z was built: "explicit", "iid-product(n)",
// "multiset(n)" or "sufficient-statistic".
struct LearningData {
  std::vector<std::string> values;
  std::vector<double> p_z;  // [k*nz + l]
  std::string representation = "explicit";

  int nz() const { return (int)values.size(); }
  double p(int k, int l) const { return p_z[(size_t)k * values.size() + l]; }
  double& p(int k, int l) { return p_z[(size_t)k * values.size() + l]; }
};

// |Z| = 1: the observation carries no information.
LearningData trivial_learning(int num_models);

// Loss w(y,y') of deciding y' when the true state is y.
struct LossMatrix {
  int ny = 0;
  std::vector<double> w;  // [y*ny + y']
  double at(int y, int yp) const { return w[(size_t)y * ny + yp]; }
};

LossMatrix zero_one_loss(int ny);

// Randomized strategy q(y'|x,z).  Normally a dense probability table (stored
// z-major).  Solver outputs may instead carry mixture components, each the
// weight table of a Bayes strategy, which are expanded on demand; this keeps
// memory bounded when |Z| is large.
struct Strategy {
  int nx = 0, nz = 0, ny = 0;
  std::vector<double> probs;  // [((size_t)z*nx + x)*ny + yp]; empty in mixture form

  struct Component {
    double weight = 0;
    std::vector<double> bayes_weights;  // per-model weights defining the component
  };
  std::vector<Component> mixture;

  bool dense() const { return !probs.empty(); }
  size_t table_size() const { return (size_t)nx * nz * ny; }
  double q(int x, int z, int yp) const { return probs[((size_t)z * nx + x) * ny + yp]; }
  double& q(int x, int z, int yp) { return probs[((size_t)z * nx + x) * ny + yp]; }
};

Strategy make_dense_strategy(int nx, int nz, int ny);

using Weights = std::vector<double>;

// Per-model affine scaling (R(q,theta) - alpha(theta)) / beta(theta) used by
// the generalized minimax solver.
struct ScalingProfile {
  std::vector<double> alpha;
  std::vector<double> beta;
};

// Validation: every violated constraint becomes one human-readable entry; an
// empty report means the input is valid.  Violations are data, not errors.
std::vector<std::string> validate_object(const FiniteObject& obj);
std::vector<std::string> validate_learning(const FiniteObject& obj, const LearningData& ld);
std::vector<std::string> validate_loss(const FiniteObject& obj, const LossMatrix& loss);
std::vector<std::string> validate_strategy(const FiniteObject& obj, const LearningData& ld,
                                           const Strategy& q);

enum class IidMode { explicit_tuples, multiset };

// Hard cap on the number of learning outcomes iid_product enumerates.
inline constexpr long long kIidCap = 10'000'000;

// Distribution of n i.i.d. draws from `base`, either as ordered tuples
// (|Z| = |Z_base|^n) or aggregated into multisets with multinomial masses.
// Per-outcome products are accumulated in log scale and exponentiated once.
// Throws std::invalid_argument when the outcome count exceeds `cap`.
LearningData iid_product(const LearningData& base, int n, IidMode mode, long long cap = kIidCap);

// Outcome count iid_product would enumerate (saturates at LLONG_MAX).
long long iid_product_size(int base_size, int n, IidMode mode);

// Rank of a count vector in the multiset enumeration order used by
// iid_product, for mapping raw samples onto multiset outcomes.
long long multiset_rank(const std::vector<int>& counts);

}  // namespace mindev
