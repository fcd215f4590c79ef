#pragma once

#include <cstdint>

#include "mindev/model.hpp"
#include "mindev/risk.hpp"

// Seeded Monte-Carlo risk estimation: an independent cross-check of the
// exact engine, and the evaluation path for learning-data sets too large to
// enumerate.

namespace mindev {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  long long samples = 0;
  uint64_t seed = 0;
};

// Deterministic counter-based generator: uniform value j of stream i under
// `key`, independent of evaluation order.
double counter_uniform(uint64_t key, uint64_t stream, uint64_t j);

// Decision maker fed the raw learning draws: cells[0..draws) index the base
// distribution's values; u in [0,1) drives any internal randomization.
class DecisionRule {
 public:
  virtual ~DecisionRule() = default;
  virtual int decide(int x, const int* cells, int draws, double u) const = 0;
};

// Dense strategy on explicit Z (draws = 1, z = cells[0]).
class TableRule : public DecisionRule {
 public:
  explicit TableRule(const Strategy& q);
  int decide(int x, const int* cells, int draws, double u) const override;

 private:
  const Strategy* q_;
};

// Dense strategy over multiset Z: counts the draws and maps the count vector
// to its rank in the multiset enumeration.  Not safe for concurrent calls
// (scratch buffer).
class MultisetTableRule : public DecisionRule {
 public:
  MultisetTableRule(const Strategy& q, int base_size);
  int decide(int x, const int* cells, int draws, double u) const override;

 private:
  const Strategy* q_;
  mutable std::vector<int> counts_;
};

// Maximum-likelihood decisions straight from the raw draws: pick the model
// with the highest draw likelihood (lowest index on ties), then use that
// model's own Bayes decision.  Works without enumerating Z.
class MlRawRule : public DecisionRule {
 public:
  MlRawRule(const FiniteObject& obj, const LossMatrix& loss, const LearningData& base);
  int decide(int x, const int* cells, int draws, double u) const override;

 private:
  int nm_, nx_, base_size_;
  std::vector<double> loglik_;   // [k*base_size + cell]
  std::vector<int> decision_;    // [k*nx + x]
};

// Estimates R(rule, theta): each sample draws `draws` base values and one
// (x,y) pair, then accumulates the loss of the rule's decision.  Sample i
// uses stream (seed, i), so the result is independent of evaluation order;
// partial sums combine by a fixed pairwise tree.
McEstimate estimate_risk_mc(const FiniteObject& obj, const LossMatrix& loss,
                            const LearningData& base, int draws, const DecisionRule& rule,
                            int theta, long long samples, uint64_t seed);

// Convenience for tabulated strategies: z is drawn directly from ld.
// Mixture strategies are expanded to a dense table first.
McEstimate estimate_risk_mc(const FiniteObject& obj, const LearningData& ld,
                            const LossMatrix& loss, const Strategy& q, int theta,
                            long long samples, uint64_t seed);

}  // namespace mindev
