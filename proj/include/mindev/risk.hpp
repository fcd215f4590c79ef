#pragma once

#include "mindev/model.hpp"

// Risk engine: expected-loss evaluation, Bayes strategies for arbitrary
// nonnegative model weights, per-model Bayes risks and risk curves.

namespace mindev {

// Per-model risks of one strategy.
struct RiskCurve {
  std::vector<double> risks;
  std::string tag;  // which strategy produced it, for emitted output
};

// Tables shared by every operation on one (object, learning, loss) instance.
// cost[(x*ny + yp)*nm + k] = sum_y p_xy(x,y;k) * w(y,yp), model-contiguous so
// the per-(x,z) decision reductions vectorize; pz[z*nm + k] likewise.
class RiskKernel {
 public:
  RiskKernel(const FiniteObject& obj, const LearningData& ld, const LossMatrix& loss);

  int nm = 0, nx = 0, ny = 0, nz = 0;
  std::vector<double> cost;
  std::vector<double> pz;

  const double* cost_at(int x, int yp) const { return &cost[((size_t)x * ny + yp) * nm]; }
  const double* pz_at(int z) const { return &pz[(size_t)z * nm]; }
};

// Expected loss of q under model theta (Definition of risk, evaluated with a
// chunked pairwise-tree sum over z so results do not depend on chunk order).
double risk(const RiskKernel& kern, const Strategy& q, int theta);

// Risks under every model in one pass.
RiskCurve risk_curve(const RiskKernel& kern, const Strategy& q);

// Deterministic Bayes strategy for nonnegative model weights v (not all
// zero); per-(x,z) cost ties break toward the lowest decision index.
Strategy bayes_strategy(const RiskKernel& kern, const Weights& v);

// min_q sum_k v(k) R(q,k), the value the Bayes strategy attains.
double weighted_bayes_value(const RiskKernel& kern, const Weights& v);

// Same, also accumulating the risk curve of the witness Bayes strategy
// without materializing it; the solver's oracle hot path.
double weighted_bayes_value(const RiskKernel& kern, const Weights& v,
                            std::vector<double>& witness_curve);

// Bayes risk of the model alone, no learning data involved.
double model_bayes_risk(const RiskKernel& kern, int theta);
double model_bayes_risk(const FiniteObject& obj, const LossMatrix& loss, int theta);
std::vector<double> model_bayes_risks(const RiskKernel& kern);

// (R - alpha) / beta per model; beta must be strictly positive.
std::vector<double> scaled_deviation(const RiskCurve& curve, const ScalingProfile& profile);

// Expands a mixture-form strategy into a dense table (identity on dense
// input).  Throws std::length_error beyond `cap` table entries.
inline constexpr size_t kDenseCap = 30'000'000;
Strategy densify(const RiskKernel& kern, const Strategy& q, size_t cap = kDenseCap);

// Convenience wrappers building the kernel on the fly.
double risk(const FiniteObject&, const LearningData&, const LossMatrix&, const Strategy&,
            int theta);
RiskCurve risk_curve(const FiniteObject&, const LearningData&, const LossMatrix&,
                     const Strategy&);

}  // namespace mindev
