#pragma once

#include "mindev/model.hpp"
#include "mindev/optimizer.hpp"
#include "mindev/risk.hpp"

namespace mindev {

inline constexpr double kBetaFloor = 1e-12;    // floor for relative scaling denominators
inline constexpr double kImproperTol = 1e-6;   // domination margin treated as real

ScalingProfile minimax_profile(int num_models);
// alpha = per-model Bayes risks, beta = 1: deviation from the best attainable.
ScalingProfile mindev_profile(const RiskKernel& kern);
// alpha = 0, beta = max(per-model Bayes risk, kBetaFloor): relative excess.
ScalingProfile mindev_relative_profile(const RiskKernel& kern);

// Maximum-likelihood strategy: pick the model best explaining the learning
// value, then decide as its Bayes responder.  Ties go to the lowest index.
Strategy ml_strategy(const RiskKernel& kern);

// Oracle for tau |-> min_q sum_k tau_k * (R(q,k) - alpha_k) / beta_k.
// The kernel must outlive the returned oracle.
SimplexOracle make_scaled_oracle(const RiskKernel& kern, const ScalingProfile& profile);

struct StrategySolve {
  Strategy q;                      // mixture strategy achieving `curve`
  RiskCurve curve;                 // risk curve of q
  std::vector<double> deviation;   // scaled deviation curve of q
  SolveReport report;              // solver certificate (scaled units)
};

// min_q max_k (R(q,k) - alpha_k) / beta_k via its concave dual.
StrategySolve scaled_minimax_strategy(const RiskKernel& kern, const ScalingProfile& profile,
                                      const SolveConfig& config = {});
StrategySolve minimax_strategy(const RiskKernel& kern, const SolveConfig& config = {});
StrategySolve mindev_strategy(const RiskKernel& kern, const SolveConfig& config = {});

struct ImpropernessResult {
  bool improper = false;
  double margin = 0.0;             // certified uniform improvement when improper
  std::vector<double> prior;       // weights making q0 a Bayes responder, when not
  Strategy dominating;             // strictly better mixture, when improper
  RiskCurve dominating_curve;
  SolveReport report;
};

// Decides the dichotomy for q0: either some prior makes it a Bayes responder,
// or another strategy beats it at every model simultaneously.
ImpropernessResult improperness_test(const RiskKernel& kern, const Strategy& q0,
                                     const SolveConfig& config = {});

}  // namespace mindev
