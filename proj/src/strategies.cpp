#include "mindev/strategies.hpp"

#include <cmath>
#include <stdexcept>

namespace mindev {

namespace {

void check_profile(const ScalingProfile& profile, int nm) {
  if ((int)profile.alpha.size() != nm || (int)profile.beta.size() != nm)
    throw std::invalid_argument("scaling profile does not match model count");
  for (double b : profile.beta)
    if (!(b > 0)) throw std::invalid_argument("beta must be strictly positive");
}

}  // namespace

ScalingProfile minimax_profile(int num_models) {
  ScalingProfile p;
  p.alpha.assign(num_models, 0.0);
  p.beta.assign(num_models, 1.0);
  return p;
}

ScalingProfile mindev_profile(const RiskKernel& kern) {
  ScalingProfile p;
  p.alpha = model_bayes_risks(kern);
  p.beta.assign(kern.nm, 1.0);
  return p;
}

ScalingProfile mindev_relative_profile(const RiskKernel& kern) {
  ScalingProfile p;
  p.alpha.assign(kern.nm, 0.0);
  p.beta = model_bayes_risks(kern);
  for (double& b : p.beta) b = std::max(b, kBetaFloor);
  return p;
}

Strategy ml_strategy(const RiskKernel& kern) {
  Strategy q = make_dense_strategy(kern.nx, kern.nz, kern.ny);
  for (int z = 0; z < kern.nz; ++z) {
    const double* pzrow = kern.pz_at(z);
    int khat = 0;
    for (int k = 1; k < kern.nm; ++k)
      if (pzrow[k] > pzrow[khat]) khat = k;
    for (int x = 0; x < kern.nx; ++x) {
      int best = 0;
      double bestc = kern.cost_at(x, 0)[khat];
      for (int yp = 1; yp < kern.ny; ++yp) {
        double c = kern.cost_at(x, yp)[khat];
        if (c < bestc) {
          bestc = c;
          best = yp;
        }
      }
      q.probs[((size_t)z * kern.nx + x) * kern.ny + best] = 1.0;
    }
  }
  return q;
}

SimplexOracle make_scaled_oracle(const RiskKernel& kern, const ScalingProfile& profile) {
  check_profile(profile, kern.nm);
  SimplexOracle oracle;
  oracle.dim = kern.nm;
  const RiskKernel* kp = &kern;
  std::vector<double> alpha = profile.alpha;
  std::vector<double> beta = profile.beta;
  oracle.eval = [kp, alpha, beta](const double* tau, double* grad) {
    int m = kp->nm;
    Weights v(m);
    double off = 0.0;
    for (int k = 0; k < m; ++k) {
      v[k] = tau[k] / beta[k];
      off += tau[k] * alpha[k] / beta[k];
    }
    if (grad) {
      std::vector<double> curve;
      double w = weighted_bayes_value(*kp, v, curve);
      for (int k = 0; k < m; ++k) grad[k] = (curve[k] - alpha[k]) / beta[k];
      return w - off;
    }
    return weighted_bayes_value(*kp, v) - off;
  };
  return oracle;
}

StrategySolve scaled_minimax_strategy(const RiskKernel& kern, const ScalingProfile& profile,
                                      const SolveConfig& config) {
  check_profile(profile, kern.nm);
  SimplexOracle oracle = make_scaled_oracle(kern, profile);
  StrategySolve out;
  out.report = maximize_on_simplex(oracle, config);
  out.q.nx = kern.nx;
  out.q.nz = kern.nz;
  out.q.ny = kern.ny;
  for (size_t i = 0; i < out.report.mix_taus.size(); ++i) {
    Strategy::Component comp;
    comp.weight = out.report.mix_weights[i];
    comp.bayes_weights.resize(kern.nm);
    for (int k = 0; k < kern.nm; ++k)
      comp.bayes_weights[k] = out.report.mix_taus[i][k] / profile.beta[k];
    out.q.mixture.push_back(std::move(comp));
  }
  out.deviation = out.report.mix_curve;
  out.curve.risks.resize(kern.nm);
  for (int k = 0; k < kern.nm; ++k)
    out.curve.risks[k] = profile.alpha[k] + profile.beta[k] * out.report.mix_curve[k];
  return out;
}

StrategySolve minimax_strategy(const RiskKernel& kern, const SolveConfig& config) {
  return scaled_minimax_strategy(kern, minimax_profile(kern.nm), config);
}

StrategySolve mindev_strategy(const RiskKernel& kern, const SolveConfig& config) {
  return scaled_minimax_strategy(kern, mindev_profile(kern), config);
}

ImpropernessResult improperness_test(const RiskKernel& kern, const Strategy& q0,
                                     const SolveConfig& config) {
  ScalingProfile profile;
  profile.alpha = risk_curve(kern, q0).risks;
  profile.beta.assign(kern.nm, 1.0);
  StrategySolve solve = scaled_minimax_strategy(kern, profile, config);

  ImpropernessResult res;
  res.report = solve.report;
  if (solve.report.upper < -kImproperTol) {
    // Certificate says the mixture beats q0 everywhere; confirm pointwise
    // from a fresh risk evaluation before reporting improperness.
    RiskCurve fresh = risk_curve(kern, solve.q);
    bool dominates = true;
    for (int k = 0; k < kern.nm; ++k)
      if (!(fresh.risks[k] < profile.alpha[k])) dominates = false;
    if (dominates) {
      res.improper = true;
      res.margin = -solve.report.upper;
      res.dominating = std::move(solve.q);
      res.dominating_curve = std::move(fresh);
      return res;
    }
  }
  res.prior = solve.report.tau;
  return res;
}

}  // namespace mindev
