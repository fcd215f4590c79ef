#include "mindev/risk.hpp"

#include <cmath>
#include <stdexcept>

namespace mindev {

namespace {

constexpr int kChunk = 1024;  // z values per reduction chunk

// Pairwise-tree reduction of per-chunk partials (rows of width m).  The tree
// shape depends only on the chunk count, so results are independent of how
// chunks were evaluated.
void tree_combine(std::vector<double>& parts, int rows, int m) {
  while (rows > 1) {
    int half = (rows + 1) / 2;
    for (int i = 0; i + half < rows; ++i)
      for (int k = 0; k < m; ++k) parts[(size_t)i * m + k] += parts[(size_t)(i + half) * m + k];
    rows = half;
  }
}

void check_weights(const Weights& v, int nm) {
  if ((int)v.size() != nm) throw std::invalid_argument("weights size does not match model count");
  double sum = 0;
  for (double w : v) {
    if (!(w >= 0)) throw std::invalid_argument("weights must be nonnegative");
    sum += w;
  }
  if (sum <= 0) throw std::invalid_argument("weights must not all be zero");
}

}  // namespace

RiskKernel::RiskKernel(const FiniteObject& obj, const LearningData& ld, const LossMatrix& loss) {
  nm = obj.nm();
  nx = obj.nx();
  ny = obj.ny();
  nz = ld.nz();
  if (loss.ny != ny) throw std::invalid_argument("loss matrix does not match state count");
  if (ld.p_z.size() != (size_t)nm * nz)
    throw std::invalid_argument("learning data does not match model count");
  cost.assign((size_t)nx * ny * nm, 0.0);
  for (int k = 0; k < nm; ++k)
    for (int x = 0; x < nx; ++x)
      for (int yp = 0; yp < ny; ++yp) {
        double c = 0;
        for (int y = 0; y < ny; ++y) c += obj.p(k, x, y) * loss.at(y, yp);
        cost[((size_t)x * ny + yp) * nm + k] = c;
      }
  pz.assign((size_t)nz * nm, 0.0);
  for (int k = 0; k < nm; ++k)
    for (int z = 0; z < nz; ++z) pz[(size_t)z * nm + k] = ld.p(k, z);
}

namespace {

// One z-chunk of the risk-curve accumulation for a dense strategy.
void curve_chunk(const RiskKernel& kern, const Strategy& q, int z0, int z1, double* acc) {
  int m = kern.nm;
  for (int z = z0; z < z1; ++z) {
    const double* pzrow = kern.pz_at(z);
    for (int x = 0; x < kern.nx; ++x) {
      const double* qrow = &q.probs[((size_t)z * kern.nx + x) * kern.ny];
      for (int yp = 0; yp < kern.ny; ++yp) {
        double w = qrow[yp];
        if (w == 0) continue;
        const double* c = kern.cost_at(x, yp);
        for (int k = 0; k < m; ++k) acc[k] += w * pzrow[k] * c[k];
      }
    }
  }
}

std::vector<double> dense_curve(const RiskKernel& kern, const Strategy& q) {
  int m = kern.nm;
  int chunks = (kern.nz + kChunk - 1) / kChunk;
  std::vector<double> parts((size_t)chunks * m, 0.0);
  for (int c = 0; c < chunks; ++c)
    curve_chunk(kern, q, c * kChunk, std::min(kern.nz, (c + 1) * kChunk),
                &parts[(size_t)c * m]);
  tree_combine(parts, chunks, m);
  parts.resize(m);
  return parts;
}

// Oracle pass: weighted Bayes value plus the witness risk curve, and
// optionally the witness decisions written into *out.
double bayes_pass(const RiskKernel& kern, const Weights& v, std::vector<double>* curve,
                  Strategy* out, double out_weight) {
  check_weights(v, kern.nm);
  int m = kern.nm;
  int chunks = (kern.nz + kChunk - 1) / kChunk;
  std::vector<double> parts((size_t)chunks * (m + 1), 0.0);
  std::vector<double> w(m);
  for (int c = 0; c < chunks; ++c) {
    double* acc = &parts[(size_t)c * (m + 1)];
    double* val = acc + m;
    int z1 = std::min(kern.nz, (c + 1) * kChunk);
    for (int z = c * kChunk; z < z1; ++z) {
      const double* pzrow = kern.pz_at(z);
      for (int k = 0; k < m; ++k) w[k] = v[k] * pzrow[k];
      for (int x = 0; x < kern.nx; ++x) {
        int best = 0;
        double bestc = HUGE_VAL;
        for (int yp = 0; yp < kern.ny; ++yp) {
          const double* cst = kern.cost_at(x, yp);
          double s = 0;
          for (int k = 0; k < m; ++k) s += w[k] * cst[k];
          if (s < bestc) {
            bestc = s;
            best = yp;
          }
        }
        *val += bestc;
        if (curve) {
          const double* cst = kern.cost_at(x, best);
          for (int k = 0; k < m; ++k) acc[k] += pzrow[k] * cst[k];
        }
        if (out) out->probs[((size_t)z * kern.nx + x) * kern.ny + best] += out_weight;
      }
    }
  }
  tree_combine(parts, chunks, m + 1);
  if (curve) curve->assign(parts.begin(), parts.begin() + m);
  return parts[m];
}

}  // namespace

double risk(const RiskKernel& kern, const Strategy& q, int theta) {
  return risk_curve(kern, q).risks[theta];
}

RiskCurve risk_curve(const RiskKernel& kern, const Strategy& q) {
  RiskCurve rc;
  if (q.dense()) {
    if (q.probs.size() != (size_t)kern.nx * kern.nz * kern.ny)
      throw std::invalid_argument("strategy table does not match instance shape");
    rc.risks = dense_curve(kern, q);
    return rc;
  }
  if (q.mixture.empty()) throw std::invalid_argument("strategy is empty");
  rc.risks.assign(kern.nm, 0.0);
  for (const auto& comp : q.mixture) {
    std::vector<double> c;
    bayes_pass(kern, comp.bayes_weights, &c, nullptr, 0.0);
    for (int k = 0; k < kern.nm; ++k) rc.risks[k] += comp.weight * c[k];
  }
  return rc;
}

Strategy bayes_strategy(const RiskKernel& kern, const Weights& v) {
  Strategy q = make_dense_strategy(kern.nx, kern.nz, kern.ny);
  bayes_pass(kern, v, nullptr, &q, 1.0);
  return q;
}

double weighted_bayes_value(const RiskKernel& kern, const Weights& v) {
  return bayes_pass(kern, v, nullptr, nullptr, 0.0);
}

double weighted_bayes_value(const RiskKernel& kern, const Weights& v,
                            std::vector<double>& witness_curve) {
  return bayes_pass(kern, v, &witness_curve, nullptr, 0.0);
}

double model_bayes_risk(const RiskKernel& kern, int theta) {
  double sum = 0;
  for (int x = 0; x < kern.nx; ++x) {
    double best = HUGE_VAL;
    for (int yp = 0; yp < kern.ny; ++yp) best = std::min(best, kern.cost_at(x, yp)[theta]);
    sum += best;
  }
  return sum;
}

double model_bayes_risk(const FiniteObject& obj, const LossMatrix& loss, int theta) {
  if (loss.ny != obj.ny()) throw std::invalid_argument("loss matrix does not match state count");
  double sum = 0;
  for (int x = 0; x < obj.nx(); ++x) {
    double best = HUGE_VAL;
    for (int yp = 0; yp < obj.ny(); ++yp) {
      double c = 0;
      for (int y = 0; y < obj.ny(); ++y) c += obj.p(theta, x, y) * loss.at(y, yp);
      best = std::min(best, c);
    }
    sum += best;
  }
  return sum;
}

std::vector<double> model_bayes_risks(const RiskKernel& kern) {
  std::vector<double> out(kern.nm);
  for (int k = 0; k < kern.nm; ++k) out[k] = model_bayes_risk(kern, k);
  return out;
}

std::vector<double> scaled_deviation(const RiskCurve& curve, const ScalingProfile& profile) {
  size_t m = curve.risks.size();
  if (profile.alpha.size() != m || profile.beta.size() != m)
    throw std::invalid_argument("scaling profile does not match model count");
  std::vector<double> out(m);
  for (size_t k = 0; k < m; ++k) {
    if (!(profile.beta[k] > 0)) throw std::invalid_argument("beta must be strictly positive");
    out[k] = (curve.risks[k] - profile.alpha[k]) / profile.beta[k];
  }
  return out;
}

Strategy densify(const RiskKernel& kern, const Strategy& q, size_t cap) {
  if (q.dense()) return q;
  if (q.mixture.empty()) throw std::invalid_argument("strategy is empty");
  size_t entries = (size_t)kern.nx * kern.nz * kern.ny;
  if (entries > cap)
    throw std::length_error("strategy table would exceed the dense expansion cap");
  Strategy out = make_dense_strategy(kern.nx, kern.nz, kern.ny);
  for (const auto& comp : q.mixture) bayes_pass(kern, comp.bayes_weights, nullptr, &out, comp.weight);
  return out;
}

double risk(const FiniteObject& obj, const LearningData& ld, const LossMatrix& loss,
            const Strategy& q, int theta) {
  return risk(RiskKernel(obj, ld, loss), q, theta);
}

RiskCurve risk_curve(const FiniteObject& obj, const LearningData& ld, const LossMatrix& loss,
                     const Strategy& q) {
  return risk_curve(RiskKernel(obj, ld, loss), q);
}

}  // namespace mindev
