#include "mindev/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace mindev {
namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 output mix.
uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Cumulative masses with the last entry pinned to the exact total.
std::vector<double> make_cdf(const double* p, int n) {
  std::vector<double> cdf((size_t)n);
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    acc += p[i];
    cdf[(size_t)i] = acc;
  }
  return cdf;
}

// u in [0,1) -> outcome index; zero-mass outcomes are never selected.
int draw_from_cdf(const std::vector<double>& cdf, double u) {
  double r = u * cdf.back();
  size_t i = std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin();
  if (i >= cdf.size()) i = cdf.size() - 1;
  return (int)i;
}

// Fixed pairwise-tree reduction over per-chunk (sum, sumsq) partials; the
// tree shape depends only on the chunk count, so totals are reproducible.
void tree_combine(std::vector<double>& partial) {
  size_t rows = partial.size() / 2;
  while (rows > 1) {
    size_t half = (rows + 1) / 2;
    for (size_t i = 0; i + half < rows; ++i) {
      partial[2 * i] += partial[2 * (i + half)];
      partial[2 * i + 1] += partial[2 * (i + half) + 1];
    }
    rows = half;
  }
}

}  // namespace

double counter_uniform(uint64_t key, uint64_t stream, uint64_t j) {
  uint64_t s = mix64(key ^ (kGolden * (stream + 1)));
  uint64_t v = mix64(s + (j + 1) * kGolden);
  return (double)(v >> 11) * 0x1.0p-53;
}

TableRule::TableRule(const Strategy& q) : q_(&q) {
  if (!q.dense()) throw std::invalid_argument("TableRule: strategy must be dense");
}

int TableRule::decide(int x, const int* cells, int draws, double u) const {
  (void)draws;
  int z = cells[0];
  double acc = 0;
  for (int yp = 0; yp < q_->ny; ++yp) {
    acc += q_->q(x, z, yp);
    if (u < acc) return yp;
  }
  return q_->ny - 1;
}

MultisetTableRule::MultisetTableRule(const Strategy& q, int base_size)
    : q_(&q), counts_((size_t)base_size, 0) {
  if (!q.dense()) throw std::invalid_argument("MultisetTableRule: strategy must be dense");
  if (base_size <= 0) throw std::invalid_argument("MultisetTableRule: base_size must be positive");
}

int MultisetTableRule::decide(int x, const int* cells, int draws, double u) const {
  std::fill(counts_.begin(), counts_.end(), 0);
  for (int j = 0; j < draws; ++j) ++counts_[(size_t)cells[j]];
  long long z = multiset_rank(counts_);
  if (z < 0 || z >= q_->nz) throw std::logic_error("MultisetTableRule: rank out of range");
  double acc = 0;
  for (int yp = 0; yp < q_->ny; ++yp) {
    acc += q_->q(x, (int)z, yp);
    if (u < acc) return yp;
  }
  return q_->ny - 1;
}

MlRawRule::MlRawRule(const FiniteObject& obj, const LossMatrix& loss, const LearningData& base)
    : nm_(obj.nm()), nx_(obj.nx()), base_size_(base.nz()) {
  if (loss.ny != obj.ny()) throw std::invalid_argument("MlRawRule: loss size mismatch");
  if (base.nz() <= 0 || (int)(base.p_z.size() / base.values.size()) != nm_)
    throw std::invalid_argument("MlRawRule: base learning data mismatch");
  loglik_.resize((size_t)nm_ * base_size_);
  for (int k = 0; k < nm_; ++k)
    for (int c = 0; c < base_size_; ++c) {
      double p = base.p(k, c);
      loglik_[(size_t)k * base_size_ + c] =
          p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    }
  decision_.resize((size_t)nm_ * nx_);
  for (int k = 0; k < nm_; ++k)
    for (int x = 0; x < nx_; ++x) {
      int best = 0;
      double best_cost = std::numeric_limits<double>::infinity();
      for (int yp = 0; yp < obj.ny(); ++yp) {
        double cost = 0;
        for (int y = 0; y < obj.ny(); ++y) cost += obj.p(k, x, y) * loss.at(y, yp);
        if (cost < best_cost) {
          best_cost = cost;
          best = yp;
        }
      }
      decision_[(size_t)k * nx_ + x] = best;
    }
}

int MlRawRule::decide(int x, const int* cells, int draws, double u) const {
  (void)u;
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < nm_; ++k) {
    double score = 0;
    for (int j = 0; j < draws; ++j) score += loglik_[(size_t)k * base_size_ + cells[j]];
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return decision_[(size_t)best * nx_ + x];
}

McEstimate estimate_risk_mc(const FiniteObject& obj, const LossMatrix& loss,
                            const LearningData& base, int draws, const DecisionRule& rule,
                            int theta, long long samples, uint64_t seed) {
  if (theta < 0 || theta >= obj.nm()) throw std::invalid_argument("estimate_risk_mc: bad theta");
  if (draws < 1) throw std::invalid_argument("estimate_risk_mc: draws must be >= 1");
  if (samples < 100) throw std::invalid_argument("estimate_risk_mc: need at least 100 samples");
  if (loss.ny != obj.ny()) throw std::invalid_argument("estimate_risk_mc: loss size mismatch");

  int nx = obj.nx(), ny = obj.ny();
  std::vector<double> base_cdf = make_cdf(&base.p_z[(size_t)theta * base.nz()], base.nz());
  std::vector<double> xy_cdf = make_cdf(&obj.p_xy[(size_t)theta * nx * ny], nx * ny);
  if (!(base_cdf.back() > 0) || !(xy_cdf.back() > 0))
    throw std::invalid_argument("estimate_risk_mc: zero total mass at theta");

  constexpr long long kChunk = 65536;
  std::vector<double> partial;
  partial.reserve(2 * (size_t)((samples + kChunk - 1) / kChunk));
  std::vector<int> cells((size_t)draws);
  for (long long lo = 0; lo < samples; lo += kChunk) {
    long long hi = std::min(samples, lo + kChunk);
    double sum = 0, sumsq = 0;
    for (long long i = lo; i < hi; ++i) {
      for (int j = 0; j < draws; ++j)
        cells[(size_t)j] = draw_from_cdf(base_cdf, counter_uniform(seed, (uint64_t)i, (uint64_t)j));
      int xy = draw_from_cdf(xy_cdf, counter_uniform(seed, (uint64_t)i, (uint64_t)draws));
      int x = xy / ny, y = xy % ny;
      double u = counter_uniform(seed, (uint64_t)i, (uint64_t)draws + 1);
      double w = loss.at(y, rule.decide(x, cells.data(), draws, u));
      sum += w;
      sumsq += w * w;
    }
    partial.push_back(sum);
    partial.push_back(sumsq);
  }
  tree_combine(partial);

  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.mean = partial[0] / (double)samples;
  double var = (partial[1] - (double)samples * est.mean * est.mean) / (double)(samples - 1);
  est.std_error = std::sqrt(std::max(0.0, var) / (double)samples);
  return est;
}

McEstimate estimate_risk_mc(const FiniteObject& obj, const LearningData& ld,
                            const LossMatrix& loss, const Strategy& q, int theta,
                            long long samples, uint64_t seed) {
  if (q.dense()) {
    TableRule rule(q);
    return estimate_risk_mc(obj, loss, ld, 1, rule, theta, samples, seed);
  }
  RiskKernel kern(obj, ld, loss);
  Strategy dense = densify(kern, q);
  TableRule rule(dense);
  return estimate_risk_mc(obj, loss, ld, 1, rule, theta, samples, seed);
}

}  // namespace mindev
