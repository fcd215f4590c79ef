#include "mindev/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace mindev {

namespace {

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return std::string(buf);
}

void check_table(std::vector<std::string>& out, const char* what, const double* row, size_t len,
                 const std::string& slice_name, bool check_sum) {
  double sum = 0;
  for (size_t i = 0; i < len; ++i) {
    double v = row[i];
    if (!std::isfinite(v)) {
      out.push_back(strf("%s %s entry %zu is not finite", what, slice_name.c_str(), i));
      return;
    }
    if (v < 0) out.push_back(strf("%s %s entry %zu is negative: %g", what, slice_name.c_str(), i, v));
    sum += v;
  }
  if (check_sum && std::fabs(sum - 1.0) > kNormTol)
    out.push_back(strf("%s %s sums to %.12g (off by %.3g, tolerance %g)", what, slice_name.c_str(),
                       sum, sum - 1.0, kNormTol));
}

}  // namespace

LearningData trivial_learning(int num_models) {
  LearningData ld;
  ld.values = {"-"};
  ld.p_z.assign((size_t)num_models, 1.0);
  return ld;
}

LossMatrix zero_one_loss(int ny) {
  LossMatrix loss;
  loss.ny = ny;
  loss.w.assign((size_t)ny * ny, 1.0);
  for (int j = 0; j < ny; ++j) loss.w[(size_t)j * ny + j] = 0.0;
  return loss;
}

Strategy make_dense_strategy(int nx, int nz, int ny) {
  Strategy q;
  q.nx = nx;
  q.nz = nz;
  q.ny = ny;
  q.probs.assign((size_t)nx * nz * ny, 0.0);
  return q;
}

std::vector<std::string> validate_object(const FiniteObject& obj) {
  std::vector<std::string> out;
  if (obj.signals.empty()) out.push_back("object has no signals");
  if (obj.states.size() < 2) out.push_back("object needs at least two states");
  if (obj.models.empty()) out.push_back("object has no models");
  if (!obj.params.empty() && obj.params.size() != obj.models.size())
    out.push_back(strf("params has %zu entries, expected %zu", obj.params.size(),
                       obj.models.size()));
  size_t want = (size_t)obj.nx() * obj.ny() * obj.nm();
  if (obj.p_xy.size() != want) {
    out.push_back(strf("p_xy has %zu entries, expected %zu", obj.p_xy.size(), want));
    return out;
  }
  for (int k = 0; k < obj.nm(); ++k) {
    double sum = 0;
    for (int i = 0; i < obj.nx(); ++i)
      for (int j = 0; j < obj.ny(); ++j) {
        double v = obj.p(k, i, j);
        if (!std::isfinite(v)) {
          out.push_back(strf("p_xy(model '%s', signal '%s', state '%s') is not finite",
                             obj.models[k].c_str(), obj.signals[i].c_str(),
                             obj.states[j].c_str()));
          return out;
        }
        if (v < 0)
          out.push_back(strf("p_xy(model '%s', signal '%s', state '%s') is negative: %g",
                             obj.models[k].c_str(), obj.signals[i].c_str(), obj.states[j].c_str(),
                             v));
        sum += v;
      }
    if (std::fabs(sum - 1.0) > kNormTol)
      out.push_back(strf("p_xy for model '%s' sums to %.12g (off by %.3g, tolerance %g)",
                         obj.models[k].c_str(), sum, sum - 1.0, kNormTol));
  }
  return out;
}

std::vector<std::string> validate_learning(const FiniteObject& obj, const LearningData& ld) {
  std::vector<std::string> out;
  if (ld.values.empty()) out.push_back("learning data has no values");
  size_t want = (size_t)obj.nm() * ld.nz();
  if (ld.p_z.size() != want) {
    out.push_back(strf("p_z has %zu entries, expected %zu", ld.p_z.size(), want));
    return out;
  }
  for (int k = 0; k < obj.nm(); ++k)
    check_table(out, "p_z", &ld.p_z[(size_t)k * ld.nz()], ld.nz(),
                strf("for model '%s'", obj.models[k].c_str()), true);
  return out;
}

std::vector<std::string> validate_loss(const FiniteObject& obj, const LossMatrix& loss) {
  std::vector<std::string> out;
  if (loss.ny != obj.ny())
    out.push_back(strf("loss is %d-by-%d, expected %d states", loss.ny, loss.ny, obj.ny()));
  if (loss.w.size() != (size_t)loss.ny * loss.ny) {
    out.push_back(strf("loss has %zu entries, expected %d", loss.w.size(), loss.ny * loss.ny));
    return out;
  }
  for (int y = 0; y < loss.ny; ++y)
    for (int yp = 0; yp < loss.ny; ++yp) {
      double v = loss.at(y, yp);
      if (!std::isfinite(v) || v < 0)
        out.push_back(strf("loss(%d,%d) must be finite and nonnegative, got %g", y, yp, v));
    }
  return out;
}

std::vector<std::string> validate_strategy(const FiniteObject& obj, const LearningData& ld,
                                           const Strategy& q) {
  std::vector<std::string> out;
  if (q.nx != obj.nx() || q.nz != ld.nz() || q.ny != obj.ny()) {
    out.push_back(strf("strategy shape (%d,%d,%d) does not match instance (%d,%d,%d)", q.nx, q.nz,
                       q.ny, obj.nx(), ld.nz(), obj.ny()));
    return out;
  }
  if (q.dense()) {
    if (q.probs.size() != q.table_size()) {
      out.push_back(strf("strategy table has %zu entries, expected %zu", q.probs.size(),
                         q.table_size()));
      return out;
    }
    for (int z = 0; z < q.nz; ++z)
      for (int x = 0; x < q.nx; ++x)
        check_table(out, "strategy", &q.probs[((size_t)z * q.nx + x) * q.ny], q.ny,
                    strf("row (signal '%s', value '%s')", obj.signals[x].c_str(),
                         ld.values[z].c_str()),
                    true);
  } else {
    if (q.mixture.empty()) {
      out.push_back("strategy has neither a dense table nor mixture components");
      return out;
    }
    double wsum = 0;
    for (const auto& c : q.mixture) {
      if (c.weight < 0) out.push_back(strf("mixture component weight is negative: %g", c.weight));
      wsum += c.weight;
      if (c.bayes_weights.size() != (size_t)obj.nm())
        out.push_back(strf("mixture component has %zu weights, expected %d",
                           c.bayes_weights.size(), obj.nm()));
    }
    if (std::fabs(wsum - 1.0) > kNormTol)
      out.push_back(strf("mixture weights sum to %.12g (tolerance %g)", wsum, kNormTol));
  }
  return out;
}

namespace {

// Binomial coefficients with saturation, enough for multiset counting.
long long nck_sat(int a, int b) {
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  long long r = 1;
  for (int i = 1; i <= b; ++i) {
    // r * (a - b + i) / i, watching for overflow
    long long num = a - b + i;
    if (r > std::numeric_limits<long long>::max() / num) return std::numeric_limits<long long>::max();
    r = r * num / i;
  }
  return r;
}

}  // namespace

long long iid_product_size(int base_size, int n, IidMode mode) {
  if (n == 0) return 1;
  if (mode == IidMode::explicit_tuples) {
    long long r = 1;
    for (int i = 0; i < n; ++i) {
      if (r > std::numeric_limits<long long>::max() / base_size)
        return std::numeric_limits<long long>::max();
      r *= base_size;
    }
    return r;
  }
  return nck_sat(n + base_size - 1, n);
}

long long multiset_rank(const std::vector<int>& counts) {
  int g = (int)counts.size();
  int rem = 0;
  for (int c : counts) rem += c;
  long long rank = 0;
  for (int pos = 0; pos < g - 1 && rem > 0; ++pos) {
    // cells are filled first-position-largest; skip the blocks for larger counts
    for (int v = rem; v > counts[pos]; --v) rank += nck_sat(rem - v + g - pos - 2, rem - v);
    rem -= counts[pos];
  }
  return rank;
}

LearningData iid_product(const LearningData& base, int n, IidMode mode, long long cap) {
  if (n < 0) throw std::invalid_argument("iid_product: n must be nonnegative");
  int g = base.nz();
  int m = (int)(base.p_z.size() / (size_t)std::max(g, 1));
  if (g == 0 || base.p_z.size() != (size_t)m * g)
    throw std::invalid_argument("iid_product: malformed base distribution");
  std::string tag = (mode == IidMode::explicit_tuples ? "iid-product(" : "multiset(") +
                    std::to_string(n) + ")";
  if (n == 0) return trivial_learning(m);
  if (n == 1) {
    LearningData copy = base;
    copy.representation = tag;
    return copy;
  }

  long long total = iid_product_size(g, n, mode);
  if (total > cap)
    throw std::invalid_argument(
        strf("iid_product: %lld outcomes for %d draws over %d values exceeds cap %lld; "
             "use multiset mode, fewer draws or a coarser base",
             total, n, g, cap));

  // log probabilities of the base cells, -inf marking zero mass
  std::vector<double> lb((size_t)m * g);
  for (size_t i = 0; i < lb.size(); ++i)
    lb[i] = base.p_z[i] > 0 ? std::log(base.p_z[i]) : -HUGE_VAL;

  LearningData out;
  out.representation = tag;
  out.values.reserve(total);
  out.p_z.assign((size_t)m * total, 0.0);

  if (mode == IidMode::explicit_tuples) {
    std::vector<int> digit(n, 0);
    // per-depth prefix log-probabilities, one row per model
    std::vector<double> prefix((size_t)(n + 1) * m, 0.0);
    auto refill = [&](int from) {
      for (int d = from; d < n; ++d)
        for (int k = 0; k < m; ++k)
          prefix[(size_t)(d + 1) * m + k] = prefix[(size_t)d * m + k] + lb[(size_t)k * g + digit[d]];
    };
    refill(0);
    for (long long idx = 0;; ++idx) {
      std::string label = "(" + base.values[digit[0]];
      for (int d = 1; d < n; ++d) label += "," + base.values[digit[d]];
      label += ")";
      out.values.push_back(std::move(label));
      for (int k = 0; k < m; ++k)
        out.p_z[(size_t)k * total + idx] = std::exp(prefix[(size_t)n * m + k]);
      // odometer, last digit fastest
      int d = n - 1;
      while (d >= 0 && digit[d] == g - 1) digit[d--] = 0;
      if (d < 0) break;
      ++digit[d];
      refill(d);
    }
  } else {
    std::vector<int> c(g, 0);
    std::vector<double> lgc(n + 1);
    for (int i = 0; i <= n; ++i) lgc[i] = std::lgamma((double)i + 1.0);
    long long idx = 0;
    // enumerate count vectors, first cell largest first
    auto emit = [&]() {
      std::string label;
      double logmult = lgc[n];
      for (int i = 0; i < g; ++i) {
        if (c[i] == 0) continue;
        if (!label.empty()) label += "|";
        label += base.values[i] + "x" + std::to_string(c[i]);
        logmult -= lgc[c[i]];
      }
      out.values.push_back(std::move(label));
      for (int k = 0; k < m; ++k) {
        double lp = logmult;
        for (int i = 0; i < g; ++i)
          if (c[i] > 0) lp += c[i] * lb[(size_t)k * g + i];
        out.p_z[(size_t)k * total + idx] = std::exp(lp);
      }
      ++idx;
    };
    auto fill = [&](auto&& self, int pos, int rem) -> void {
      if (pos == g - 1) {
        c[pos] = rem;
        emit();
        c[pos] = 0;
        return;
      }
      for (int v = rem; v >= 0; --v) {
        c[pos] = v;
        self(self, pos + 1, rem - v);
      }
      c[pos] = 0;
    };
    fill(fill, 0, n);
  }
  return out;
}

}  // namespace mindev
