#include "mindev/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace mindev {

void project_to_simplex(std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("cannot project an empty vector");
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0;
  double shift = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    double t = (cum - 1.0) / (double)(i + 1);
    if (u[i] - t > 0) shift = t;
  }
  for (double& x : v) x = std::max(0.0, x - shift);
}

namespace {

struct Eval {
  std::vector<double> tau;
  double value = -HUGE_VAL;
  std::vector<double> grad;
};

double curve_max(const std::vector<double>& c) {
  return *std::max_element(c.begin(), c.end());
}

// Mixture candidate for the upper bound: weighted witnesses and their
// averaged supergradient curve.
struct Candidate {
  bool present = false;
  double ub = HUGE_VAL;
  std::vector<std::vector<double>> taus;
  std::vector<double> weights;
  std::vector<double> curve;
};

Candidate single_candidate(const Eval& e) {
  Candidate c;
  c.present = true;
  c.curve = e.grad;
  c.ub = curve_max(c.curve);
  c.taus = {e.tau};
  c.weights = {1.0};
  return c;
}

Candidate window_candidate(const std::vector<Eval>& evals, int begin, int end) {
  Candidate c;
  if (begin >= end) return c;
  int m = (int)evals[0].grad.size();
  c.present = true;
  c.curve.assign(m, 0.0);
  double w = 1.0 / (double)(end - begin);
  for (int i = begin; i < end; ++i) {
    c.taus.push_back(evals[i].tau);
    c.weights.push_back(w);
    for (int k = 0; k < m; ++k) c.curve[k] += w * evals[i].grad[k];
  }
  c.ub = curve_max(c.curve);
  return c;
}

// Best suffix window [j, n) of the iterate supergradients, by mixture upper
// bound; ties keep the longest window (smallest j).
std::pair<int, double> best_suffix(const std::vector<Eval>& evals) {
  int n = (int)evals.size();
  int m = (int)evals[0].grad.size();
  std::vector<double> run(m, 0.0);
  int best_j = n - 1;
  double best_ub = HUGE_VAL;
  for (int j = n - 1; j >= 0; --j) {
    for (int k = 0; k < m; ++k) run[k] += evals[j].grad[k];
    double scale = 1.0 / (double)(n - j);
    double mx = -HUGE_VAL;
    for (int k = 0; k < m; ++k) mx = std::max(mx, run[k] * scale);
    if (mx <= best_ub) {
      best_ub = mx;
      best_j = j;
    }
  }
  return {best_j, best_ub};
}

unsigned long long sat_binomial(unsigned long long n, unsigned long long r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned long long out = 1;
  const unsigned long long cap = std::numeric_limits<unsigned long long>::max();
  for (unsigned long long i = 1; i <= r; ++i) {
    unsigned long long num = n - r + i;
    if (out > cap / num) return cap;
    out = out * num / i;
  }
  return out;
}

// Exact solution of the matrix game min_w max_k sum_j w_j rows[j][k] over the
// weight simplex, by a dense two-phase simplex with Bland pivoting (finite,
// deterministic).  Also returns the dual maximizer tau, the other side of the
// saddle: value = min_w max_k = max_tau min_j <tau, rows[j]>.
struct GameSolution {
  bool ok = false;
  std::vector<double> w;
  std::vector<double> tau;
  double value = 0;
};

GameSolution solve_weight_game(const std::vector<const double*>& rows, int m) {
  GameSolution out;
  int jn = (int)rows.size();
  if (jn == 0 || m == 0) return out;
  double big = 1.0;
  for (const double* r : rows)
    for (int k = 0; k < m; ++k) big = std::max(big, std::fabs(r[k]));
  const double shift = big + 1.0;  // t' = t + shift keeps the level variable positive

  // columns: w_0..w_{jn-1}, t', s_0..s_{m-1}, a_0..a_m | rhs
  const int mm = m + 1;
  const int nw = jn, ct = jn, cs = jn + 1, ca = jn + 1 + m;
  const int nn = ca + mm;
  std::vector<double> T((size_t)mm * (nn + 1), 0.0);
  auto t = [&](int r, int c) -> double& { return T[(size_t)r * (nn + 1) + c]; };
  for (int k = 0; k < m; ++k) {  // -sum_j w_j g_jk + t' - s_k + a_k = shift
    for (int j = 0; j < jn; ++j) t(k, j) = -rows[j][k];
    t(k, ct) = 1.0;
    t(k, cs + k) = -1.0;
    t(k, ca + k) = 1.0;
    t(k, nn) = shift;
  }
  for (int j = 0; j < jn; ++j) t(m, j) = 1.0;  // sum_j w_j + a_m = 1
  t(m, ca + m) = 1.0;
  t(m, nn) = 1.0;

  std::vector<int> basis(mm);
  for (int r = 0; r < mm; ++r) basis[r] = ca + r;
  std::vector<double> z(nn + 1, 0.0);  // objective row: reduced costs and value
  const double eps = 1e-11;

  auto pivot = [&](int pr, int pc) {
    double pv = t(pr, pc);
    for (int c = 0; c <= nn; ++c) t(pr, c) /= pv;
    for (int r = 0; r < mm; ++r) {
      if (r == pr) continue;
      double f = t(r, pc);
      if (f == 0) continue;
      for (int c = 0; c <= nn; ++c) t(r, c) -= f * t(pr, c);
    }
    double f = z[pc];
    if (f != 0)
      for (int c = 0; c <= nn; ++c) z[c] -= f * t(pr, c);
    basis[pr] = pc;
  };

  // Bland: entering = lowest-index improving column, leaving = lowest basis
  // index among the ratio-test ties.
  auto run = [&](int col_limit) -> bool {
    long long guard = 2000LL * (nn + mm) + 10000;
    while (guard-- > 0) {
      int pc = -1;
      for (int c = 0; c < col_limit; ++c)
        if (z[c] < -eps) {
          pc = c;
          break;
        }
      if (pc < 0) return true;  // optimal
      int pr = -1;
      double best = HUGE_VAL;
      for (int r = 0; r < mm; ++r) {
        if (t(r, pc) <= eps) continue;
        double ratio = t(r, nn) / t(r, pc);
        if (ratio < best - 1e-15 || (ratio < best + 1e-15 && (pr < 0 || basis[r] < basis[pr]))) {
          best = ratio;
          pr = r;
        }
      }
      if (pr < 0) return false;  // unbounded: cannot happen on well-posed input
      pivot(pr, pc);
    }
    return false;  // pivot guard tripped
  };

  // phase I: drive the artificials to zero
  for (int c = 0; c <= nn; ++c) {
    double sum = 0;
    for (int r = 0; r < mm; ++r) sum += t(r, c);
    z[c] = (c >= ca && c < ca + mm) ? 0.0 : -sum;
  }
  if (!run(ca) || z[nn] < -1e-7) return out;

  // pivot zero-valued artificials out of the basis so phase II cannot raise
  // them again; an all-zero row marks a redundant constraint and stays put
  for (int r = 0; r < mm; ++r) {
    if (basis[r] < ca) continue;
    for (int c = 0; c < ca; ++c)
      if (std::fabs(t(r, c)) > eps) {
        pivot(r, c);
        break;
      }
  }

  // phase II: minimize t'; artificial columns stay (ineligible) so the duals
  // can be read off their reduced costs
  std::fill(z.begin(), z.end(), 0.0);
  z[ct] = 1.0;
  for (int r = 0; r < mm; ++r)
    if (basis[r] == ct) {
      double f = z[ct];
      for (int c = 0; c <= nn; ++c) z[c] -= f * t(r, c);
      break;
    }
  if (!run(ca)) return out;

  out.w.assign(jn, 0.0);
  double tprime = 0;
  for (int r = 0; r < mm; ++r) {
    if (basis[r] < jn) out.w[basis[r]] = std::max(0.0, t(r, nn));
    if (basis[r] == ct) tprime = t(r, nn);
  }
  double wsum = 0;
  for (double v : out.w) wsum += v;
  if (wsum <= 0) return out;
  for (double& v : out.w) v /= wsum;
  out.value = tprime - shift;
  // duals: y_i = -reduced cost of artificial i; the game rows' duals are tau
  out.tau.assign(m, 0.0);
  double tsum = 0;
  for (int k = 0; k < m; ++k) tsum += (out.tau[k] = std::max(0.0, -z[ca + k]));
  if (tsum <= 0) return out;
  for (double& v : out.tau) v /= tsum;
  out.ok = true;
  return out;
}

}  // namespace

SolveReport maximize_on_simplex(const SimplexOracle& oracle, const SolveConfig& config) {
  int m = oracle.dim;
  if (m < 1) throw std::invalid_argument("oracle dimension must be positive");
  if (!oracle.eval) throw std::invalid_argument("oracle has no eval function");
  if (config.tol < 0) throw std::invalid_argument("tolerance must be nonnegative");

  Eval best_phi;                 // best objective value seen (certified lower bound)
  Eval best_single;              // witness with the smallest curve maximum
  double best_single_ub = HUGE_VAL;
  int best_prefix_end = 0;       // prefix [0, end) of iterates with the best mixture bound
  double best_prefix_ub = HUGE_VAL;
  double scan_ub = HUGE_VAL;     // tightest window bound seen in periodic suffix scans
  int scan_begin = 0, scan_end = 0;  // the window achieving scan_ub

  auto note_eval = [&](const Eval& e) {
    if (e.value > best_phi.value) best_phi = e;
    double ub = curve_max(e.grad);
    if (ub < best_single_ub) {
      best_single_ub = ub;
      best_single = e;
    }
  };

  // Distinct witness curves seen so far, each with a representative tau; the
  // cutting-plane polish maximizes their pointwise minimum.
  std::vector<Eval> rows;
  std::unordered_set<std::string> row_keys;

  Eval scratch;
  scratch.tau.resize(m);
  scratch.grad.resize(m);
  int iters = 0;
  auto evaluate = [&](const std::vector<double>& tau) {
    scratch.tau = tau;
    scratch.value = oracle.eval(scratch.tau.data(), scratch.grad.data());
    if (!std::isfinite(scratch.value)) throw std::runtime_error("oracle returned a non-finite value");
    note_eval(scratch);
    if (config.refine && rows.size() < 20000) {
      std::string key((const char*)scratch.grad.data(), scratch.grad.size() * sizeof(double));
      if (row_keys.insert(std::move(key)).second) rows.push_back(scratch);
    }
    ++iters;
  };

  if (config.vertex_scan) {
    std::vector<double> vertex(m, 0.0);
    for (int k = 0; k < m; ++k) {
      vertex[k] = 1.0;
      evaluate(vertex);
      vertex[k] = 0.0;
    }
  }

  int max_iters = config.max_iters;
  if (!config.vertex_scan && max_iters <= 0) max_iters = 1;  // guarantee one evaluation

  std::vector<Eval> iterates;
  std::vector<double> prefix_sum(m, 0.0);
  std::vector<double> tau_sum(m, 0.0);
  std::vector<double> probe(m);
  std::vector<double> tau(m, 1.0 / (double)m);
  double step0 = config.step0;
  bool converged = best_phi.value > -HUGE_VAL &&
                   std::min(best_single_ub, scan_ub) - best_phi.value <= config.tol;

  auto rescan = [&]() {
    auto [j, ub] = best_suffix(iterates);
    if (ub < scan_ub) {
      scan_ub = ub;
      scan_begin = j;
      scan_end = (int)iterates.size();
    }
  };

  // Cutting-plane polish: solve the matrix game restricted to the witness
  // curves seen so far (exactly, via the simplex LP with column generation),
  // probe the true oracle at the restricted maximizer, repeat until no new
  // curve turns up.  Piecewise-linear objectives have finitely many curves,
  // so the probes close certificate gaps the ascent leaves open.  Returns
  // whether the overall gap is now within tolerance.
  Candidate refined;
  std::vector<int> refined_support;
  auto attempt_refine = [&]() -> bool {
    auto certified = [&]() {
      return std::min({best_single_ub, best_prefix_ub, scan_ub, refined.ub}) - best_phi.value <=
             config.tol;
    };
    if (rows.empty() || certified()) return certified();

    std::vector<char> in_work(rows.size(), 0);
    std::vector<int> work;
    auto add_work = [&](int j) {
      if (!in_work[j]) {
        in_work[j] = 1;
        work.push_back(j);
      }
    };
    for (int j : refined_support) add_work(j);
    {  // seed with the rows of smallest curve maximum
      std::vector<std::pair<double, int>> order;
      order.reserve(rows.size());
      for (int j = 0; j < (int)rows.size(); ++j) order.push_back({curve_max(rows[j].grad), j});
      std::sort(order.begin(), order.end());
      int seed = std::min<int>((int)order.size(), 3 * m + 8);
      for (int i = 0; i < seed; ++i) add_work(order[i].second);
    }

    for (int round = 0; round < 40; ++round) {
      if (certified()) break;

      GameSolution sol;
      for (int pass = 0; pass < 60; ++pass) {
        std::vector<const double*> mat;
        mat.reserve(work.size());
        for (int j : work) mat.push_back(rows[j].grad.data());
        sol = solve_weight_game(mat, m);
        if (!sol.ok) break;
        // pricing: pull in the most violating rows outside the working set
        std::vector<std::pair<double, int>> viol;
        for (int j = 0; j < (int)rows.size(); ++j) {
          if (in_work[j]) continue;
          double v = 0;
          for (int i = 0; i < m; ++i) v += sol.tau[i] * rows[j].grad[i];
          if (v < sol.value - 1e-12) viol.push_back({v, j});
        }
        if (viol.empty()) break;
        std::sort(viol.begin(), viol.end());
        for (int i = 0; i < (int)viol.size() && i < 8; ++i) add_work(viol[i].second);
      }
      if (!sol.ok) break;

      Candidate cand;
      cand.present = true;
      cand.curve.assign(m, 0.0);
      std::vector<int> support;
      for (size_t c = 0; c < work.size(); ++c) {
        if (sol.w[c] <= 1e-15) continue;
        const Eval& r = rows[work[c]];
        support.push_back(work[c]);
        cand.taus.push_back(r.tau);
        cand.weights.push_back(sol.w[c]);
        for (int i = 0; i < m; ++i) cand.curve[i] += sol.w[c] * r.grad[i];
      }
      cand.ub = curve_max(cand.curve);
      if (cand.ub < refined.ub) {
        refined = std::move(cand);
        refined_support = std::move(support);
      }

      // probe the true objective where the restriction peaks
      size_t seen = rows.size();
      evaluate(sol.tau);
      if (rows.size() == seen) break;  // no new piece: the restriction is exact here
      in_work.resize(rows.size(), 0);
      add_work((int)seen);
    }
    return certified();
  };
  long long next_polish = 256;

  for (int k = 0; k < max_iters && !converged; ++k) {
    evaluate(tau);
    iterates.push_back(scratch);
    for (int i = 0; i < m; ++i) prefix_sum[i] += scratch.grad[i];
    for (int i = 0; i < m; ++i) tau_sum[i] += scratch.tau[i];
    double pref_ub = -HUGE_VAL;
    for (int i = 0; i < m; ++i) pref_ub = std::max(pref_ub, prefix_sum[i] / (double)(k + 1));
    if (pref_ub < best_prefix_ub) {
      best_prefix_ub = pref_ub;
      best_prefix_end = k + 1;
    }
    if ((k + 1) % 64 == 0) {
      rescan();
      // Ergodic probe: the averaged iterate often beats every single one.
      for (int i = 0; i < m; ++i) probe[i] = tau_sum[i] / (double)(k + 1);
      evaluate(probe);
    }
    if (config.refine && (k + 1) == next_polish) {
      next_polish *= 4;
      if (attempt_refine()) {
        converged = true;
        break;
      }
    }

    double ubest = std::min({best_single_ub, best_prefix_ub, scan_ub, refined.ub});
    if (ubest - best_phi.value <= config.tol) {
      converged = true;
      break;
    }

    // step from the iterate's own eval; probes may have overwritten scratch
    const Eval& cur = iterates.back();
    double gnorm2 = 0.0;
    for (int i = 0; i < m; ++i) gnorm2 += cur.grad[i] * cur.grad[i];
    if (k == 0 && step0 <= 0) step0 = 1.0 / (1.0 + std::sqrt(gnorm2));
    double step;
    if (config.step == SolveConfig::Step::polyak && gnorm2 > 0 && ubest > cur.value) {
      step = config.step_scale * (ubest - cur.value) / gnorm2;
    } else {
      step = step0 / std::sqrt((double)(k + 1));
    }
    for (int i = 0; i < m; ++i) tau[i] += step * cur.grad[i];
    project_to_simplex(tau);
  }

  if (!iterates.empty() && !converged) {
    rescan();
    for (int i = 0; i < m; ++i) probe[i] = tau_sum[i] / (double)iterates.size();
    evaluate(probe);
    int half = (int)iterates.size() / 2;
    if (half > 0) {
      std::fill(probe.begin(), probe.end(), 0.0);
      for (int j = half; j < (int)iterates.size(); ++j)
        for (int i = 0; i < m; ++i) probe[i] += iterates[j].tau[i];
      for (int i = 0; i < m; ++i) probe[i] /= (double)(iterates.size() - half);
      evaluate(probe);
    }
  }

  if (config.refine && !converged) converged = attempt_refine();

  // Final mixture selection; earlier candidates win ties so the direct
  // witness at the reported maximizer is preferred.
  Candidate cands[5];
  cands[0] = single_candidate(best_phi);
  cands[1] = single_candidate(best_single);
  if (best_prefix_end > 0) cands[2] = window_candidate(iterates, 0, best_prefix_end);
  if (scan_end > scan_begin) cands[3] = window_candidate(iterates, scan_begin, scan_end);
  cands[4] = refined;
  const Candidate* pick = &cands[0];
  for (const Candidate& c : cands)
    if (c.present && c.ub < pick->ub) pick = &c;

  SolveReport report;
  report.tau = best_phi.tau;
  report.phi = best_phi.value;
  report.upper = pick->ub;
  report.gap = report.upper - report.phi;
  report.iters = iters;
  report.converged = report.gap <= config.tol;
  report.mix_taus = pick->taus;
  report.mix_weights = pick->weights;
  report.mix_curve = pick->curve;
  return report;
}

GridSearchResult grid_oracle(const SimplexOracle& oracle, int resolution,
                             std::size_t max_points) {
  int d = oracle.dim;
  if (d < 1) throw std::invalid_argument("oracle dimension must be positive");
  if (d > 4) throw std::invalid_argument("grid oracle is limited to dimension 4");
  if (!oracle.eval) throw std::invalid_argument("oracle has no eval function");
  if (resolution < 1) throw std::invalid_argument("resolution must be positive");
  unsigned long long points = sat_binomial((unsigned long long)resolution + d - 1, d - 1);
  if (points > max_points)
    throw std::invalid_argument("simplex lattice has too many points; lower the resolution");

  GridSearchResult best;
  best.value = -HUGE_VAL;
  std::vector<int> c(d, 0);
  std::vector<double> tau(d, 0.0);
  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == d - 1) {
      c[pos] = rem;
      for (int i = 0; i < d; ++i) tau[i] = (double)c[i] / (double)resolution;
      double val = oracle.eval(tau.data(), nullptr);
      if (val > best.value) {
        best.value = val;
        best.tau = tau;
      }
      return;
    }
    for (int v = rem; v >= 0; --v) {
      c[pos] = v;
      rec(pos + 1, rem - v);
    }
  };
  rec(0, resolution);
  return best;
}

}  // namespace mindev
