#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "mindev/risk.hpp"
#include "support.hpp"

using namespace mindev;
using namespace mindev::test;

namespace {

// Direct evaluation of the defining triple sum, the oracle for the engine.
double naive_risk(const Instance& in, const Strategy& q, int theta) {
  double total = 0;
  for (int z = 0; z < in.learn.nz(); ++z)
    for (int x = 0; x < in.obj.nx(); ++x)
      for (int y = 0; y < in.obj.ny(); ++y)
        for (int yp = 0; yp < in.obj.ny(); ++yp)
          total += in.learn.p(theta, z) * in.obj.p(theta, x, y) * q.q(x, z, yp) *
                   in.loss.at(y, yp);
  return total;
}

}  // namespace

TEST_CASE("risks of hand-checked strategies") {
  Instance in = t1();
  RiskKernel kern(in.obj, in.learn, in.loss);

  Strategy pick1 = make_dense_strategy(1, 1, 2);
  pick1.q(0, 0, 0) = 1.0;
  Strategy pick2 = make_dense_strategy(1, 1, 2);
  pick2.q(0, 0, 1) = 1.0;
  CHECK(risk(kern, pick1, 0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(risk(kern, pick2, 0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(model_bayes_risk(kern, 0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(model_bayes_risk(in.obj, in.loss, 0) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("bayes strategy of the two-model instance") {
  Instance in = t2();
  RiskKernel kern(in.obj, in.learn, in.loss);

  Strategy q1 = bayes_strategy(kern, {1.0, 0.0});
  CHECK(q1.q(0, 0, 0) == 1.0);  // back the likelier state of model 1
  RiskCurve curve = risk_curve(kern, q1);
  CHECK(curve.risks[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(curve.risks[1] == doctest::Approx(0.8).epsilon(1e-15));

  // balanced weights: both decisions cost 0.5, ties break to the lowest index
  Strategy qb = bayes_strategy(kern, {0.5, 0.5});
  CHECK(qb.q(0, 0, 0) == 1.0);
  CHECK(weighted_bayes_value(kern, {0.5, 0.5}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("learning data separates the models") {
  Instance in = t2ext();
  RiskKernel kern(in.obj, in.learn, in.loss);
  // z1 favors model 1, z2 favors model 2; under equal weights the Bayes
  // responder decides per observation
  Strategy q = bayes_strategy(kern, {0.5, 0.5});
  CHECK(q.q(0, 0, 0) == 1.0);
  CHECK(q.q(0, 1, 1) == 1.0);
  double v = weighted_bayes_value(kern, {0.5, 0.5});
  // risk(th1) = 0.9*0.2 + 0.1*0.8 = 0.26 symmetric in th2
  CHECK(v == doctest::Approx(0.26).epsilon(1e-15));
}

TEST_CASE("kernel risk equals the defining sum") {
  std::mt19937_64 rng(20260822);
  for (int rep = 0; rep < 25; ++rep) {
    Instance in = random_instance(rng, 3, 3, 2, 4);
    RiskKernel kern(in.obj, in.learn, in.loss);
    Strategy q = random_strategy(rng, 3, 4, 3);
    for (int k = 0; k < in.obj.nm(); ++k)
      CHECK(risk(kern, q, k) == doctest::Approx(naive_risk(in, q, k)).epsilon(1e-12));
  }
}

TEST_CASE("risk is linear in the strategy table") {
  std::mt19937_64 rng(7);
  Instance in = random_instance(rng, 4, 3, 3, 5);
  RiskKernel kern(in.obj, in.learn, in.loss);
  Strategy qa = random_strategy(rng, 4, 5, 3);
  Strategy qb = random_strategy(rng, 4, 5, 3);
  for (double w : {0.25, 0.5, 0.9}) {
    Strategy mix = qa;
    for (size_t i = 0; i < mix.probs.size(); ++i)
      mix.probs[i] = w * qa.probs[i] + (1 - w) * qb.probs[i];
    for (int k = 0; k < 3; ++k) {
      double want = w * risk(kern, qa, k) + (1 - w) * risk(kern, qb, k);
      CHECK(risk(kern, mix, k) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("bayes strategies are optimal for their weights") {
  std::mt19937_64 rng(11);
  Instance in = random_instance(rng, 3, 4, 3, 3);
  RiskKernel kern(in.obj, in.learn, in.loss);
  Weights v = random_weights(rng, 3);
  double value = weighted_bayes_value(kern, v);
  for (int rep = 0; rep < 100; ++rep) {
    Strategy q = random_strategy(rng, 3, 3, 4, rep % 2 == 0);
    double mixed = 0;
    for (int k = 0; k < 3; ++k) mixed += v[k] * risk(kern, q, k);
    CHECK(value <= mixed + 1e-12);
  }
  // the witness strategy attains the value
  Strategy qb = bayes_strategy(kern, v);
  double attained = 0;
  for (int k = 0; k < 3; ++k) attained += v[k] * risk(kern, qb, k);
  CHECK(attained == doctest::Approx(value).epsilon(1e-12));
}

TEST_CASE("weighted bayes value scales linearly in the weights") {
  std::mt19937_64 rng(13);
  Instance in = random_instance(rng, 2, 3, 4, 2);
  RiskKernel kern(in.obj, in.learn, in.loss);
  Weights v = random_weights(rng, 4);
  double base = weighted_bayes_value(kern, v);
  for (double c : {0.1, 2.0, 37.5}) {
    Weights cv = v;
    for (double& w : cv) w *= c;
    CHECK(weighted_bayes_value(kern, cv) == doctest::Approx(c * base).epsilon(1e-12));
  }
}

TEST_CASE("witness curve accompanies the weighted bayes value") {
  std::mt19937_64 rng(17);
  Instance in = random_instance(rng, 3, 3, 3, 4);
  RiskKernel kern(in.obj, in.learn, in.loss);
  Weights v = random_weights(rng, 3);
  std::vector<double> curve;
  double value = weighted_bayes_value(kern, v, curve);
  REQUIRE(curve.size() == 3);
  double dot = 0;
  for (int k = 0; k < 3; ++k) dot += v[k] * curve[k];
  CHECK(dot == doctest::Approx(value).epsilon(1e-12));
  RiskCurve direct = risk_curve(kern, bayes_strategy(kern, v));
  for (int k = 0; k < 3; ++k)
    CHECK(curve[k] == doctest::Approx(direct.risks[k]).epsilon(1e-12));
}

TEST_CASE("weight validation") {
  Instance in = t2();
  RiskKernel kern(in.obj, in.learn, in.loss);
  CHECK_THROWS_AS(weighted_bayes_value(kern, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(weighted_bayes_value(kern, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(weighted_bayes_value(kern, {1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("model bayes risk matches the no-learning weighted value") {
  std::mt19937_64 rng(19);
  Instance in = random_instance(rng, 3, 3, 3, 1);
  RiskKernel kern(in.obj, in.learn, in.loss);
  auto all = model_bayes_risks(kern);
  for (int k = 0; k < 3; ++k) {
    Weights e(3, 0.0);
    e[k] = 1.0;
    CHECK(model_bayes_risk(kern, k) == doctest::Approx(weighted_bayes_value(kern, e)).epsilon(1e-12));
    CHECK(all[k] == model_bayes_risk(kern, k));
  }
}

TEST_CASE("learning never hurts the bayes risk") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    Instance in = random_instance(rng, 3, 3, 3, 4);
    RiskKernel with(in.obj, in.learn, in.loss);
    Weights v = random_weights(rng, 3);
    RiskKernel without(in.obj, trivial_learning(3), in.loss);
    CHECK(weighted_bayes_value(with, v) <= weighted_bayes_value(without, v) + 1e-12);
  }
}

TEST_CASE("multiset aggregation preserves risks") {
  std::mt19937_64 rng(29);
  Instance in = random_instance(rng, 2, 3, 2, 1);
  LearningData base;
  base.values = {"u", "v", "w"};
  for (int k = 0; k < 2; ++k) {
    auto row = random_simplex_row(rng, 3);
    base.p_z.insert(base.p_z.end(), row.begin(), row.end());
  }
  const int n = 3, g = 3;
  LearningData tuples = iid_product(base, n, IidMode::explicit_tuples);
  LearningData msets = iid_product(base, n, IidMode::multiset);

  Strategy qm = random_strategy(rng, 2, msets.nz(), 3);
  // expand onto tuples: each tuple keeps the row of its count vector
  Strategy qt = make_dense_strategy(2, tuples.nz(), 3);
  for (int t = 0; t < tuples.nz(); ++t) {
    std::vector<int> counts(g, 0);
    int rem = t;
    for (int d = n - 1; d >= 0; --d) {  // odometer order, last digit fastest
      ++counts[rem % g];
      rem /= g;
    }
    int z = (int)multiset_rank(counts);
    for (int x = 0; x < 2; ++x)
      for (int yp = 0; yp < 3; ++yp) qt.q(x, t, yp) = qm.q(x, z, yp);
  }

  RiskKernel km(in.obj, msets, in.loss);
  RiskKernel kt(in.obj, tuples, in.loss);
  for (int k = 0; k < 2; ++k)
    CHECK(risk(km, qm, k) == doctest::Approx(risk(kt, qt, k)).epsilon(1e-12));
}

TEST_CASE("densify expands mixtures exactly") {
  Instance in = t2ext();
  RiskKernel kern(in.obj, in.learn, in.loss);
  Strategy mix;
  mix.nx = 1;
  mix.nz = 2;
  mix.ny = 2;
  mix.mixture.push_back({0.3, {1.0, 0.0}});
  mix.mixture.push_back({0.7, {0.0, 1.0}});

  Strategy dense = densify(kern, mix);
  REQUIRE(dense.dense());
  Strategy q1 = bayes_strategy(kern, {1.0, 0.0});
  Strategy q2 = bayes_strategy(kern, {0.0, 1.0});
  for (size_t i = 0; i < dense.probs.size(); ++i)
    CHECK(dense.probs[i] ==
          doctest::Approx(0.3 * q1.probs[i] + 0.7 * q2.probs[i]).epsilon(1e-15));

  // risk is linear, so the mixture risk is the weighted risk
  for (int k = 0; k < 2; ++k) {
    double want = 0.3 * risk(kern, q1, k) + 0.7 * risk(kern, q2, k);
    CHECK(risk(kern, mix, k) == doctest::Approx(want).epsilon(1e-12));
    CHECK(risk(kern, dense, k) == doctest::Approx(want).epsilon(1e-12));
  }

  CHECK_THROWS_AS(densify(kern, mix, 2), std::length_error);
  Strategy dd = densify(kern, dense);  // identity on dense input
  CHECK(dd.probs == dense.probs);
}

TEST_CASE("scaled deviation") {
  RiskCurve curve;
  curve.risks = {0.5, 0.2};
  ScalingProfile prof{{0.1, 0.2}, {2.0, 1.0}};
  auto dev = scaled_deviation(curve, prof);
  CHECK(dev[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(dev[1] == doctest::Approx(0.0).epsilon(1e-15));

  ScalingProfile bad{{0.0, 0.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(scaled_deviation(curve, bad), std::invalid_argument);
  ScalingProfile mismatched{{0.0}, {1.0}};
  CHECK_THROWS_AS(scaled_deviation(curve, mismatched), std::invalid_argument);
}

TEST_CASE("risk evaluation is deterministic") {
  std::mt19937_64 rng(31);
  Instance in = random_instance(rng, 3, 3, 2, 7);
  RiskKernel kern(in.obj, in.learn, in.loss);
  Strategy q = random_strategy(rng, 3, 7, 3);
  double first = risk(kern, q, 1);
  for (int rep = 0; rep < 5; ++rep) CHECK(risk(kern, q, 1) == first);  // bitwise equal
  CHECK(risk(in.obj, in.learn, in.loss, q, 1) == first);
}
