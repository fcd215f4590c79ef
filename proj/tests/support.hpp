#pragma once

#include <random>
#include <string>
#include <vector>

#include "mindev/model.hpp"

// Shared fixtures: tiny hand-checkable instances and seeded random ones.

namespace mindev::test {

struct Instance {
  FiniteObject obj;
  LearningData learn;
  LossMatrix loss;
};

// One signal, two states, one model: p(a,1) = 0.3, p(a,2) = 0.7.
inline Instance t1() {
  Instance in;
  in.obj.signals = {"a"};
  in.obj.states = {"1", "2"};
  in.obj.models = {"t"};
  in.obj.p_xy = {0.3, 0.7};
  in.learn = trivial_learning(1);
  in.loss = zero_one_loss(2);
  return in;
}

// Two symmetric models on one signal: p(a,.;th1) = (0.8,0.2), th2 mirrored.
inline Instance t2() {
  Instance in;
  in.obj.signals = {"a"};
  in.obj.states = {"1", "2"};
  in.obj.models = {"th1", "th2"};
  in.obj.p_xy = {0.8, 0.2, 0.2, 0.8};
  in.learn = trivial_learning(2);
  in.loss = zero_one_loss(2);
  return in;
}

// t2 plus an informative observation: p_z(z1;th1) = 0.9, p_z(z1;th2) = 0.1.
inline Instance t2ext() {
  Instance in = t2();
  in.learn.values = {"z1", "z2"};
  in.learn.p_z = {0.9, 0.1, 0.1, 0.9};
  return in;
}

// One model, perfectly informative signals: p(a,1) = p(b,2) = 0.5.
inline Instance d1() {
  Instance in;
  in.obj.signals = {"a", "b"};
  in.obj.states = {"1", "2"};
  in.obj.models = {"t"};
  in.obj.p_xy = {0.5, 0.0, 0.0, 0.5};
  in.learn = trivial_learning(1);
  in.loss = zero_one_loss(2);
  return in;
}

inline std::vector<double> random_simplex_row(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> row(n);
  double sum = 0;
  for (double& v : row) sum += (v = u(rng));
  for (double& v : row) v /= sum;
  return row;
}

inline Instance random_instance(std::mt19937_64& rng, int nx, int ny, int nm, int nz) {
  Instance in;
  for (int i = 0; i < nx; ++i) in.obj.signals.push_back("x" + std::to_string(i));
  for (int j = 0; j < ny; ++j) in.obj.states.push_back("y" + std::to_string(j));
  for (int k = 0; k < nm; ++k) in.obj.models.push_back("m" + std::to_string(k));
  in.obj.p_xy.reserve((size_t)nm * nx * ny);
  for (int k = 0; k < nm; ++k) {
    auto joint = random_simplex_row(rng, nx * ny);
    in.obj.p_xy.insert(in.obj.p_xy.end(), joint.begin(), joint.end());
  }
  if (nz <= 1) {
    in.learn = trivial_learning(nm);
  } else {
    for (int l = 0; l < nz; ++l) in.learn.values.push_back("z" + std::to_string(l));
    for (int k = 0; k < nm; ++k) {
      auto row = random_simplex_row(rng, nz);
      in.learn.p_z.insert(in.learn.p_z.end(), row.begin(), row.end());
    }
  }
  in.loss = zero_one_loss(ny);
  return in;
}

inline Strategy random_strategy(std::mt19937_64& rng, int nx, int nz, int ny,
                                bool deterministic = false) {
  Strategy q = make_dense_strategy(nx, nz, ny);
  std::uniform_int_distribution<int> pick(0, ny - 1);
  for (int z = 0; z < nz; ++z)
    for (int x = 0; x < nx; ++x) {
      if (deterministic) {
        q.q(x, z, pick(rng)) = 1.0;
      } else {
        auto row = random_simplex_row(rng, ny);
        for (int yp = 0; yp < ny; ++yp) q.q(x, z, yp) = row[yp];
      }
    }
  return q;
}

inline Weights random_weights(std::mt19937_64& rng, int nm) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Weights v(nm);
  double sum = 0;
  for (double& w : v) sum += (w = u(rng));
  if (sum == 0) v[0] = 1.0;
  return v;
}

}  // namespace mindev::test
