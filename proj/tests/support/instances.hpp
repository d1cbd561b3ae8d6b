#pragma once

#include <random>

#include "padoa/model.hpp"

namespace padoa::testing {

// Two blocks with f_i = (x_i - z_i)^2 + z_i, x_i in [0,2], z_i in {0,1},
// coupled by x_1 + x_2 = 1. Enumeration: f*(0,0) = 0.5 at x = (0.5, 0.5),
// f*(1,0) = f*(0,1) = 1.0, f*(1,1) = 2.5, so the optimum is 0.5 at z = (0,0).
inline StructuredMicp two_block_quadratic() {
  StructuredMicp p;
  for (int i = 0; i < 2; ++i) {
    BlockSpec b;
    b.nx = 1;
    b.nz = 1;
    b.bounds_x = {{0.0, 2.0}};
    b.bounds_z = {{0.0, 1.0}};
    b.terms = {ObjectiveTerm::power({1.0, -1.0}, 0.0, 2, 1.0),
               ObjectiveTerm::affine({0.0, 1.0}, 0.0)};
    p.blocks.push_back(std::move(b));
  }
  p.coupling.entries = {{0, 0, 1.0}, {0, 1, 1.0}};
  p.coupling.rhs = {1.0};
  return p;
}

struct RandomSpec {
  int min_blocks = 2, max_blocks = 3;
  int max_nx = 2, max_nz = 2;
  bool with_coupling = true;
  bool allow_power = true;
  bool allow_abs = true;
  int power_exponent = 2;
};

// Seeded random block-separable instance with verified-feasible coupling:
// rows are anchored at a random point inside the box.
inline StructuredMicp random_instance(uint64_t seed, const RandomSpec& spec = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  std::uniform_real_distribution<double> W(0.1, 3.0);
  auto coin = [&](double p_true) { return std::uniform_real_distribution<double>(0, 1)(rng) < p_true; };

  StructuredMicp p;
  int nblocks = spec.min_blocks +
                static_cast<int>(rng() % (spec.max_blocks - spec.min_blocks + 1));
  for (int i = 0; i < nblocks; ++i) {
    BlockSpec b;
    b.nx = 1 + static_cast<int>(rng() % spec.max_nx);
    b.nz = 1 + static_cast<int>(rng() % spec.max_nz);
    for (int j = 0; j < b.nx; ++j) {
      double lo = U(rng);
      b.bounds_x.push_back({lo, lo + 0.5 + std::abs(U(rng))});
    }
    for (int j = 0; j < b.nz; ++j) b.bounds_z.push_back({0.0, 1.0});
    int nterms = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < nterms; ++t) {
      Vec q(b.nx + b.nz);
      for (double& v : q) v = U(rng);
      int kind = static_cast<int>(rng() % 3);
      if (kind == 1 && !spec.allow_power) kind = 0;
      if (kind == 2 && !spec.allow_abs) kind = 0;
      switch (kind) {
        case 0: b.terms.push_back(ObjectiveTerm::affine(q, U(rng))); break;
        case 1:
          b.terms.push_back(ObjectiveTerm::power(q, U(rng), spec.power_exponent, W(rng)));
          break;
        default: b.terms.push_back(ObjectiveTerm::abs_l1(q, U(rng), W(rng))); break;
      }
    }
    p.blocks.push_back(std::move(b));
  }
  if (spec.with_coupling) {
    int rows = 1 + static_cast<int>(rng() % 2);
    Vec anchor;
    for (const auto& b : p.blocks)
      for (const auto& bd : b.bounds_x) {
        std::uniform_real_distribution<double> pos(bd.lo, bd.hi);
        anchor.push_back(pos(rng));
      }
    int nx = static_cast<int>(anchor.size());
    for (int r = 0; r < rows; ++r) {
      double rhs = 0;
      for (int c = 0; c < nx; ++c) {
        double v = U(rng);
        if (coin(0.15)) v = 0.0;  // occasional sparsity
        if (v != 0.0) p.coupling.entries.push_back({r, c, v});
        rhs += v * anchor[c];
      }
      p.coupling.rhs.push_back(rhs);
    }
  }
  return p;
}

// Zero-coupling variant (A empty), used for the decoupled one-iteration cases.
inline StructuredMicp random_decoupled_instance(uint64_t seed, const RandomSpec& base = {}) {
  RandomSpec s = base;
  s.with_coupling = false;
  return random_instance(seed, s);
}

}  // namespace padoa::testing
