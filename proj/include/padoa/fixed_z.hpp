#pragma once

#include <vector>

#include "padoa/cuts.hpp"
#include "padoa/model.hpp"

namespace padoa {

enum class FixedZStatus { Optimal, Infeasible, NumericalFailure };

// Solution of the fixed-integer convex problem
//   min f(x, z)  s.t.  x = y | lambda,  A y = b,  y in X
// solved by cutting planes on per-block epigraph variables.
struct FixedZSolution {
  FixedZStatus status = FixedZStatus::NumericalFailure;
  double value = 0.0;   // f(x_star, z), within tol_inner of the optimum
  Vec x_star;           // total_nx
  Vec lambda;           // consensus-row duals of the final epigraph LP
  Vec mu;               // term-wise subgradient in z at (x_star, z)
  int inner_iters = 0;
  double achieved_gap = 0.0;

  // Per-block supporting hyperplanes assembled from the final LP duals:
  // support[i].value(x_i, z_i) == block model value at the optimizer, and the
  // cut underestimates f_i over the whole box. gamma is built from the model
  // value (not the raw f value) so validity holds to machine precision.
  std::vector<Cut> support;
  Vec block_model;      // per-block model value at the final LP optimizer

  // Infeasible case: certificate over [coupling rows, block polytope rows].
  Vec farkas;
};

struct FixedZOptions {
  double tol_inner = 1e-9;
  int max_iters = 5000;
};

FixedZSolution solve_fixed_z(const StructuredMicp& p, const Vec& z, double tol_inner);
FixedZSolution solve_fixed_z(const StructuredMicp& p, const Vec& z, const FixedZOptions& opts);

}  // namespace padoa
