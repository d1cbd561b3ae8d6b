#pragma once

#include "padoa/fixed_z.hpp"
#include "padoa/model.hpp"

namespace padoa {

enum class EnumerateStatus { Optimal, Infeasible };

struct EnumerateResult {
  EnumerateStatus status = EnumerateStatus::Infeasible;
  double value = kInf;
  Vec x;
  Vec z;
  long long points = 0;  // integer points visited
  Vec farkas;
};

// Brute-force reference: walks every z in the integer box and solves the
// fixed-integer convex problem at each. Intended as the correctness oracle
// for the iterative engines, not for production sizes.
EnumerateResult enumerate_solve(const StructuredMicp& p, double tol = 1e-9,
                                long long max_points = 1LL << 22);

}  // namespace padoa
