#include "padoa/enumerate.hpp"

#include <cmath>
#include <stdexcept>

namespace padoa {

EnumerateResult enumerate_solve(const StructuredMicp& p, double tol, long long max_points) {
  const int nz = p.total_nz();
  Vec lo(nz), hi(nz);
  {
    int off = 0;
    for (const auto& b : p.blocks)
      for (const auto& bd : b.bounds_z) {
        lo[off] = std::ceil(bd.lo - 1e-9);
        hi[off] = std::floor(bd.hi + 1e-9);
        if (lo[off] > hi[off]) throw std::invalid_argument("enumerate: empty integer box");
        ++off;
      }
  }
  double count = 1;
  for (int j = 0; j < nz; ++j) count *= hi[j] - lo[j] + 1;
  if (count > static_cast<double>(max_points))
    throw std::invalid_argument("enumerate: integer box too large (" + std::to_string(count) +
                                " points)");

  EnumerateResult res;
  Vec z = lo;
  for (;;) {
    auto sol = solve_fixed_z(p, z, tol);
    ++res.points;
    if (sol.status == FixedZStatus::Infeasible) {
      // Coupling feasibility does not depend on z; certify and stop.
      res.status = EnumerateStatus::Infeasible;
      res.farkas = std::move(sol.farkas);
      return res;
    }
    if (sol.status == FixedZStatus::Optimal && sol.value < res.value) {
      res.value = sol.value;
      res.x = sol.x_star;
      res.z = z;
      res.status = EnumerateStatus::Optimal;
    }
    int j = 0;
    for (; j < nz; ++j) {
      if (z[j] + 1 <= hi[j]) { z[j] += 1; break; }
      z[j] = lo[j];
    }
    if (j == nz) break;
  }
  return res;
}

}  // namespace padoa
