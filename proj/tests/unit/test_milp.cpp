#include <cmath>
#include <random>

#include "doctest.h"
#include "padoa/milp.hpp"

using namespace padoa;

namespace {

// Exhaustive enumeration oracle for MILPs whose integer part is small: fixes
// every integer assignment and solves the remaining LP.
double enumerate_milp(const MixedIntegerLinearProgram& milp, Vec* arg = nullptr) {
  const auto& ints = milp.integer_vars;
  std::vector<long> lo(ints.size()), hi(ints.size()), cur(ints.size());
  for (size_t k = 0; k < ints.size(); ++k) {
    lo[k] = std::lround(milp.lp.lower[ints[k]]);
    hi[k] = std::lround(milp.lp.upper[ints[k]]);
    cur[k] = lo[k];
  }
  double best = kInf;
  for (;;) {
    LinearProgram lp = milp.lp;
    for (size_t k = 0; k < ints.size(); ++k) {
      lp.lower[ints[k]] = static_cast<double>(cur[k]);
      lp.upper[ints[k]] = static_cast<double>(cur[k]);
    }
    auto r = solve_lp(lp);
    if (r.status == LpStatus::Optimal && r.objective < best) {
      best = r.objective;
      if (arg) *arg = r.primal;
    }
    size_t k = 0;
    for (; k < ints.size(); ++k) {
      if (++cur[k] <= hi[k]) break;
      cur[k] = lo[k];
    }
    if (k == ints.size()) break;
  }
  return best;
}

}  // namespace

TEST_CASE("milp: rounding up") {
  MixedIntegerLinearProgram m;
  int x = m.lp.add_var(0.0, 3.0, 1.0);
  m.lp.add_ineq_row({{x, -1.0}}, -1.5);  // x >= 1.5
  m.integer_vars = {x};
  auto r = solve_milp(m, 1e-8);
  REQUIRE(r.status == MilpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(2.0));
  CHECK(r.incumbent[x] == doctest::Approx(2.0));
}

TEST_CASE("milp: binary tie resolved deterministically") {
  MixedIntegerLinearProgram m;
  int x = m.lp.add_var(0.0, 1.0, -1.0);
  int y = m.lp.add_var(0.0, 1.0, -1.0);
  m.lp.add_ineq_row({{x, 1.0}, {y, 1.0}}, 1.0);
  m.integer_vars = {x, y};
  auto r = solve_milp(m, 1e-8);
  REQUIRE(r.status == MilpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-1.0));
  CHECK(r.incumbent[x] == doctest::Approx(1.0));
  CHECK(r.incumbent[y] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("milp: knapsack") {
  // weights (2,3,4,5,9), values (3,4,5,8,10), capacity 10. The exhaustive
  // oracle puts the optimum at 15 = items {1,2,4} (weights 2+3+5).
  const double w[5] = {2, 3, 4, 5, 9};
  const double v[5] = {3, 4, 5, 8, 10};
  MixedIntegerLinearProgram m;
  std::vector<std::pair<int, double>> row;
  for (int j = 0; j < 5; ++j) {
    m.lp.add_var(0.0, 1.0, -v[j]);
    m.integer_vars.push_back(j);
    row.push_back({j, w[j]});
  }
  m.lp.add_ineq_row(row, 10.0);

  double best = 0;
  for (int mask = 0; mask < 32; ++mask) {
    double tw = 0, tv = 0;
    for (int j = 0; j < 5; ++j)
      if (mask & (1 << j)) { tw += w[j]; tv += v[j]; }
    if (tw <= 10.0) best = std::max(best, tv);
  }
  CHECK(best == doctest::Approx(15.0));

  auto r = solve_milp(m, 1e-8);
  REQUIRE(r.status == MilpStatus::Optimal);
  CHECK(-r.objective == doctest::Approx(best));
}

TEST_CASE("milp: infeasible propagates farkas") {
  MixedIntegerLinearProgram m;
  int x = m.lp.add_var(0.0, 1.0, 1.0);
  m.lp.add_ineq_row({{x, -1.0}}, -3.0);  // x >= 3
  m.integer_vars = {x};
  auto r = solve_milp(m, 1e-8);
  REQUIRE(r.status == MilpStatus::Infeasible);
  CHECK(farkas_margin(m.lp, r.farkas) > 1e-9);
}

TEST_CASE("milp: integer infeasible (fractional-only feasible set)") {
  MixedIntegerLinearProgram m;
  int x = m.lp.add_var(0.0, 1.0, 1.0);
  m.lp.add_ineq_row({{x, 1.0}}, 0.6);
  m.lp.add_ineq_row({{x, -1.0}}, -0.4);  // 0.4 <= x <= 0.6
  m.integer_vars = {x};
  auto r = solve_milp(m, 1e-8);
  CHECK(r.status == MilpStatus::Infeasible);
}

TEST_CASE("milp: bound monotonicity and oracle equivalence on random instances") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    int nbin = 1 + static_cast<int>(rng() % 12);
    int ncont = static_cast<int>(rng() % 3);
    MixedIntegerLinearProgram m;
    for (int j = 0; j < nbin; ++j) {
      m.lp.add_var(0.0, static_cast<double>(1 + rng() % 2), coef(rng));
      m.integer_vars.push_back(j);
    }
    for (int j = 0; j < ncont; ++j) m.lp.add_var(-1.0, 2.0, coef(rng));
    int rows = static_cast<int>(rng() % 4);
    // anchor rows on a random integer point so the instance stays feasible
    Vec x0(m.lp.num_vars());
    for (int j = 0; j < nbin; ++j)
      x0[j] = static_cast<double>(rng() % (std::lround(m.lp.upper[j]) + 1));
    for (int j = nbin; j < m.lp.num_vars(); ++j) x0[j] = 0.5;
    for (int i = 0; i < rows; ++i) {
      std::vector<std::pair<int, double>> row;
      double lhs = 0;
      for (int j = 0; j < m.lp.num_vars(); ++j) {
        double c = coef(rng);
        row.push_back({j, c});
        lhs += c * x0[j];
      }
      m.lp.add_ineq_row(row, lhs + 0.25 * std::abs(coef(rng)));
    }

    std::vector<double> bounds;
    MilpOptions opts;
    opts.gap_tol = 1e-9;
    opts.bound_log = &bounds;
    auto r = solve_milp(m, opts);
    REQUIRE(r.status == MilpStatus::Optimal);
    for (size_t i = 1; i < bounds.size(); ++i) CHECK(bounds[i] >= bounds[i - 1] - 1e-9);

    double oracle = enumerate_milp(m);
    CHECK(r.objective == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(r.best_bound <= r.objective + 1e-9);
    for (int j : m.integer_vars)
      CHECK(std::abs(r.incumbent[j] - std::round(r.incumbent[j])) <= 1e-6);
  }
}

TEST_CASE("milp: pruning soundness on small instances") {
  // Re-enumerate and confirm the incumbent matches the exhaustive optimum,
  // i.e. no pruned node hid a better solution.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    MixedIntegerLinearProgram m;
    for (int j = 0; j < 6; ++j) {
      m.lp.add_var(0.0, 1.0, coef(rng));
      m.integer_vars.push_back(j);
    }
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < 6; ++j) row.push_back({j, std::abs(coef(rng))});
    m.lp.add_ineq_row(row, 2.5);
    auto r = solve_milp(m, 1e-8);
    REQUIRE(r.status == MilpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(enumerate_milp(m)).epsilon(1e-9));
  }
}

TEST_CASE("milp: cutoff prunes without losing the optimum") {
  MixedIntegerLinearProgram m;
  int x = m.lp.add_var(0.0, 3.0, 1.0);
  m.lp.add_ineq_row({{x, -1.0}}, -1.5);
  m.integer_vars = {x};
  MilpOptions opts;
  opts.cutoff = 2.0 + 1e-6;  // strictly above the optimum
  auto r = solve_milp(m, opts);
  REQUIRE(r.status == MilpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(2.0));
}

TEST_CASE("milp: deterministic repeat solves") {
  MixedIntegerLinearProgram m;
  for (int j = 0; j < 8; ++j) {
    m.lp.add_var(0.0, 1.0, (j % 2 ? -1.3 : 0.7) + 0.01 * j);
    m.integer_vars.push_back(j);
  }
  std::vector<std::pair<int, double>> row;
  for (int j = 0; j < 8; ++j) row.push_back({j, 1.0 + 0.1 * j});
  m.lp.add_ineq_row(row, 3.0);
  auto a = solve_milp(m, 1e-8), b = solve_milp(m, 1e-8);
  CHECK(a.incumbent == b.incumbent);
  CHECK(a.nodes == b.nodes);
}
