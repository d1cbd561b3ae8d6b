#pragma once

#include <vector>

#include "padoa/lp.hpp"

namespace padoa {

struct MixedIntegerLinearProgram {
  LinearProgram lp;
  std::vector<int> integer_vars;  // indices into lp variables; finite bounds required
};

enum class MilpStatus { Optimal, Infeasible, GapLimit };

const char* to_string(MilpStatus s);

struct MilpResult {
  MilpStatus status = MilpStatus::Infeasible;
  Vec incumbent;
  double objective = 0.0;
  double best_bound = 0.0;
  long long nodes = 0;
  Vec farkas;  // root certificate when Infeasible
};

struct MilpOptions {
  double gap_tol = 1e-8;        // absolute optimality gap
  long long node_limit = 5'000'000;
  double cutoff = kInf;          // known upper bound; prunes but needs no vector
  // Test hook: receives the node lower bound each time a node is expanded,
  // in expansion order (best-bound, so the sequence is nondecreasing).
  std::vector<double>* bound_log = nullptr;
};

// Best-bound branch and bound over the LP relaxation. Branches on the most
// fractional variable (ties: lowest index), floor child first; children warm
// start from the parent basis via the dual simplex. Deterministic by
// construction: node order is (bound, insertion id).
MilpResult solve_milp(const MixedIntegerLinearProgram& milp, const MilpOptions& opts = {});

MilpResult solve_milp(const MixedIntegerLinearProgram& milp, double gap_tol);

}  // namespace padoa
