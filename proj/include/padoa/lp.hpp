#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "padoa/linalg.hpp"

namespace padoa {

// min c'x  s.t.  E x = h,  G x <= g,  lo <= x <= hi.
// Bounds may be +-inf; equality/inequality blocks may be empty.
struct LinearProgram {
  Vec objective;
  Mat eq_matrix;    // E
  Vec eq_rhs;       // h
  Mat ineq_matrix;  // G
  Vec ineq_rhs;     // g
  Vec lower, upper;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_eq() const { return static_cast<int>(eq_rhs.size()); }
  int num_ineq() const { return static_cast<int>(ineq_rhs.size()); }

  int add_var(double lo, double hi, double cost = 0.0);
  // Sparse row input; untouched coefficients are zero.
  void add_eq_row(const std::vector<std::pair<int, double>>& coeffs, double rhs);
  void add_ineq_row(const std::vector<std::pair<int, double>>& coeffs, double rhs);

  // Plain text dump for bug reports.
  std::string dump() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

const char* to_string(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::NumericalFailure;
  Vec primal;            // structural variables only
  double objective = 0.0;
  Vec dual_eq;           // y_e, one per equality row
  Vec dual_ineq;         // y_i, one per inequality row (<= rows carry y_i <= 0)
  Vec dual_bounds;       // reduced costs of structural variables
  Vec farkas;            // len num_eq+num_ineq, present iff Infeasible
  int iterations = 0;

  // Sign convention: c = E'y_e + G'y_i + dual_bounds at optimality, so the
  // dual of a row written as (x - y = 0) is directly the subgradient selection
  // the cut machinery needs.
  double dual_objective(const LinearProgram& lp) const;
};

// Basis snapshot for warm starts (branch-and-bound children, appended cut rows).
struct SimplexBasis {
  std::vector<int> basic;          // column index per row of the standard form
  std::vector<uint8_t> at_upper;   // per standard-form column: nonbasic at upper?
};

// Dense bounded-variable revised simplex.
//
// Two-phase primal for cold starts, dual simplex for warm starts after bound
// changes or appended inequality rows. Dantzig pricing with a Bland fallback
// after 3*(rows+cols) degenerate pivots; LU basis factorization refreshed
// every 50 pivots; pivot tolerance 1e-9, feasibility tolerance 1e-7.
//
// A solver instance owns mutable workspace and is single-threaded; run one
// instance per thread on shared immutable LinearProgram inputs.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp);
  ~SimplexSolver();
  SimplexSolver(const SimplexSolver&) = delete;
  SimplexSolver& operator=(const SimplexSolver&) = delete;

  LpResult solve();
  // Warm start from a basis of compatible shape (e.g. the parent node's in
  // branch and bound). Falls back to a cold solve when the basis is unusable.
  LpResult solve_from(const SimplexBasis& basis);

  // Tighten/relax a structural variable's bounds (branching).
  void set_var_bounds(int j, double lo, double hi);

  SimplexBasis basis() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper.
LpResult solve_lp(const LinearProgram& lp);

// Checks a Farkas vector against the original rows: returns the certified
// margin  f'rhs - sup_box f'(rows * x),  which is > 0 for a valid certificate.
double farkas_margin(const LinearProgram& lp, const Vec& farkas);

}  // namespace padoa
