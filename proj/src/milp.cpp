#include "padoa/milp.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>

namespace padoa {

namespace {

constexpr double kIntTol = 1e-6;

struct BoundChange {
  int var;
  double lo, hi;
};

struct Node {
  long long id = 0;
  double bound = -kInf;
  std::shared_ptr<const std::vector<BoundChange>> path;  // changes from root
  SimplexBasis basis;
  int frac_var = -1;
  double frac_val = 0.0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;                                // FIFO among equals
  }
};

// Most fractional variable; ties broken toward the lowest index.
int pick_branch_var(const Vec& x, const std::vector<int>& ints, double* val) {
  int best = -1;
  double best_dist = kIntTol;
  for (int j : ints) {
    double dist = std::min(x[j] - std::floor(x[j]), std::ceil(x[j]) - x[j]);
    if (dist > best_dist + 1e-12) {
      best_dist = dist;
      best = j;
      *val = x[j];
    }
  }
  return best;
}

}  // namespace

const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::Optimal: return "optimal";
    case MilpStatus::Infeasible: return "infeasible";
    case MilpStatus::GapLimit: return "gap_limit";
  }
  return "?";
}

MilpResult solve_milp(const MixedIntegerLinearProgram& milp, double gap_tol) {
  MilpOptions opts;
  opts.gap_tol = gap_tol;
  return solve_milp(milp, opts);
}

MilpResult solve_milp(const MixedIntegerLinearProgram& milp, const MilpOptions& opts) {
  if (opts.gap_tol < 0) throw std::invalid_argument("solve_milp: gap_tol must be >= 0");
  std::vector<int> ints = milp.integer_vars;
  std::sort(ints.begin(), ints.end());
  for (int j : ints) {
    if (j < 0 || j >= milp.lp.num_vars())
      throw std::invalid_argument("solve_milp: integer index out of range");
    if (!std::isfinite(milp.lp.lower[j]) || !std::isfinite(milp.lp.upper[j]))
      throw std::invalid_argument("solve_milp: integer variables need finite bounds");
  }

  MilpResult res;
  SimplexSolver solver(milp.lp);

  auto apply_path = [&](const std::vector<BoundChange>& path) {
    for (int j : ints) solver.set_var_bounds(j, milp.lp.lower[j], milp.lp.upper[j]);
    for (const auto& bc : path) solver.set_var_bounds(bc.var, bc.lo, bc.hi);
  };

  LpResult root = solver.solve();
  ++res.nodes;
  if (root.status == LpStatus::Infeasible) {
    res.status = MilpStatus::Infeasible;
    res.farkas = root.farkas;
    return res;
  }
  if (root.status == LpStatus::Unbounded)
    throw std::invalid_argument("solve_milp: unbounded LP relaxation");
  if (root.status == LpStatus::NumericalFailure)
    throw std::runtime_error("solve_milp: LP failure at root");

  bool have_inc = false;
  double inc_obj = opts.cutoff;
  Vec inc_x;
  long long next_id = 0;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;

  auto consider = [&](LpResult&& lr, std::shared_ptr<const std::vector<BoundChange>> path) {
    if (lr.status == LpStatus::Infeasible) return;
    if (lr.status != LpStatus::Optimal)
      throw std::runtime_error("solve_milp: LP failure inside the tree");
    if (lr.objective >= inc_obj - opts.gap_tol) return;  // dominated
    double fv = 0.0;
    int fj = pick_branch_var(lr.primal, ints, &fv);
    if (fj < 0) {
      have_inc = true;
      inc_obj = lr.objective;
      inc_x = std::move(lr.primal);
      return;
    }
    Node nd;
    nd.id = next_id++;
    nd.bound = lr.objective;
    nd.path = std::move(path);
    nd.basis = solver.basis();
    nd.frac_var = fj;
    nd.frac_val = fv;
    open.push(std::move(nd));
  };

  consider(std::move(root), std::make_shared<const std::vector<BoundChange>>());

  double frontier_bound = kInf;  // bound at the break point, if any
  while (!open.empty()) {
    Node nd = open.top();
    open.pop();
    if (opts.bound_log) opts.bound_log->push_back(nd.bound);
    if (nd.bound >= inc_obj - opts.gap_tol) {
      frontier_bound = nd.bound;  // best-bound order: remaining nodes dominated
      break;
    }
    if (res.nodes >= opts.node_limit) {
      res.status = MilpStatus::GapLimit;
      res.objective = have_inc ? inc_obj : kInf;
      res.incumbent = inc_x;
      res.best_bound = nd.bound;
      return res;
    }

    const int j = nd.frac_var;
    double node_lo = milp.lp.lower[j], node_hi = milp.lp.upper[j];
    for (const auto& bc : *nd.path)
      if (bc.var == j) { node_lo = bc.lo; node_hi = bc.hi; }
    const double floor_hi = std::min(std::floor(nd.frac_val), node_hi);
    const double ceil_lo = std::max(std::ceil(nd.frac_val), node_lo);

    apply_path(*nd.path);

    // Floor child first, warm from the parent basis; the ceil child continues
    // from the floor child's final basis, which stays dual feasible.
    solver.set_var_bounds(j, node_lo, floor_hi);
    LpResult floor_lr = solver.solve_from(nd.basis);
    ++res.nodes;
    {
      auto path = std::make_shared<std::vector<BoundChange>>(*nd.path);
      path->push_back({j, node_lo, floor_hi});
      consider(std::move(floor_lr), std::move(path));
    }

    solver.set_var_bounds(j, ceil_lo, node_hi);
    LpResult ceil_lr = solver.solve_from(solver.basis());
    ++res.nodes;
    {
      auto path = std::make_shared<std::vector<BoundChange>>(*nd.path);
      path->push_back({j, ceil_lo, node_hi});
      consider(std::move(ceil_lr), std::move(path));
    }
  }

  if (!have_inc) {
    res.status = MilpStatus::Infeasible;  // tree exhausted without a feasible point
    return res;
  }
  res.status = MilpStatus::Optimal;
  res.objective = inc_obj;
  res.incumbent = std::move(inc_x);
  res.best_bound = std::min(inc_obj, frontier_bound);
  return res;
}

}  // namespace padoa
