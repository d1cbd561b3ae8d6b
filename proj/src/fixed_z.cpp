#include "padoa/fixed_z.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "padoa/lp.hpp"

namespace padoa {

namespace {

// One tangent of f_i(., z_i) taken at a visited x point, with the matching
// z slope from the same scalar selections (carried for globally valid cuts).
struct Tangent {
  int block;
  Vec a;     // x slope, block-local
  Vec bz;    // z slope, block-local
  double k;  // intercept: tangent(x) = a'x + k at the fixed z
};

struct Layout {
  int N, NX, NZ, MC;
  std::vector<int> xoff, zoff;
  int x_col(int j) const { return j; }
  int y_col(int j) const { return NX + j; }
  int eta_col(int i) const { return 2 * NX + i; }
  int num_cols() const { return 2 * NX + N; }
};

Layout make_layout(const StructuredMicp& p) {
  Layout L;
  L.N = p.num_blocks();
  L.NX = p.total_nx();
  L.NZ = p.total_nz();
  L.MC = p.coupling.rows();
  L.xoff.resize(L.N);
  L.zoff.resize(L.N);
  for (int i = 0; i < L.N; ++i) {
    L.xoff[i] = p.x_offset(i);
    L.zoff[i] = p.z_offset(i);
  }
  return L;
}

int polytope_rows(const StructuredMicp& p) {
  int s = 0;
  for (const auto& b : p.blocks) s += static_cast<int>(b.ineqs.size());
  return s;
}

// Epigraph LP: variables (x free, y in X, eta free); rows
//   x - y = 0 (duals lambda), A y = b, polytope on y, then one row per tangent
//   a' x_i - eta_i <= -k.
LinearProgram build_epigraph_lp(const StructuredMicp& p, const Layout& L,
                                const std::vector<Tangent>& tans) {
  LinearProgram lp;
  for (int j = 0; j < L.NX; ++j) lp.add_var(-kInf, kInf, 0.0);  // x
  for (int i = 0; i < L.N; ++i)
    for (const auto& bd : p.blocks[i].bounds_x) lp.add_var(bd.lo, bd.hi, 0.0);  // y
  for (int i = 0; i < L.N; ++i) lp.add_var(-kInf, kInf, 1.0);                   // eta
  for (int j = 0; j < L.NX; ++j)
    lp.add_eq_row({{L.x_col(j), 1.0}, {L.y_col(j), -1.0}}, 0.0);
  {
    std::vector<std::vector<std::pair<int, double>>> rows(L.MC);
    for (const auto& t : p.coupling.entries) rows[t.row].push_back({L.y_col(t.col), t.value});
    for (int r = 0; r < L.MC; ++r) lp.add_eq_row(rows[r], p.coupling.rhs[r]);
  }
  for (int i = 0; i < L.N; ++i) {
    for (const auto& iq : p.blocks[i].ineqs) {
      std::vector<std::pair<int, double>> row;
      for (int l = 0; l < p.blocks[i].nx; ++l)
        if (iq.coeffs[l] != 0.0) row.push_back({L.y_col(L.xoff[i] + l), iq.coeffs[l]});
      lp.add_ineq_row(row, iq.rhs);
    }
  }
  for (const auto& t : tans) {
    std::vector<std::pair<int, double>> row;
    for (int l = 0; l < static_cast<int>(t.a.size()); ++l)
      if (t.a[l] != 0.0) row.push_back({L.x_col(L.xoff[t.block] + l), t.a[l]});
    row.push_back({L.eta_col(t.block), -1.0});
    lp.add_ineq_row(row, -t.k);
  }
  return lp;
}

// Feasibility of {y in X, A y = b} with a certificate over
// [coupling rows, polytope rows] on failure.
bool coupling_feasible(const StructuredMicp& p, const Layout& L, Vec* farkas) {
  LinearProgram lp;
  for (int i = 0; i < L.N; ++i)
    for (const auto& bd : p.blocks[i].bounds_x) lp.add_var(bd.lo, bd.hi, 0.0);
  std::vector<std::vector<std::pair<int, double>>> rows(L.MC);
  for (const auto& t : p.coupling.entries) rows[t.row].push_back({t.col, t.value});
  for (int r = 0; r < L.MC; ++r) lp.add_eq_row(rows[r], p.coupling.rhs[r]);
  for (int i = 0; i < L.N; ++i)
    for (const auto& iq : p.blocks[i].ineqs) {
      std::vector<std::pair<int, double>> row;
      for (int l = 0; l < p.blocks[i].nx; ++l)
        if (iq.coeffs[l] != 0.0) row.push_back({L.xoff[i] + l, iq.coeffs[l]});
      lp.add_ineq_row(row, iq.rhs);
    }
  auto res = solve_lp(lp);
  if (res.status == LpStatus::Optimal) return true;
  if (farkas) *farkas = res.farkas;
  return false;
}

// L1 projection of the bound midpoint onto the feasible set; assumes feasible.
Vec project_midpoint(const StructuredMicp& p, const Layout& L) {
  Vec mid;
  mid.reserve(L.NX);
  for (const auto& b : p.blocks)
    for (const auto& bd : b.bounds_x) mid.push_back(0.5 * (bd.lo + bd.hi));
  LinearProgram lp;
  for (int i = 0; i < L.N; ++i)
    for (const auto& bd : p.blocks[i].bounds_x) lp.add_var(bd.lo, bd.hi, 0.0);
  for (int j = 0; j < L.NX; ++j) lp.add_var(0.0, kInf, 1.0);  // t
  std::vector<std::vector<std::pair<int, double>>> rows(L.MC);
  for (const auto& t : p.coupling.entries) rows[t.row].push_back({t.col, t.value});
  for (int r = 0; r < L.MC; ++r) lp.add_eq_row(rows[r], p.coupling.rhs[r]);
  for (int i = 0; i < L.N; ++i)
    for (const auto& iq : p.blocks[i].ineqs) {
      std::vector<std::pair<int, double>> row;
      for (int l = 0; l < p.blocks[i].nx; ++l)
        if (iq.coeffs[l] != 0.0) row.push_back({L.xoff[i] + l, iq.coeffs[l]});
      lp.add_ineq_row(row, iq.rhs);
    }
  for (int j = 0; j < L.NX; ++j) {
    lp.add_ineq_row({{j, 1.0}, {L.NX + j, -1.0}}, mid[j]);
    lp.add_ineq_row({{j, -1.0}, {L.NX + j, -1.0}}, -mid[j]);
  }
  auto res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) return mid;  // caller validated feasibility already
  return Vec(res.primal.begin(), res.primal.begin() + L.NX);
}

}  // namespace

FixedZSolution solve_fixed_z(const StructuredMicp& p, const Vec& z, double tol_inner) {
  FixedZOptions opts;
  opts.tol_inner = tol_inner;
  return solve_fixed_z(p, z, opts);
}

FixedZSolution solve_fixed_z(const StructuredMicp& p, const Vec& z, const FixedZOptions& opts) {
  if (!(opts.tol_inner > 0)) throw std::invalid_argument("solve_fixed_z: tol_inner must be > 0");
  const Layout L = make_layout(p);
  if (static_cast<int>(z.size()) != L.NZ)
    throw std::invalid_argument("solve_fixed_z: z dimension mismatch");
  for (int i = 0; i < L.N; ++i)
    for (int l = 0; l < p.blocks[i].nz; ++l) {
      double v = z[L.zoff[i] + l];
      const auto& bd = p.blocks[i].bounds_z[l];
      if (v < bd.lo - 1e-9 || v > bd.hi + 1e-9)
        throw std::invalid_argument("solve_fixed_z: z outside integer bounds");
    }

  FixedZSolution sol;
  Vec farkas;
  if (!coupling_feasible(p, L, &farkas)) {
    sol.status = FixedZStatus::Infeasible;
    sol.farkas = std::move(farkas);
    return sol;
  }

  auto block_z = [&](int i) {
    return Vec(z.begin() + L.zoff[i], z.begin() + L.zoff[i] + p.blocks[i].nz);
  };
  auto block_x = [&](const Vec& x, int i) {
    return Vec(x.begin() + L.xoff[i], x.begin() + L.xoff[i] + p.blocks[i].nx);
  };

  std::vector<Tangent> tans;
  auto add_tangents = [&](const Vec& x) {
    for (int i = 0; i < L.N; ++i) {
      Vec xi = block_x(x, i), zi = block_z(i);
      Vec a, bz;
      subgradient(p.blocks[i], xi, zi, a, bz);
      double fi = evaluate_objective(p.blocks[i], xi, zi);
      double k = fi - dot(a, xi);
      tans.push_back({i, std::move(a), std::move(bz), k});
    }
  };

  double f_of = 0.0;
  auto eval_f = [&](const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < L.N; ++i)
      s += evaluate_objective(p.blocks[i], block_x(x, i), block_z(i));
    return s;
  };

  Vec x0 = project_midpoint(p, L);
  add_tangents(x0);

  const int poly = polytope_rows(p);
  SimplexBasis warm;
  bool have_warm = false;
  LpResult final_res;
  Vec y_point;
  double gap = kInf, best_gap = kInf;
  int stall = 0;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    LinearProgram lp = build_epigraph_lp(p, L, tans);
    SimplexSolver solver(lp);
    LpResult res;
    if (have_warm) {
      // Pad the previous basis: appended cut rows start with their slack basic.
      SimplexBasis b = warm;
      int old_rows = static_cast<int>(b.basic.size());
      int new_rows = lp.num_eq() + lp.num_ineq();
      int ncols_old = static_cast<int>(b.at_upper.size());
      for (int r = old_rows; r < new_rows; ++r)
        b.basic.push_back(lp.num_vars() + (lp.num_ineq() - (new_rows - r)));
      b.at_upper.resize(ncols_old + (new_rows - old_rows), 0);
      // at_upper layout is [structurals, slacks]; structural count unchanged,
      // so shift is unnecessary: slacks were already at the tail and new
      // slacks append after them.
      res = solver.solve_from(b);
    } else {
      res = solver.solve();
    }
    if (res.status != LpStatus::Optimal) {
      sol.status = FixedZStatus::NumericalFailure;
      return sol;
    }
    sol.inner_iters = iter;
    y_point.assign(res.primal.begin() + L.NX, res.primal.begin() + 2 * L.NX);
    f_of = eval_f(y_point);
    gap = f_of - res.objective;
    final_res = std::move(res);
    warm = solver.basis();
    have_warm = true;

    if (gap <= opts.tol_inner) break;
    if (gap < best_gap - 1e-12 * (1.0 + std::abs(f_of))) {
      best_gap = gap;
      stall = 0;
    } else if (++stall >= 60) {
      break;  // numerical floor reached; achieved_gap reports the truth
    }
    if (iter == opts.max_iters) break;
    add_tangents(y_point);
  }

  if (gap > opts.tol_inner && gap > std::max(10 * opts.tol_inner, 1e-7 * (1.0 + std::abs(f_of)))) {
    sol.status = FixedZStatus::NumericalFailure;
    return sol;
  }

  sol.status = FixedZStatus::Optimal;
  sol.value = f_of;
  sol.x_star = y_point;
  sol.achieved_gap = std::max(gap, 0.0);
  sol.lambda.assign(final_res.dual_eq.begin(), final_res.dual_eq.begin() + L.NX);
  sol.mu.resize(L.NZ);
  for (int i = 0; i < L.N; ++i) {
    Vec gx, gz;
    subgradient(p.blocks[i], block_x(y_point, i), block_z(i), gx, gz);
    for (int l = 0; l < p.blocks[i].nz; ++l) sol.mu[L.zoff[i] + l] = gz[l];
  }
  sol.block_model.resize(L.N);
  for (int i = 0; i < L.N; ++i) sol.block_model[i] = final_res.primal[L.eta_col(i)];

  // Per-block support cut: convex combination of tangents weighted by the
  // final cut-row duals (clamped and normalized so validity is exact).
  std::vector<Vec> alpha(L.N), beta(L.N);
  Vec const_at_z(L.N, 0.0), wsum(L.N, 0.0);
  for (int i = 0; i < L.N; ++i) {
    alpha[i].assign(p.blocks[i].nx, 0.0);
    beta[i].assign(p.blocks[i].nz, 0.0);
  }
  for (size_t t = 0; t < tans.size(); ++t) {
    double theta = -final_res.dual_ineq[poly + t];
    if (theta <= 0) continue;
    int i = tans[t].block;
    wsum[i] += theta;
    axpy(theta, tans[t].a, alpha[i]);
    axpy(theta, tans[t].bz, beta[i]);
    const_at_z[i] += theta * tans[t].k;
  }
  sol.support.resize(L.N);
  for (int i = 0; i < L.N; ++i) {
    Cut c;
    c.block = i;
    Vec zi = block_z(i);
    if (wsum[i] > 1e-6) {
      double inv = 1.0 / wsum[i];
      for (double& v : alpha[i]) v *= inv;
      for (double& v : beta[i]) v *= inv;
      c.alpha = std::move(alpha[i]);
      c.beta = std::move(beta[i]);
      c.gamma = const_at_z[i] * inv - dot(c.beta, zi);
    } else {
      // Degenerate duals: fall back to the tangent at the optimizer, which is
      // tight at f_i rather than at the model value.
      Vec xi = block_x(y_point, i);
      Vec a, bz;
      subgradient(p.blocks[i], xi, zi, a, bz);
      double fi = evaluate_objective(p.blocks[i], xi, zi);
      c.alpha = std::move(a);
      c.beta = std::move(bz);
      c.gamma = fi - dot(c.alpha, xi) - dot(c.beta, zi);
      sol.block_model[i] = fi;
    }
    sol.support[i] = std::move(c);
  }
  return sol;
}

}  // namespace padoa
