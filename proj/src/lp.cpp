#include "padoa/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace padoa {

namespace {

constexpr double kFeasTol = 1e-7;
constexpr double kPivotTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr int kRefactorEvery = 50;

}  // namespace

int LinearProgram::add_var(double lo, double hi, double cost) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars() - 1;
}

void LinearProgram::add_eq_row(const std::vector<std::pair<int, double>>& coeffs, double rhs) {
  Vec row(num_vars(), 0.0);
  for (auto& [j, v] : coeffs) row.at(j) += v;
  eq_matrix.append_row(row);
  eq_rhs.push_back(rhs);
}

void LinearProgram::add_ineq_row(const std::vector<std::pair<int, double>>& coeffs, double rhs) {
  Vec row(num_vars(), 0.0);
  for (auto& [j, v] : coeffs) row.at(j) += v;
  ineq_matrix.append_row(row);
  ineq_rhs.push_back(rhs);
}

std::string LinearProgram::dump() const {
  std::ostringstream os;
  os.precision(17);
  os << "lp vars " << num_vars() << " eq " << num_eq() << " ineq " << num_ineq() << "\n";
  os << "min";
  for (double c : objective) os << " " << c;
  os << "\n";
  for (int i = 0; i < num_eq(); ++i) {
    os << "eq";
    for (int j = 0; j < num_vars(); ++j) os << " " << eq_matrix(i, j);
    os << " = " << eq_rhs[i] << "\n";
  }
  for (int i = 0; i < num_ineq(); ++i) {
    os << "le";
    for (int j = 0; j < num_vars(); ++j) os << " " << ineq_matrix(i, j);
    os << " <= " << ineq_rhs[i] << "\n";
  }
  for (int j = 0; j < num_vars(); ++j) os << "bnd " << lower[j] << " " << upper[j] << "\n";
  return os.str();
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

double LpResult::dual_objective(const LinearProgram& lp) const {
  double v = 0.0;
  for (int i = 0; i < lp.num_eq(); ++i) v += dual_eq[i] * lp.eq_rhs[i];
  for (int i = 0; i < lp.num_ineq(); ++i) v += dual_ineq[i] * lp.ineq_rhs[i];
  for (int j = 0; j < lp.num_vars(); ++j) {
    double d = dual_bounds[j];
    if (d > kDualTol) {
      v += std::isfinite(lp.lower[j]) ? d * lp.lower[j] : -kInf;
    } else if (d < -kDualTol) {
      v += std::isfinite(lp.upper[j]) ? d * lp.upper[j] : -kInf;
    }
  }
  return v;
}

double farkas_margin(const LinearProgram& lp, const Vec& farkas) {
  const int me = lp.num_eq(), mi = lp.num_ineq(), n = lp.num_vars();
  if (static_cast<int>(farkas.size()) != me + mi) return -kInf;
  for (int i = 0; i < mi; ++i)
    if (farkas[me + i] > kFeasTol) return -kInf;  // <= rows need nonpositive weight
  double rhs = 0.0;
  for (int i = 0; i < me; ++i) rhs += farkas[i] * lp.eq_rhs[i];
  for (int i = 0; i < mi; ++i) rhs += farkas[me + i] * lp.ineq_rhs[i];
  double sup = 0.0;
  for (int j = 0; j < n; ++j) {
    double w = 0.0;
    for (int i = 0; i < me; ++i) w += farkas[i] * lp.eq_matrix(i, j);
    for (int i = 0; i < mi; ++i) w += farkas[me + i] * lp.ineq_matrix(i, j);
    if (std::abs(w) <= 1e-12) continue;
    double best = w > 0 ? lp.upper[j] : lp.lower[j];
    if (!std::isfinite(best)) return -kInf;
    sup += w * best;
  }
  return rhs - sup;
}

// ---------------------------------------------------------------------------
// Basis factorization: dense LU with partial pivoting plus product-form eta
// updates; refactorized from scratch every kRefactorEvery pivots.
// ---------------------------------------------------------------------------

namespace {

class BasisFactor {
 public:
  bool factorize(int m, const std::vector<const double*>& cols) {
    m_ = m;
    lu_.assign(static_cast<size_t>(m_) * m_, 0.0);
    perm_.resize(m_);
    etas_.clear();
    for (int j = 0; j < m_; ++j)
      for (int i = 0; i < m_; ++i) at(i, j) = cols[j][i];
    for (int i = 0; i < m_; ++i) perm_[i] = i;
    for (int k = 0; k < m_; ++k) {
      int p = k;
      double best = std::abs(at(k, k));
      for (int i = k + 1; i < m_; ++i) {
        double v = std::abs(at(i, k));
        if (v > best) { best = v; p = i; }
      }
      if (best < kPivotTol) return false;
      if (p != k) {
        for (int j = 0; j < m_; ++j) std::swap(at(k, j), at(p, j));
        std::swap(perm_[k], perm_[p]);
      }
      const double piv = at(k, k);
      for (int i = k + 1; i < m_; ++i) {
        double f = at(i, k) / piv;
        at(i, k) = f;
        if (f == 0.0) continue;
        for (int j = k + 1; j < m_; ++j) at(i, j) -= f * at(k, j);
      }
    }
    return true;
  }

  // Solve B u = v in place.
  void ftran(Vec& v) const {
    Vec t(m_);
    for (int i = 0; i < m_; ++i) t[i] = v[perm_[i]];
    for (int i = 1; i < m_; ++i) {
      double s = t[i];
      const double* row = &lu_[static_cast<size_t>(i) * m_];
      for (int j = 0; j < i; ++j) s -= row[j] * t[j];
      t[i] = s;
    }
    for (int i = m_ - 1; i >= 0; --i) {
      double s = t[i];
      const double* row = &lu_[static_cast<size_t>(i) * m_];
      for (int j = i + 1; j < m_; ++j) s -= row[j] * t[j];
      t[i] = s / row[i];
    }
    v = std::move(t);
    // B_k^{-1} = E_k ... E_1 B_0^{-1}: apply etas oldest first.
    for (const Eta& e : etas_) {
      double piv = v[e.r] / e.d[e.r];
      for (int i = 0; i < m_; ++i) v[i] -= e.d[i] * piv;
      v[e.r] = piv;
    }
  }

  // Solve B' y = v in place.
  void btran(Vec& v) const {
    // (E' v)_r = v_r - (d'v - v_r)/d_r, other entries unchanged; newest first.
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const Eta& e = *it;
      double s = dot(e.d, v);
      v[e.r] -= (s - v[e.r]) / e.d[e.r];
    }
    // B0' y = w with P B0 = L U  =>  U' L' (P y) = w.
    Vec t(m_);
    for (int i = 0; i < m_; ++i) {
      double s = v[i];
      for (int j = 0; j < i; ++j) s -= lu_[static_cast<size_t>(j) * m_ + i] * t[j];
      t[i] = s / lu_[static_cast<size_t>(i) * m_ + i];
    }
    for (int i = m_ - 1; i >= 0; --i) {
      double s = t[i];
      for (int j = i + 1; j < m_; ++j) s -= lu_[static_cast<size_t>(j) * m_ + i] * t[j];
      t[i] = s;
    }
    for (int i = 0; i < m_; ++i) v[perm_[i]] = t[i];
  }

  void push_eta(int r, Vec d) { etas_.push_back({r, std::move(d)}); }
  int eta_count() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int r;
    Vec d;
  };

  double& at(int i, int j) { return lu_[static_cast<size_t>(i) * m_ + j]; }

  int m_ = 0;
  std::vector<double> lu_;
  std::vector<int> perm_;
  std::vector<Eta> etas_;
};

enum class VarState : uint8_t { Basic, AtLower, AtUpper, Free };

enum class LoopExit { Done, Unbounded, Infeasible, Failure };

}  // namespace

// ---------------------------------------------------------------------------
// SimplexSolver
// ---------------------------------------------------------------------------

struct SimplexSolver::Impl {
  const LinearProgram& lp;
  int n = 0;       // structural columns
  int me = 0, mi = 0, m = 0;
  int nreal = 0;   // n + mi (structural + slack)

  std::vector<Vec> cols;  // standard-form columns, each of length m
  Vec rhs;
  Vec col_lo, col_hi;
  Vec cost;               // phase-2 costs
  Vec work_cost;          // costs of the active phase
  std::vector<VarState> state;
  std::vector<int> basic;      // row -> column
  std::vector<int> basic_pos;  // column -> row, or -1
  Vec xval;
  std::vector<int> art_for_row;  // row -> artificial column, or -1

  BasisFactor factor;
  bool factor_valid = false;
  bool bland = false;
  int degen_count = 0;
  int iterations = 0;
  double dual_tol = kDualTol;
  Vec farkas_out;

  explicit Impl(const LinearProgram& prob) : lp(prob) {
    n = lp.num_vars();
    me = lp.num_eq();
    mi = lp.num_ineq();
    m = me + mi;
    if (n <= 0) throw std::invalid_argument("lp: at least one variable required");
    if (static_cast<int>(lp.lower.size()) != n || static_cast<int>(lp.upper.size()) != n)
      throw std::invalid_argument("lp: bound vector size mismatch");
    if ((me > 0 && lp.eq_matrix.cols() != n) || (mi > 0 && lp.ineq_matrix.cols() != n))
      throw std::invalid_argument("lp: row width mismatch");
    nreal = n + mi;
    cols.resize(nreal, Vec(m, 0.0));
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < me; ++i) cols[j][i] = lp.eq_matrix(i, j);
      for (int i = 0; i < mi; ++i) cols[j][me + i] = lp.ineq_matrix(i, j);
    }
    for (int i = 0; i < mi; ++i) cols[n + i][me + i] = 1.0;
    rhs = lp.eq_rhs;
    rhs.insert(rhs.end(), lp.ineq_rhs.begin(), lp.ineq_rhs.end());
    col_lo = lp.lower;
    col_hi = lp.upper;
    col_lo.resize(nreal, 0.0);
    col_hi.resize(nreal, kInf);
    cost = lp.objective;
    cost.resize(nreal, 0.0);
    state.assign(nreal, VarState::AtLower);
    basic.assign(m, -1);
    basic_pos.assign(nreal, -1);
    xval.assign(nreal, 0.0);
    art_for_row.assign(m, -1);
    double cmax = 0.0;
    for (double c : cost) cmax = std::max(cmax, std::abs(c));
    dual_tol = kDualTol * (1.0 + cmax);
  }

  int ncols() const { return static_cast<int>(cols.size()); }
  bool is_fixed(int j) const { return col_lo[j] == col_hi[j]; }

  void check_bounds_sane() const {
    for (int j = 0; j < n; ++j)
      if (col_lo[j] > col_hi[j] + 1e-12)
        throw std::invalid_argument("lp: crossed bounds on variable " + std::to_string(j));
  }

  void snap_nonbasic(int j) {
    switch (state[j]) {
      case VarState::AtLower: xval[j] = col_lo[j]; break;
      case VarState::AtUpper: xval[j] = col_hi[j]; break;
      case VarState::Free: xval[j] = 0.0; break;
      case VarState::Basic: break;
    }
  }

  void default_nonbasic_state(int j) {
    if (std::isfinite(col_lo[j])) state[j] = VarState::AtLower;
    else if (std::isfinite(col_hi[j])) state[j] = VarState::AtUpper;
    else state[j] = VarState::Free;
    snap_nonbasic(j);
  }

  bool refactorize() {
    std::vector<const double*> bc(m);
    for (int i = 0; i < m; ++i) bc[i] = cols[basic[i]].data();
    factor_valid = factor.factorize(m, bc);
    return factor_valid;
  }

  void compute_basic_values() {
    Vec r = rhs;
    for (int j = 0; j < ncols(); ++j) {
      if (basic_pos[j] >= 0 || xval[j] == 0.0) continue;
      axpy(-xval[j], cols[j], r);
    }
    factor.ftran(r);
    for (int i = 0; i < m; ++i) xval[basic[i]] = r[i];
  }

  Vec row_duals(const Vec& costs) {
    Vec y(m);
    for (int i = 0; i < m; ++i) y[i] = costs[basic[i]];
    factor.btran(y);
    return y;
  }

  double reduced_cost(int j, const Vec& y) const { return work_cost[j] - dot(cols[j].data(), y); }

  void maybe_bland() {
    if (!bland && degen_count > 3 * (m + ncols())) bland = true;
  }

  int max_iterations() const {
    long long lim = 5000LL + 200LL * (m + ncols());
    return static_cast<int>(std::min(lim, 500000LL));
  }

  // ---- primal simplex on the active costs; requires primal-feasible basis ----
  LoopExit run_primal(bool phase_two) {
    int pricing_rounds = 0;
    for (;;) {
      if (++pricing_rounds > max_iterations()) return LoopExit::Failure;
      if (!factor_valid || factor.eta_count() >= kRefactorEvery) {
        if (!refactorize()) return LoopExit::Failure;
        compute_basic_values();
      }
      Vec y = row_duals(work_cost);
      int q = -1, dir = 0;
      double best = dual_tol;
      for (int j = 0; j < ncols(); ++j) {
        if (basic_pos[j] >= 0 || is_fixed(j)) continue;
        double d = reduced_cost(j, y);
        double v = 0.0;
        int dj = 0;
        if (state[j] == VarState::AtLower) {
          if (d < -dual_tol) { v = -d; dj = +1; }
        } else if (state[j] == VarState::AtUpper) {
          if (d > dual_tol) { v = d; dj = -1; }
        } else {  // Free
          if (std::abs(d) > dual_tol) { v = std::abs(d); dj = d < 0 ? +1 : -1; }
        }
        if (dj == 0) continue;
        if (bland) { q = j; dir = dj; break; }
        if (v > best) { best = v; q = j; dir = dj; }
      }
      if (q < 0) return LoopExit::Done;

      Vec w = cols[q];
      factor.ftran(w);

      // Ratio test: entering moves by t*dir >= 0; basics change by -dir*t*w.
      double t_best = kInf;
      int r = -1;
      bool hit_upper = false;
      double own_gap = col_hi[q] - col_lo[q];  // inf when either bound missing
      if (std::isfinite(own_gap)) t_best = own_gap;
      double best_piv = 0.0;
      for (int i = 0; i < m; ++i) {
        double delta = -dir * w[i];
        if (std::abs(delta) <= kPivotTol) continue;
        int bi = basic[i];
        double lim;
        bool up;
        if (delta > 0) {
          if (!std::isfinite(col_hi[bi])) continue;
          lim = (col_hi[bi] - xval[bi]) / delta;
          up = true;
        } else {
          if (!std::isfinite(col_lo[bi])) continue;
          lim = (col_lo[bi] - xval[bi]) / delta;
          up = false;
        }
        if (lim < 0) lim = 0;
        bool take;
        if (!std::isfinite(t_best)) {
          take = true;
        } else {
          double tie = 1e-10 * (1.0 + std::min(t_best, lim));
          if (lim < t_best - tie) take = true;
          else if (lim <= t_best + tie && r >= 0)
            take = bland ? basic[i] < basic[r] : std::abs(delta) > best_piv;
          else take = false;
        }
        if (take) {
          t_best = std::min(t_best, lim);
          r = i;
          hit_upper = up;
          best_piv = std::abs(delta);
        }
      }
      if (!std::isfinite(t_best)) return phase_two ? LoopExit::Unbounded : LoopExit::Failure;

      ++iterations;
      if (t_best <= 1e-10) { ++degen_count; maybe_bland(); }

      if (r < 0) {
        // Bound flip, no basis change.
        for (int i = 0; i < m; ++i) xval[basic[i]] -= dir * t_best * w[i];
        state[q] = state[q] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
        snap_nonbasic(q);
        continue;
      }
      pivot(q, dir, w, r, t_best, hit_upper);
    }
  }

  void pivot(int q, int dir, Vec& w, int r, double t, bool leaving_to_upper) {
    double enter_val = xval[q] + dir * t;
    for (int i = 0; i < m; ++i) xval[basic[i]] -= dir * t * w[i];
    int leaving = basic[r];
    state[leaving] = leaving_to_upper ? VarState::AtUpper : VarState::AtLower;
    snap_nonbasic(leaving);
    basic_pos[leaving] = -1;
    basic[r] = q;
    basic_pos[q] = r;
    state[q] = VarState::Basic;
    xval[q] = enter_val;
    factor.push_eta(r, std::move(w));
  }

  // ---- dual simplex; requires dual-feasible basis ----
  LoopExit run_dual() {
    int rounds = 0;
    for (;;) {
      if (++rounds > max_iterations()) return LoopExit::Failure;
      if (!factor_valid || factor.eta_count() >= kRefactorEvery) {
        if (!refactorize()) return LoopExit::Failure;
        compute_basic_values();
      }
      // Leaving: most violated basic variable.
      int r = -1;
      bool low_side = false;
      double worst = kFeasTol;
      for (int i = 0; i < m; ++i) {
        int bi = basic[i];
        double tol = kFeasTol * (1.0 + std::abs(xval[bi]));
        double v_lo = col_lo[bi] - xval[bi];
        double v_hi = xval[bi] - col_hi[bi];
        double v = std::max(v_lo, v_hi);
        if (v <= tol) continue;
        if (bland) {
          if (r < 0 || bi < basic[r]) { r = i; low_side = v_lo >= v_hi; worst = v; }
        } else if (v > worst) {
          r = i;
          low_side = v_lo >= v_hi;
          worst = v;
        }
      }
      if (r < 0) return LoopExit::Done;

      Vec rho(m, 0.0);
      rho[r] = 1.0;
      factor.btran(rho);
      Vec y = row_duals(work_cost);

      int q = -1;
      double best_ratio = kInf, best_piv = 0.0;
      for (int j = 0; j < ncols(); ++j) {
        if (basic_pos[j] >= 0 || is_fixed(j)) continue;
        double alpha = dot(cols[j].data(), rho);
        if (std::abs(alpha) <= kPivotTol) continue;
        bool ok;
        if (state[j] == VarState::Free) {
          ok = true;
        } else if (low_side) {
          ok = (state[j] == VarState::AtLower && alpha < 0) ||
               (state[j] == VarState::AtUpper && alpha > 0);
        } else {
          ok = (state[j] == VarState::AtLower && alpha > 0) ||
               (state[j] == VarState::AtUpper && alpha < 0);
        }
        if (!ok) continue;
        double d = reduced_cost(j, y);
        double ratio = std::max(0.0, std::abs(d)) / std::abs(alpha);
        bool take;
        if (bland) {
          take = q < 0;
        } else if (q < 0) {
          take = true;
        } else {
          double tie = 1e-10 * (1.0 + std::min(best_ratio, ratio));
          if (ratio < best_ratio - tie) take = true;
          else if (ratio <= best_ratio + tie) take = std::abs(alpha) > best_piv;
          else take = false;
        }
        if (take) { q = j; best_ratio = std::min(best_ratio, ratio); best_piv = std::abs(alpha); }
        if (bland && q >= 0) break;
      }
      if (q < 0) {
        // No entering candidate: the violated row certifies infeasibility.
        farkas_out.assign(m, 0.0);
        for (int i = 0; i < m; ++i) farkas_out[i] = low_side ? -rho[i] : rho[i];
        return LoopExit::Infeasible;
      }

      Vec w = cols[q];
      factor.ftran(w);
      if (std::abs(w[r]) <= kPivotTol) {
        // Numerical disagreement between row and column views; refactorize.
        if (!refactorize()) return LoopExit::Failure;
        compute_basic_values();
        continue;
      }
      int bi = basic[r];
      double target = low_side ? col_lo[bi] : col_hi[bi];
      double step = (xval[bi] - target) / w[r];
      for (int i = 0; i < m; ++i) xval[basic[i]] -= step * w[i];
      double enter_val = xval[q] + step;
      state[bi] = low_side ? VarState::AtLower : VarState::AtUpper;
      xval[bi] = target;
      basic_pos[bi] = -1;
      basic[r] = q;
      basic_pos[q] = r;
      state[q] = VarState::Basic;
      xval[q] = enter_val;
      factor.push_eta(r, std::move(w));
      ++iterations;
      if (best_ratio <= 1e-12) { ++degen_count; maybe_bland(); }
    }
  }

  // ---- phase 1 ----
  void clear_artificials() {
    cols.resize(nreal);
    col_lo.resize(nreal);
    col_hi.resize(nreal);
    cost.resize(nreal);
    state.resize(nreal);
    basic_pos.resize(nreal);
    xval.resize(nreal);
    art_for_row.assign(m, -1);
  }

  int add_artificial(int row, double sign, double lo, double hi) {
    Vec c(m, 0.0);
    c[row] = sign;
    cols.push_back(std::move(c));
    col_lo.push_back(lo);
    col_hi.push_back(hi);
    cost.push_back(0.0);
    state.push_back(VarState::AtLower);
    basic_pos.push_back(-1);
    xval.push_back(0.0);
    art_for_row[row] = ncols() - 1;
    return ncols() - 1;
  }

  // Returns false when the problem is infeasible (farkas_out set) or on
  // numerical failure (failed set).
  bool phase_one(bool& failed) {
    failed = false;
    clear_artificials();
    for (int j = 0; j < nreal; ++j) default_nonbasic_state(j);
    Vec r = rhs;
    for (int j = 0; j < nreal; ++j)
      if (xval[j] != 0.0) axpy(-xval[j], cols[j], r);
    Vec phase1_cost(nreal, 0.0);
    for (int i = 0; i < m; ++i) {
      int a = add_artificial(i, r[i] >= 0 ? 1.0 : -1.0, 0.0, kInf);
      basic[i] = a;
      basic_pos[a] = i;
      state[a] = VarState::Basic;
      xval[a] = std::abs(r[i]);
      phase1_cost.push_back(1.0);
    }
    work_cost = phase1_cost;
    factor_valid = false;
    bland = false;
    degen_count = 0;
    LoopExit ex = run_primal(/*phase_two=*/false);
    if (ex != LoopExit::Done) { failed = true; return false; }

    double infeas = 0.0;
    for (int j = nreal; j < ncols(); ++j) infeas += xval[j];
    double scale = 1.0;
    for (double b : rhs) scale = std::max(scale, std::abs(b));
    if (infeas > kFeasTol * scale) {
      farkas_out = row_duals(work_cost);
      return false;
    }

    // Pivot leftover artificials out where possible, then freeze them at zero.
    for (int i = 0; i < m; ++i) {
      if (basic[i] < nreal) continue;
      Vec rho(m, 0.0);
      rho[i] = 1.0;
      factor.btran(rho);
      int q = -1;
      double best = 1e-7;
      for (int j = 0; j < nreal; ++j) {
        if (basic_pos[j] >= 0 || is_fixed(j)) continue;
        double alpha = std::abs(dot(cols[j].data(), rho));
        if (alpha > best) { best = alpha; q = j; }
      }
      if (q < 0) continue;  // redundant row; artificial stays basic at zero
      Vec w = cols[q];
      factor.ftran(w);
      if (std::abs(w[i]) <= kPivotTol) continue;
      pivot(q, +1, w, i, 0.0, /*leaving_to_upper=*/false);
      if (factor.eta_count() >= kRefactorEvery) {
        if (!refactorize()) { failed = true; return false; }
        compute_basic_values();
      }
    }
    for (int j = nreal; j < ncols(); ++j) {
      col_lo[j] = col_hi[j] = 0.0;
      if (basic_pos[j] < 0) { state[j] = VarState::AtLower; xval[j] = 0.0; }
    }
    return true;
  }

  // ---- result assembly ----
  double primal_objective() const {
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += cost[j] * xval[j];
    return v;
  }

  bool verify_current() {
    // Row residuals against the standard form.
    Vec r = rhs;
    for (int j = 0; j < ncols(); ++j)
      if (xval[j] != 0.0) axpy(-xval[j], cols[j], r);
    for (int i = 0; i < m; ++i)
      if (std::abs(r[i]) > kFeasTol * (1.0 + std::abs(rhs[i]))) return false;
    for (int j = 0; j < ncols(); ++j) {
      double tol = kFeasTol * (1.0 + std::abs(xval[j]));
      if (xval[j] < col_lo[j] - tol || xval[j] > col_hi[j] + tol) return false;
    }
    // Duality gap.
    Vec y = row_duals(work_cost);
    double dual = dot(y, rhs);
    for (int j = 0; j < ncols(); ++j) {
      if (basic_pos[j] >= 0 || xval[j] == 0.0) continue;
      dual += reduced_cost(j, y) * xval[j];
    }
    double prim = primal_objective();
    return std::abs(prim - dual) <= kFeasTol * (1.0 + std::abs(prim));
  }

  LpResult finalize_optimal() {
    LpResult res;
    res.status = LpStatus::Optimal;
    res.primal.assign(xval.begin(), xval.begin() + n);
    res.objective = primal_objective();
    Vec y = row_duals(work_cost);
    res.dual_eq.assign(y.begin(), y.begin() + me);
    res.dual_ineq.assign(y.begin() + me, y.begin() + m);
    res.dual_bounds.resize(n);
    for (int j = 0; j < n; ++j)
      res.dual_bounds[j] = basic_pos[j] >= 0 ? 0.0 : reduced_cost(j, y);
    res.iterations = iterations;
    return res;
  }

  LpResult make_status(LpStatus s) {
    LpResult res;
    res.status = s;
    res.iterations = iterations;
    if (s == LpStatus::Infeasible) res.farkas = farkas_out;
    return res;
  }

  LpResult cold_solve() {
    check_bounds_sane();
    iterations = 0;
    bool failed = false;
    if (!phase_one(failed))
      return make_status(failed ? LpStatus::NumericalFailure : LpStatus::Infeasible);
    work_cost = cost;
    bland = false;
    degen_count = 0;
    return finish_primal();
  }

  LpResult finish_primal() {
    for (int attempt = 0; attempt < 3; ++attempt) {
      LoopExit ex = run_primal(/*phase_two=*/true);
      if (ex == LoopExit::Unbounded) return make_status(LpStatus::Unbounded);
      if (ex != LoopExit::Done) return make_status(LpStatus::NumericalFailure);
      if (!refactorize()) return make_status(LpStatus::NumericalFailure);
      compute_basic_values();
      if (verify_current()) return finalize_optimal();
      // Feasibility drifted: restore it and take another pass.
      bool primal_ok = true;
      for (int i = 0; i < m && primal_ok; ++i) {
        int bi = basic[i];
        double tol = kFeasTol * (1.0 + std::abs(xval[bi]));
        if (xval[bi] < col_lo[bi] - tol || xval[bi] > col_hi[bi] + tol) primal_ok = false;
      }
      if (!primal_ok) {
        LoopExit dx = run_dual();
        if (dx == LoopExit::Infeasible) return make_status(LpStatus::Infeasible);
        if (dx == LoopExit::Failure) return make_status(LpStatus::NumericalFailure);
      }
    }
    return make_status(LpStatus::NumericalFailure);
  }

  LpResult warm_solve(const SimplexBasis& b) {
    check_bounds_sane();
    iterations = 0;
    if (static_cast<int>(b.basic.size()) != m ||
        static_cast<int>(b.at_upper.size()) != nreal)
      return cold_solve();
    clear_artificials();
    std::fill(basic_pos.begin(), basic_pos.end(), -1);
    std::vector<bool> used(nreal, false);
    bool bad = false;
    for (int i = 0; i < m && !bad; ++i) {
      int j = b.basic[i];
      if (j == -1) {
        int a = add_artificial(i, 1.0, 0.0, 0.0);
        basic[i] = a;
        basic_pos[a] = i;
        state[a] = VarState::Basic;
      } else if (j < 0 || j >= nreal || used[j]) {
        bad = true;
      } else {
        used[j] = true;
        basic[i] = j;
        basic_pos[j] = i;
        state[j] = VarState::Basic;
      }
    }
    if (bad) return cold_solve();
    for (int j = 0; j < nreal; ++j) {
      if (basic_pos[j] >= 0) continue;
      if (b.at_upper[j] && std::isfinite(col_hi[j])) state[j] = VarState::AtUpper;
      else if (std::isfinite(col_lo[j])) state[j] = VarState::AtLower;
      else if (std::isfinite(col_hi[j])) state[j] = VarState::AtUpper;
      else state[j] = VarState::Free;
      snap_nonbasic(j);
    }
    factor_valid = false;
    if (!refactorize()) return cold_solve();
    compute_basic_values();
    work_cost = cost;
    bland = false;
    degen_count = 0;

    // Repair dual feasibility by bound flips where possible.
    Vec y = row_duals(work_cost);
    for (int j = 0; j < ncols(); ++j) {
      if (basic_pos[j] >= 0 || is_fixed(j)) continue;
      double d = reduced_cost(j, y);
      if (state[j] == VarState::AtLower && d < -10 * dual_tol) {
        if (!std::isfinite(col_hi[j])) return cold_solve();
        state[j] = VarState::AtUpper;
        snap_nonbasic(j);
      } else if (state[j] == VarState::AtUpper && d > 10 * dual_tol) {
        if (!std::isfinite(col_lo[j])) return cold_solve();
        state[j] = VarState::AtLower;
        snap_nonbasic(j);
      } else if (state[j] == VarState::Free && std::abs(d) > 10 * dual_tol) {
        return cold_solve();
      }
    }
    compute_basic_values();

    LoopExit ex = run_dual();
    if (ex == LoopExit::Infeasible) {
      double margin = std_farkas_margin(farkas_out);
      if (margin > 1e-9) return make_status(LpStatus::Infeasible);
      return cold_solve();  // certificate did not verify; re-derive from scratch
    }
    if (ex == LoopExit::Failure) return cold_solve();
    return finish_primal();
  }

  // Margin of a row-combination certificate against the standard form.
  double std_farkas_margin(const Vec& f) const {
    double lhs = dot(f, rhs);
    double sup = 0.0;
    for (int j = 0; j < ncols(); ++j) {
      if (is_fixed(j) && col_lo[j] == 0.0) continue;
      double w = dot(cols[j].data(), f);
      if (std::abs(w) <= 1e-12) continue;
      double best = w > 0 ? col_hi[j] : col_lo[j];
      if (is_fixed(j)) best = col_lo[j];
      if (!std::isfinite(best)) return -kInf;
      sup += w * best;
    }
    return lhs - sup;
  }

  SimplexBasis export_basis() const {
    SimplexBasis b;
    b.basic.resize(m);
    for (int i = 0; i < m; ++i) b.basic[i] = basic[i] < nreal ? basic[i] : -1;
    b.at_upper.assign(nreal, 0);
    for (int j = 0; j < nreal; ++j)
      if (state[j] == VarState::AtUpper) b.at_upper[j] = 1;
    return b;
  }
};

SimplexSolver::SimplexSolver(const LinearProgram& lp) : impl_(std::make_unique<Impl>(lp)) {}
SimplexSolver::~SimplexSolver() = default;

LpResult SimplexSolver::solve() { return impl_->cold_solve(); }

LpResult SimplexSolver::solve_from(const SimplexBasis& basis) { return impl_->warm_solve(basis); }

void SimplexSolver::set_var_bounds(int j, double lo, double hi) {
  Impl& im = *impl_;
  if (j < 0 || j >= im.n) throw std::invalid_argument("set_var_bounds: bad index");
  im.col_lo[j] = lo;
  im.col_hi[j] = hi;
  if (im.basic_pos[j] < 0) {
    if (im.state[j] == VarState::Free && (std::isfinite(lo) || std::isfinite(hi)))
      im.default_nonbasic_state(j);
    if (im.state[j] == VarState::AtLower && !std::isfinite(lo)) im.default_nonbasic_state(j);
    if (im.state[j] == VarState::AtUpper && !std::isfinite(hi)) im.default_nonbasic_state(j);
    im.snap_nonbasic(j);
  }
}

SimplexBasis SimplexSolver::basis() const { return impl_->export_basis(); }

LpResult solve_lp(const LinearProgram& lp) {
  SimplexSolver solver(lp);
  return solver.solve();
}

}  // namespace padoa
