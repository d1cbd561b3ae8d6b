#include "padoa/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "padoa/lp.hpp"

namespace padoa {

namespace {

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

void check_dims(const BlockSpec& block, const Vec& x_i, const Vec& z_i) {
  if (static_cast<int>(x_i.size()) != block.nx || static_cast<int>(z_i.size()) != block.nz)
    throw std::invalid_argument("block evaluation: dimension mismatch");
}

Vec stack(const Vec& x_i, const Vec& z_i) {
  Vec v = x_i;
  v.insert(v.end(), z_i.begin(), z_i.end());
  return v;
}

}  // namespace

ObjectiveTerm ObjectiveTerm::affine(Vec a, double c) {
  ObjectiveTerm t;
  t.kind = Kind::Affine;
  t.coeffs = std::move(a);
  t.offset = c;
  return t;
}

ObjectiveTerm ObjectiveTerm::power(Vec q, double r, int p, double w) {
  if (p != 2 && p != 4) throw std::invalid_argument("power term: exponent must be 2 or 4");
  if (w < 0) throw std::invalid_argument("power term: weight must be >= 0");
  ObjectiveTerm t;
  t.kind = Kind::Power;
  t.coeffs = std::move(q);
  t.offset = r;
  t.exponent = p;
  t.weight = w;
  return t;
}

ObjectiveTerm ObjectiveTerm::abs_l1(Vec q, double r, double w) {
  if (w < 0) throw std::invalid_argument("abs term: weight must be >= 0");
  ObjectiveTerm t;
  t.kind = Kind::AbsL1;
  t.coeffs = std::move(q);
  t.offset = r;
  t.weight = w;
  return t;
}

int StructuredMicp::total_nx() const {
  int s = 0;
  for (const auto& b : blocks) s += b.nx;
  return s;
}

int StructuredMicp::total_nz() const {
  int s = 0;
  for (const auto& b : blocks) s += b.nz;
  return s;
}

int StructuredMicp::x_offset(int i) const {
  int s = 0;
  for (int k = 0; k < i; ++k) s += blocks[k].nx;
  return s;
}

int StructuredMicp::z_offset(int i) const {
  int s = 0;
  for (int k = 0; k < i; ++k) s += blocks[k].nz;
  return s;
}

double evaluate_term(const ObjectiveTerm& term, const Vec& v) {
  double s = dot(term.coeffs, v);
  switch (term.kind) {
    case ObjectiveTerm::Kind::Affine:
      return s + term.offset;
    case ObjectiveTerm::Kind::Power: {
      double d = s - term.offset;
      double d2 = d * d;
      return term.weight * (term.exponent == 2 ? d2 : d2 * d2);
    }
    case ObjectiveTerm::Kind::AbsL1:
      return term.weight * std::abs(s - term.offset);
  }
  return 0.0;
}

void accumulate_term_subgradient(const ObjectiveTerm& term, const Vec& v, Vec& g) {
  double scale = 0.0;
  switch (term.kind) {
    case ObjectiveTerm::Kind::Affine:
      scale = 1.0;
      break;
    case ObjectiveTerm::Kind::Power: {
      double d = dot(term.coeffs, v) - term.offset;
      scale = term.weight * (term.exponent == 2 ? 2.0 * d : 4.0 * d * d * d);
      break;
    }
    case ObjectiveTerm::Kind::AbsL1:
      scale = term.weight * sgn(dot(term.coeffs, v) - term.offset);
      break;
  }
  if (scale != 0.0) axpy(scale, term.coeffs, g);
}

double evaluate_objective(const BlockSpec& block, const Vec& x_i, const Vec& z_i) {
  check_dims(block, x_i, z_i);
  Vec v = stack(x_i, z_i);
  double total = 0.0;
  for (const auto& t : block.terms) total += evaluate_term(t, v);
  return total;
}

void subgradient(const BlockSpec& block, const Vec& x_i, const Vec& z_i, Vec& g_x, Vec& g_z) {
  check_dims(block, x_i, z_i);
  Vec v = stack(x_i, z_i);
  Vec g(v.size(), 0.0);
  for (const auto& t : block.terms) accumulate_term_subgradient(t, v, g);
  g_x.assign(g.begin(), g.begin() + block.nx);
  g_z.assign(g.begin() + block.nx, g.end());
}

double evaluate_objective(const StructuredMicp& p, const Vec& x, const Vec& z) {
  if (static_cast<int>(x.size()) != p.total_nx() || static_cast<int>(z.size()) != p.total_nz())
    throw std::invalid_argument("evaluate_objective: dimension mismatch");
  double total = 0.0;
  int xo = 0, zo = 0;
  for (const auto& b : p.blocks) {
    Vec xi(x.begin() + xo, x.begin() + xo + b.nx);
    Vec zi(z.begin() + zo, z.begin() + zo + b.nz);
    total += evaluate_objective(b, xi, zi);
    xo += b.nx;
    zo += b.nz;
  }
  return total;
}

StructuredMicp reformulate_integer_coupling(const IntegerCoupledMicp& p, double penalty) {
  if (!(penalty > 0)) throw std::invalid_argument("reformulate: penalty must be > 0");
  StructuredMicp out = p.base;
  if (p.coupling_z.empty()) return out;

  const int nblocks = out.num_blocks();
  // Locate each coupled integer variable and give it a continuous copy.
  std::vector<int> zoff(nblocks), xoff_old(nblocks);
  for (int i = 0; i < nblocks; ++i) {
    zoff[i] = out.z_offset(i);
    xoff_old[i] = out.x_offset(i);
  }
  int total_z = out.total_nz();

  // copy_col[g] = local continuous index of z_g's copy within its block
  std::vector<int> copy_local(total_z, -1), owner(total_z, -1);
  for (const auto& t : p.coupling_z) {
    if (t.col < 0 || t.col >= total_z)
      throw std::invalid_argument("reformulate: integer column out of range");
    if (copy_local[t.col] >= 0) continue;
    int blk = nblocks - 1;
    while (zoff[blk] > t.col) --blk;
    int local_z = t.col - zoff[blk];
    BlockSpec& b = out.blocks[blk];
    // New continuous variable with the convex hull of the integer box.
    b.bounds_x.push_back({b.bounds_z[local_z].lo, b.bounds_z[local_z].hi});
    for (auto& iq : b.ineqs) iq.coeffs.resize(b.nx + 1, 0.0);
    // widen existing terms: coefficient layout is (x..., z...) per block
    for (auto& term : b.terms) {
      Vec c(b.nx + 1 + b.nz, 0.0);
      for (int k = 0; k < b.nx; ++k) c[k] = term.coeffs[k];
      for (int k = 0; k < b.nz; ++k) c[b.nx + 1 + k] = term.coeffs[b.nx + k];
      term.coeffs = std::move(c);
    }
    int local_y = b.nx;
    b.nx += 1;
    // penalty * |y - z|
    Vec q(b.nx + b.nz, 0.0);
    q[local_y] = 1.0;
    q[b.nx + local_z] = -1.0;
    b.terms.push_back(ObjectiveTerm::abs_l1(std::move(q), 0.0, penalty));
    copy_local[t.col] = local_y;
    owner[t.col] = blk;
  }

  // Continuous indices moved: rebuild the coupling with the new offsets.
  std::vector<int> xoff_new(nblocks);
  for (int i = 0; i < nblocks; ++i) xoff_new[i] = out.x_offset(i);
  CouplingConstraint coupling;
  coupling.rhs = p.base.coupling.rhs;
  for (const auto& t : p.base.coupling.entries) {
    int blk = nblocks - 1;
    while (xoff_old[blk] > t.col) --blk;
    coupling.entries.push_back({t.row, xoff_new[blk] + (t.col - xoff_old[blk]), t.value});
  }
  for (const auto& t : p.coupling_z) {
    int blk = owner[t.col];
    coupling.entries.push_back({t.row, xoff_new[blk] + copy_local[t.col], t.value});
  }
  out.coupling = std::move(coupling);
  return out;
}

bool ValidationReport::passed() const {
  for (const auto& i : issues)
    if (!i.ok) return false;
  return true;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& i : issues)
    os << (i.ok ? "pass" : "FAIL") << "  " << i.check << (i.detail.empty() ? "" : ": " + i.detail)
       << "\n";
  return os.str();
}

ValidationReport validate(const StructuredMicp& p) {
  ValidationReport rep;
  auto add = [&](bool ok, std::string check, std::string detail = "") {
    rep.issues.push_back({ok, std::move(check), std::move(detail)});
  };

  add(!p.blocks.empty(), "at least one block");
  for (int i = 0; i < p.num_blocks(); ++i) {
    const BlockSpec& b = p.blocks[i];
    std::string tag = "block " + std::to_string(i);
    bool dims = static_cast<int>(b.bounds_x.size()) == b.nx &&
                static_cast<int>(b.bounds_z.size()) == b.nz;
    add(dims, tag + " bound vectors sized");
    if (!dims) continue;

    bool x_finite = true;
    for (const auto& bd : b.bounds_x)
      if (!std::isfinite(bd.lo) || !std::isfinite(bd.hi) || bd.lo > bd.hi) x_finite = false;
    add(x_finite, tag + " X_i compact", x_finite ? "" : "continuous bounds must be finite");

    bool z_finite = true;
    for (const auto& bd : b.bounds_z)
      if (!std::isfinite(bd.lo) || !std::isfinite(bd.hi) || bd.lo > bd.hi) z_finite = false;
    add(z_finite, tag + " Z_i compact", z_finite ? "" : "Z_i not compact");

    bool convex = true;
    std::string why;
    for (const auto& t : b.terms) {
      if (static_cast<int>(t.coeffs.size()) != b.nx + b.nz) {
        convex = false;
        why = "term coefficient length mismatch";
      }
      if (t.kind != ObjectiveTerm::Kind::Affine && t.weight < 0) {
        convex = false;
        why = "negative weight";
      }
      if (t.kind == ObjectiveTerm::Kind::Power && t.exponent % 2 != 0) {
        convex = false;
        why = "odd exponent";
      }
    }
    add(convex, tag + " terms convex", why);

    for (const auto& iq : b.ineqs)
      if (static_cast<int>(iq.coeffs.size()) != b.nx)
        add(false, tag + " inequality width", "row over continuous vars only");

    if (x_finite) {
      // Nonemptiness via LP feasibility of the block polytope.
      LinearProgram lp;
      for (const auto& bd : b.bounds_x) lp.add_var(bd.lo, bd.hi, 0.0);
      for (const auto& iq : b.ineqs) {
        std::vector<std::pair<int, double>> row;
        for (int j = 0; j < b.nx; ++j)
          if (iq.coeffs[j] != 0.0) row.push_back({j, iq.coeffs[j]});
        lp.add_ineq_row(row, iq.rhs);
      }
      if (b.nx > 0) {
        auto res = solve_lp(lp);
        add(res.status == LpStatus::Optimal, tag + " X_i nonempty",
            res.status == LpStatus::Optimal ? "" : "X_i empty");
      }
    }
  }

  const int nx = p.total_nx();
  bool cols_ok = true;
  for (const auto& t : p.coupling.entries)
    if (t.col < 0 || t.col >= nx || t.row < 0 || t.row >= p.coupling.rows()) cols_ok = false;
  add(cols_ok, "coupling indices in range");
  return rep;
}

}  // namespace padoa
