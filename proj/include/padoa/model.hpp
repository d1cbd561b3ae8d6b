#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "padoa/linalg.hpp"

namespace padoa {

// One additive piece of a block objective. Every term is convex over the
// block's box: weights are nonnegative and power exponents even. Coefficient
// vectors run over the block's stacked (x_i, z_i) variables.
struct ObjectiveTerm {
  enum class Kind : uint8_t { Affine, Power, AbsL1 };
  Kind kind = Kind::Affine;
  Vec coeffs;          // 'a' for Affine, 'q' otherwise; length nx + nz
  double offset = 0.0; // 'c' for Affine, 'r' otherwise
  int exponent = 2;    // Power only; 2 or 4
  double weight = 1.0; // Power / AbsL1 only; >= 0

  static ObjectiveTerm affine(Vec a, double c);
  static ObjectiveTerm power(Vec q, double r, int p, double w);
  static ObjectiveTerm abs_l1(Vec q, double r, double w);
};

struct LinearInequality {
  Vec coeffs;  // over the block's continuous variables
  double rhs = 0.0;
};

struct Bounds {
  double lo = 0.0, hi = 0.0;
};

// One block: a compact polytope for the continuous variables, a finite integer
// box, and a list of convex objective terms over (x_i, z_i).
struct BlockSpec {
  int nx = 0;
  int nz = 0;
  std::vector<Bounds> bounds_x;  // finite on both sides
  std::vector<Bounds> bounds_z;  // finite on both sides
  std::vector<LinearInequality> ineqs;
  std::vector<ObjectiveTerm> terms;
};

// Sparse affine coupling over the global continuous variables: A x = b.
struct CouplingConstraint {
  struct Triplet {
    int row;
    int col;  // global continuous index (blocks concatenated in order)
    double value;
  };
  std::vector<Triplet> entries;
  Vec rhs;

  int rows() const { return static_cast<int>(rhs.size()); }
};

struct StructuredMicp {
  std::vector<BlockSpec> blocks;
  CouplingConstraint coupling;

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  int total_nx() const;
  int total_nz() const;
  // First global continuous / integer index of block i.
  int x_offset(int i) const;
  int z_offset(int i) const;
};

double evaluate_term(const ObjectiveTerm& term, const Vec& v);
// Appends the term's subgradient at v into g (same length as v). The same
// scalar selection feeds both the x and z components, so the result is a
// joint subgradient; AbsL1 kinks use the sgn(0) = 0 selection.
void accumulate_term_subgradient(const ObjectiveTerm& term, const Vec& v, Vec& g);

double evaluate_objective(const BlockSpec& block, const Vec& x_i, const Vec& z_i);
// Joint subgradient of the block objective at (x_i, z_i), split into parts.
void subgradient(const BlockSpec& block, const Vec& x_i, const Vec& z_i, Vec& g_x, Vec& g_z);

double evaluate_objective(const StructuredMicp& p, const Vec& x, const Vec& z);

// Integer-coupled problem: A x + B z = b, with B given as triplets over the
// global integer variables.
struct IntegerCoupledMicp {
  StructuredMicp base;                                // carries A and b
  std::vector<CouplingConstraint::Triplet> coupling_z;  // B
};

// Rewrites integer coupling onto fresh continuous copies with L1 penalties:
// every coupled integer z gets a continuous y with box conv(bounds_z), the
// B-column moves onto y, and the block objective gains penalty * |y - z|.
// Returns a problem whose coupling touches continuous variables only.
StructuredMicp reformulate_integer_coupling(const IntegerCoupledMicp& p, double penalty);

struct ValidationIssue {
  bool ok = false;
  std::string check;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool passed() const;
  std::string to_string() const;
};

// Structural checks: finite boxes, nonempty polytopes (by LP feasibility),
// convexity flags, coupling index ranges.
ValidationReport validate(const StructuredMicp& p);

}  // namespace padoa
