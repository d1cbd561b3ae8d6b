#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "padoa/lp.hpp"
#include "padoa/model.hpp"

using namespace padoa;

TEST_CASE("model: term evaluation") {
  CHECK(evaluate_term(ObjectiveTerm::affine({1, 0}, 2.0), {3, 1}) == doctest::Approx(5.0));
  CHECK(evaluate_term(ObjectiveTerm::power({1}, 1.0, 2, 1.0), {3}) == doctest::Approx(4.0));
  CHECK(evaluate_term(ObjectiveTerm::abs_l1({1, -1}, 0.0, 10.0), {0.5, 1}) == doctest::Approx(5.0));
}

TEST_CASE("model: term subgradients") {
  BlockSpec b;
  b.nx = 1;
  b.nz = 0;
  b.bounds_x = {{-5, 5}};
  Vec gx, gz;

  b.terms = {ObjectiveTerm::power({1}, 0.0, 2, 1.0)};
  subgradient(b, {3}, {}, gx, gz);
  CHECK(gx[0] == doctest::Approx(6.0));

  b.terms = {ObjectiveTerm::abs_l1({1}, 0.0, 1.0)};
  subgradient(b, {0}, {}, gx, gz);
  CHECK(gx[0] == doctest::Approx(0.0));  // kink selection sgn(0) = 0

  b.terms = {ObjectiveTerm::power({1}, 1.0, 4, 1.0)};
  subgradient(b, {2}, {}, gx, gz);
  CHECK(gx[0] == doctest::Approx(4.0));  // 4 (x-1)^3
}

TEST_CASE("model: dimension mismatch rejected") {
  BlockSpec b;
  b.nx = 2;
  b.nz = 1;
  b.bounds_x = {{0, 1}, {0, 1}};
  b.bounds_z = {{0, 1}};
  b.terms = {ObjectiveTerm::affine({1, 1, 1}, 0.0)};
  CHECK_THROWS_AS(evaluate_objective(b, {1.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("model: convexity guards") {
  CHECK_THROWS_AS(ObjectiveTerm::power({1}, 0.0, 3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ObjectiveTerm::power({1}, 0.0, 2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ObjectiveTerm::abs_l1({1}, 0.0, -2.0), std::invalid_argument);
}

TEST_CASE("model: objective additive over terms and blocks") {
  StructuredMicp p;
  BlockSpec b1;
  b1.nx = 1;
  b1.nz = 1;
  b1.bounds_x = {{0, 2}};
  b1.bounds_z = {{0, 1}};
  b1.terms = {ObjectiveTerm::power({1, -1}, 0.0, 2, 1.0), ObjectiveTerm::affine({0, 1}, 0.0)};
  BlockSpec b2 = b1;
  p.blocks = {b1, b2};

  Vec x = {1.5, 0.25}, z = {1, 0};
  double whole = evaluate_objective(p, x, z);
  double parts = evaluate_objective(b1, {1.5}, {1.0}) + evaluate_objective(b2, {0.25}, {0.0});
  CHECK(whole == doctest::Approx(parts));

  BlockSpec split = b1;
  split.terms = {b1.terms[0]};
  double t0 = evaluate_objective(split, {1.5}, {1.0});
  split.terms = {b1.terms[1]};
  double t1 = evaluate_objective(split, {1.5}, {1.0});
  CHECK(t0 + t1 == doctest::Approx(evaluate_objective(b1, {1.5}, {1.0})));
}

TEST_CASE("model: subgradient inequality on random points") {
  // f(v') >= f(v) + g'(v' - v) over the box, for every term family.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  BlockSpec b;
  b.nx = 2;
  b.nz = 1;
  b.bounds_x = {{-2, 2}, {-2, 2}};
  b.bounds_z = {{-2, 2}};
  for (int trial = 0; trial < 1000; ++trial) {
    b.terms.clear();
    int which = trial % 3;
    Vec q = {U(rng), U(rng), U(rng)};
    double r = U(rng), w = std::abs(U(rng));
    if (which == 0) b.terms.push_back(ObjectiveTerm::affine(q, r));
    if (which == 1) b.terms.push_back(ObjectiveTerm::power(q, r, (trial % 2) ? 2 : 4, w));
    if (which == 2) b.terms.push_back(ObjectiveTerm::abs_l1(q, r, w));

    Vec x = {U(rng), U(rng)}, z = {U(rng)};
    Vec xp = {U(rng), U(rng)}, zp = {U(rng)};
    Vec gx, gz;
    subgradient(b, x, z, gx, gz);
    double f = evaluate_objective(b, x, z);
    double fp = evaluate_objective(b, xp, zp);
    double lin = f + gx[0] * (xp[0] - x[0]) + gx[1] * (xp[1] - x[1]) + gz[0] * (zp[0] - z[0]);
    CHECK(fp >= lin - 1e-9 * (1 + std::abs(fp)));
  }
}

TEST_CASE("model: reformulation rewrites integer coupling") {
  // x1 + z2 = 1 with z2 in {0,1} becomes x1 + y2 = 1 plus 100|y2 - z2|.
  IntegerCoupledMicp p;
  BlockSpec b1;
  b1.nx = 1;
  b1.nz = 0;
  b1.bounds_x = {{0, 1}};
  b1.terms = {ObjectiveTerm::affine({1}, 0.0)};
  BlockSpec b2;
  b2.nx = 0;
  b2.nz = 1;
  b2.bounds_z = {{0, 1}};
  b2.terms = {ObjectiveTerm::affine({1}, 0.0)};
  p.base.blocks = {b1, b2};
  p.base.coupling.entries = {{0, 0, 1.0}};  // x1
  p.base.coupling.rhs = {1.0};
  p.coupling_z = {{0, 0, 1.0}};  // z2 (global integer index 0 lives in block 2)

  StructuredMicp out = reformulate_integer_coupling(p, 100.0);
  REQUIRE(out.blocks[1].nx == 1);
  CHECK(out.blocks[1].bounds_x[0].lo == 0.0);
  CHECK(out.blocks[1].bounds_x[0].hi == 1.0);
  REQUIRE(out.blocks[1].terms.size() == 2);
  const auto& pen = out.blocks[1].terms.back();
  CHECK(pen.kind == ObjectiveTerm::Kind::AbsL1);
  CHECK(pen.weight == doctest::Approx(100.0));
  CHECK(pen.coeffs == Vec{1.0, -1.0});  // y - z within block 2
  // coupling now reads x1 + y2 = 1 over global continuous indices {0, 1}
  REQUIRE(out.coupling.entries.size() == 2);
  CHECK(out.coupling.entries[0].col == 0);
  CHECK(out.coupling.entries[1].col == 1);
  CHECK(validate(out).passed());

  // value agreement at matched points: y = z makes the penalty vanish
  double v = evaluate_objective(out, {0.5, 1.0}, {1.0});
  CHECK(v == doctest::Approx(0.5 + 1.0));
}

TEST_CASE("model: reformulation with no integer coupling is the identity") {
  IntegerCoupledMicp p;
  BlockSpec b;
  b.nx = 1;
  b.nz = 1;
  b.bounds_x = {{0, 1}};
  b.bounds_z = {{0, 1}};
  b.terms = {ObjectiveTerm::affine({1, 1}, 0.0)};
  p.base.blocks = {b};
  p.base.coupling.entries = {{0, 0, 1.0}};
  p.base.coupling.rhs = {0.5};
  StructuredMicp out = reformulate_integer_coupling(p, 1e4);
  CHECK(out.blocks[0].nx == 1);
  CHECK(out.blocks[0].terms.size() == 1);
  CHECK(out.coupling.entries.size() == 1);
}

TEST_CASE("model: reformulation rejects nonpositive penalty") {
  IntegerCoupledMicp p;
  p.base.blocks.emplace_back();
  CHECK_THROWS_AS(reformulate_integer_coupling(p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(reformulate_integer_coupling(p, -1.0), std::invalid_argument);
}

TEST_CASE("model: validate flags non-compact and empty sets") {
  StructuredMicp p;
  BlockSpec b;
  b.nx = 0;
  b.nz = 1;
  b.bounds_z = {{0.0, kInf}};
  p.blocks = {b};
  auto rep = validate(p);
  CHECK(!rep.passed());
  bool saw = false;
  for (const auto& i : rep.issues)
    if (!i.ok && i.detail == "Z_i not compact") saw = true;
  CHECK(saw);

  StructuredMicp p2;
  BlockSpec b2;
  b2.nx = 1;
  b2.bounds_x = {{-5, 5}};
  b2.ineqs = {{{1.0}, -1.0}, {{-1.0}, 0.0}};  // x <= -1 and x >= 0
  p2.blocks = {b2};
  auto rep2 = validate(p2);
  CHECK(!rep2.passed());
  bool saw_empty = false;
  for (const auto& i : rep2.issues)
    if (!i.ok && i.detail == "X_i empty") saw_empty = true;
  CHECK(saw_empty);
}
