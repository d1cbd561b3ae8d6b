#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "padoa/model.hpp"

namespace padoa {

// Supporting hyperplane of one block objective:
//   alpha' x_i + beta' z_i + gamma <= f_i(x_i, z_i)  over the block box.
struct Cut {
  enum class Origin : uint8_t { OuterIter, InnerBlock, Master };

  int block = 0;
  Vec alpha;
  Vec beta;
  double gamma = 0.0;
  Origin origin = Origin::OuterIter;

  double value(const Vec& x_i, const Vec& z_i) const {
    return dot(alpha, x_i) + dot(beta, z_i) + gamma;
  }
};

// Per-block cut lists with coefficient-level dedup (rounding at 1e-10) and a
// visited-integer-point registry realizing the collection of solved points.
class CutPool {
 public:
  CutPool() = default;
  explicit CutPool(int num_blocks) : cuts_(num_blocks) {}

  int num_blocks() const { return static_cast<int>(cuts_.size()); }
  // Returns true when the cut is new (not a duplicate after rounding).
  bool add(Cut c);
  int add_all(const std::vector<Cut>& cs);

  const std::vector<Cut>& block_cuts(int i) const { return cuts_.at(i); }
  int total_cuts() const;

  // Sum over blocks of the max cut value. Every block must hold at least one
  // cut; an empty block is a caller error (seed cuts first).
  double eval_model(const StructuredMicp& p, const Vec& x, const Vec& z) const;
  double eval_block(int i, const Vec& x_i, const Vec& z_i) const;

  // Keeps cuts active at the last master solution (eta slack <= 1e-6), always
  // retaining at least the maximal cut per block.
  CutPool pruned(const StructuredMicp& p, const Vec& x, const Vec& z, const Vec& eta) const;

  // Visited integer points (rounded); returns true when newly inserted.
  bool mark_visited(const Vec& z);
  bool is_visited(const Vec& z) const;
  int num_visited() const { return static_cast<int>(visited_.size()); }

  std::string dump_json() const;
  static CutPool load_json(const std::string& text);

 private:
  std::vector<std::vector<Cut>> cuts_;
  std::unordered_map<uint64_t, std::vector<std::pair<int, int>>> dedup_;  // hash -> (block, idx)
  std::unordered_map<std::string, bool> visited_;
};

// One cut per block from a fixed-integer solve at z, tight (within the inner
// tolerance) at the solve's optimizer.
struct FixedZSolution;
std::vector<Cut> make_cuts(const StructuredMicp& p, const FixedZSolution& sol, const Vec& z,
                           Cut::Origin origin = Cut::Origin::OuterIter);

std::string z_key(const Vec& z);

}  // namespace padoa
