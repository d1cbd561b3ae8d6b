#include "padoa/cuts.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "padoa/fixed_z.hpp"

namespace padoa {

namespace {

constexpr double kDedupRound = 1e-10;

double rounded(double v) { return std::round(v / kDedupRound) * kDedupRound; }

uint64_t hash_mix(uint64_t h, double v) {
  uint64_t bits;
  double r = rounded(v);
  if (r == 0.0) r = 0.0;  // normalize -0
  static_assert(sizeof(bits) == sizeof(r));
  std::memcpy(&bits, &r, sizeof(bits));
  h ^= bits + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

bool same_rounded(const Cut& a, const Cut& b) {
  if (a.block != b.block || a.alpha.size() != b.alpha.size() || a.beta.size() != b.beta.size())
    return false;
  if (rounded(a.gamma) != rounded(b.gamma)) return false;
  for (size_t k = 0; k < a.alpha.size(); ++k)
    if (rounded(a.alpha[k]) != rounded(b.alpha[k])) return false;
  for (size_t k = 0; k < a.beta.size(); ++k)
    if (rounded(a.beta[k]) != rounded(b.beta[k])) return false;
  return true;
}

}  // namespace

std::string z_key(const Vec& z) {
  std::ostringstream os;
  for (double v : z) os << std::llround(v) << ",";
  return os.str();
}

bool CutPool::add(Cut c) {
  if (c.block < 0 || c.block >= num_blocks()) throw std::invalid_argument("cut: bad block index");
  uint64_t h = static_cast<uint64_t>(c.block);
  h = hash_mix(h, c.gamma);
  for (double v : c.alpha) h = hash_mix(h, v);
  for (double v : c.beta) h = hash_mix(h, v);
  auto& bucket = dedup_[h];
  for (auto& [blk, idx] : bucket)
    if (blk == c.block && same_rounded(cuts_[blk][idx], c)) return false;
  bucket.push_back({c.block, static_cast<int>(cuts_[c.block].size())});
  cuts_[c.block].push_back(std::move(c));
  return true;
}

int CutPool::add_all(const std::vector<Cut>& cs) {
  int fresh = 0;
  for (const Cut& c : cs) fresh += add(c) ? 1 : 0;
  return fresh;
}

int CutPool::total_cuts() const {
  int s = 0;
  for (const auto& v : cuts_) s += static_cast<int>(v.size());
  return s;
}

double CutPool::eval_block(int i, const Vec& x_i, const Vec& z_i) const {
  const auto& list = cuts_.at(i);
  if (list.empty())
    throw std::logic_error("cut pool: block " + std::to_string(i) +
                           " has no cuts; model undefined (seed cuts first)");
  double best = -kInf;
  for (const Cut& c : list) best = std::max(best, c.value(x_i, z_i));
  return best;
}

double CutPool::eval_model(const StructuredMicp& p, const Vec& x, const Vec& z) const {
  if (p.num_blocks() != num_blocks()) throw std::invalid_argument("cut pool: block count mismatch");
  double total = 0.0;
  int xo = 0, zo = 0;
  for (int i = 0; i < num_blocks(); ++i) {
    Vec xi(x.begin() + xo, x.begin() + xo + p.blocks[i].nx);
    Vec zi(z.begin() + zo, z.begin() + zo + p.blocks[i].nz);
    total += eval_block(i, xi, zi);
    xo += p.blocks[i].nx;
    zo += p.blocks[i].nz;
  }
  return total;
}

CutPool CutPool::pruned(const StructuredMicp& p, const Vec& x, const Vec& z, const Vec& eta) const {
  CutPool out(num_blocks());
  int xo = 0, zo = 0;
  for (int i = 0; i < num_blocks(); ++i) {
    Vec xi(x.begin() + xo, x.begin() + xo + p.blocks[i].nx);
    Vec zi(z.begin() + zo, z.begin() + zo + p.blocks[i].nz);
    xo += p.blocks[i].nx;
    zo += p.blocks[i].nz;
    const auto& list = cuts_.at(i);
    int best_idx = -1;
    double best_val = -kInf;
    bool kept_any = false;
    for (size_t k = 0; k < list.size(); ++k) {
      double v = list[k].value(xi, zi);
      if (v > best_val) { best_val = v; best_idx = static_cast<int>(k); }
      if (eta[i] - v <= 1e-6) {
        out.add(list[k]);
        kept_any = true;
      }
    }
    if (!kept_any && best_idx >= 0) out.add(list[best_idx]);  // tie to the max
  }
  out.visited_ = visited_;
  return out;
}

bool CutPool::mark_visited(const Vec& z) {
  auto [it, fresh] = visited_.try_emplace(z_key(z), true);
  (void)it;
  return fresh;
}

bool CutPool::is_visited(const Vec& z) const { return visited_.count(z_key(z)) > 0; }

std::string CutPool::dump_json() const {
  nlohmann::json j;
  j["blocks"] = nlohmann::json::array();
  for (const auto& list : cuts_) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Cut& c : list) {
      arr.push_back({{"alpha", c.alpha},
                     {"beta", c.beta},
                     {"gamma", c.gamma},
                     {"origin", static_cast<int>(c.origin)}});
    }
    j["blocks"].push_back(std::move(arr));
  }
  nlohmann::json vis = nlohmann::json::array();
  for (const auto& [k, v] : visited_) vis.push_back(k);
  j["visited"] = std::move(vis);
  return j.dump();
}

CutPool CutPool::load_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  CutPool pool(static_cast<int>(j.at("blocks").size()));
  int blk = 0;
  for (const auto& arr : j.at("blocks")) {
    for (const auto& cj : arr) {
      Cut c;
      c.block = blk;
      c.alpha = cj.at("alpha").get<Vec>();
      c.beta = cj.at("beta").get<Vec>();
      c.gamma = cj.at("gamma").get<double>();
      c.origin = static_cast<Cut::Origin>(cj.at("origin").get<int>());
      pool.add(std::move(c));
    }
    ++blk;
  }
  for (const auto& k : j.at("visited")) pool.visited_.emplace(k.get<std::string>(), true);
  return pool;
}

std::vector<Cut> make_cuts(const StructuredMicp& p, const FixedZSolution& sol, const Vec& z,
                           Cut::Origin origin) {
  if (sol.status != FixedZStatus::Optimal)
    throw std::invalid_argument("make_cuts: solution not optimal");
  (void)z;
  std::vector<Cut> out = sol.support;
  if (static_cast<int>(out.size()) != p.num_blocks())
    throw std::logic_error("make_cuts: support size mismatch");
  for (Cut& c : out) c.origin = origin;
  return out;
}

}  // namespace padoa
