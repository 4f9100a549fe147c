#ifndef CRNKIT_DECOMPOSITION_HPP
#define CRNKIT_DECOMPOSITION_HPP

#include <algorithm>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnkit/network.hpp"
#include "crnkit/subspace.hpp"

namespace crnkit {

/// A decomposition: a partition of the reaction index set in canonical
/// form (ascending within blocks, blocks ordered by smallest member), with
/// the induced subnetworks and their summaries.
class Decomposition {
 public:
  Decomposition(const Network& net, std::vector<std::vector<std::size_t>> blocks)
      : blocks_(std::move(blocks)) {
    canonicalize_and_check(net.num_reactions());
    for (const auto& b : blocks_) {
      subnetworks_.push_back(net.subnetwork(b));
      summaries_.push_back(subnetworks_.back().summarize());
      subspaces_.push_back(subnetworks_.back().stoichiometric_subspace());
    }
  }

  std::size_t num_blocks() const { return blocks_.size(); }
  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
  const std::vector<Network>& subnetworks() const { return subnetworks_; }
  const std::vector<NetworkSummary>& summaries() const { return summaries_; }
  const std::vector<Subspace>& subspaces() const { return subspaces_; }

  bool trivial() const { return blocks_.size() == 1; }

  /// Ordered list of blocks, each an ordered list of reaction labels.
  std::vector<std::vector<std::string>> serialize(const Network& net) const {
    std::vector<std::vector<std::string>> out;
    for (const auto& b : blocks_) {
      std::vector<std::string> labels;
      for (std::size_t q : b) labels.push_back(net.reaction(q).label);
      out.push_back(std::move(labels));
    }
    return out;
  }

 private:
  void canonicalize_and_check(std::size_t r) {
    std::vector<bool> seen(r, false);
    std::size_t total = 0;
    for (auto& b : blocks_) {
      if (b.empty()) throw std::invalid_argument("decomposition: empty block");
      std::sort(b.begin(), b.end());
      for (std::size_t q : b) {
        if (q >= r) throw std::invalid_argument("decomposition: reaction index out of range");
        if (seen[q]) throw std::invalid_argument("decomposition: overlapping blocks");
        seen[q] = true;
        ++total;
      }
    }
    if (total != r) throw std::invalid_argument("decomposition: blocks do not cover the reaction set");
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
  }

  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<Network> subnetworks_;
  std::vector<NetworkSummary> summaries_;
  std::vector<Subspace> subspaces_;
};

inline Decomposition make_decomposition(const Network& net,
                                        std::vector<std::vector<std::size_t>> blocks) {
  return Decomposition(net, std::move(blocks));
}

inline Decomposition trivial_decomposition(const Network& net) {
  std::vector<std::size_t> all(net.num_reactions());
  for (std::size_t q = 0; q < all.size(); ++q) all[q] = q;
  return Decomposition(net, {all});
}

inline Decomposition linkage_class_decomposition(const Network& net) {
  return Decomposition(net, net.linkage_class_reactions());
}

enum class CommonComplexClass { C_decomposition, C_star_decomposition, neither };

struct DecompositionProfile {
  bool independent = false;
  bool incidence_independent = false;
  bool bi_independent = false;
  bool weakly_reversible = false;  // all subnetworks weakly reversible
  bool zdd = false;                // all subnetwork deficiencies zero
  std::vector<std::size_t> common_complexes;  // C_D, indices into net
  CommonComplexClass common_class = CommonComplexClass::neither;
  long delta = 0;
  long delta_sum = 0;  // sum of block deficiencies
};

inline DecompositionProfile profile(const Network& net, const Decomposition& d) {
  DecompositionProfile p;
  NetworkSummary total = net.summarize();
  p.delta = total.delta;

  std::size_t rank_sum = 0;
  long nl_sum = 0;
  p.weakly_reversible = true;
  p.zdd = true;
  for (const auto& s : d.summaries()) {
    rank_sum += s.s;
    nl_sum += static_cast<long>(s.n) - static_cast<long>(s.l);
    p.delta_sum += s.delta;
    if (!s.weakly_reversible) p.weakly_reversible = false;
    if (s.delta != 0) p.zdd = false;
  }
  p.independent = rank_sum == total.s;
  p.incidence_independent = nl_sum == static_cast<long>(total.n) - static_cast<long>(total.l);
  p.bi_independent = p.independent && p.incidence_independent;

  // deficiency relations are theorems; violation means the linear algebra
  // or graph counts are inconsistent
  if (p.independent && p.delta > p.delta_sum)
    throw std::logic_error("internal: independent decomposition with delta > sum delta_i");
  if (p.incidence_independent && p.delta < p.delta_sum)
    throw std::logic_error("internal: incidence independent decomposition with delta < sum delta_i");

  // C_D: complexes of the ambient network appearing in >= 2 blocks
  std::vector<std::set<RVec>> block_complexes;
  for (const auto& sub : d.subnetworks())
    block_complexes.emplace_back(sub.complexes().begin(), sub.complexes().end());
  for (std::size_t c = 0; c < net.num_complexes(); ++c) {
    std::size_t hits = 0;
    for (const auto& bc : block_complexes)
      if (bc.count(net.complexes()[c])) ++hits;
    if (hits >= 2) p.common_complexes.push_back(c);
  }
  p.common_class = p.common_complexes.empty() ? CommonComplexClass::C_decomposition
                   : p.common_complexes.size() == 1 ? CommonComplexClass::C_star_decomposition
                                                    : CommonComplexClass::neither;
  return p;
}

/// True iff every block of `fine` is contained in some block of `coarse`.
inline bool is_coarsening(const Decomposition& fine, const Decomposition& coarse) {
  for (const auto& fb : fine.blocks()) {
    bool contained = false;
    for (const auto& cb : coarse.blocks()) {
      if (std::includes(cb.begin(), cb.end(), fb.begin(), fb.end())) {
        contained = true;
        break;
      }
    }
    if (!contained) return false;
  }
  return true;
}

/// Merges the listed block indices (groups of indices into d.blocks()) into
/// single blocks; unlisted blocks pass through unchanged.
inline Decomposition coarsen(const Network& net, const Decomposition& d,
                             const std::vector<std::vector<std::size_t>>& merge_groups) {
  std::vector<bool> used(d.num_blocks(), false);
  std::vector<std::vector<std::size_t>> blocks;
  for (const auto& grp : merge_groups) {
    std::vector<std::size_t> merged;
    for (std::size_t bi : grp) {
      if (bi >= d.num_blocks() || used[bi])
        throw std::invalid_argument("coarsen: bad merge specification");
      used[bi] = true;
      merged.insert(merged.end(), d.blocks()[bi].begin(), d.blocks()[bi].end());
    }
    if (!merged.empty()) blocks.push_back(std::move(merged));
  }
  for (std::size_t bi = 0; bi < d.num_blocks(); ++bi)
    if (!used[bi]) blocks.push_back(d.blocks()[bi]);
  return Decomposition(net, std::move(blocks));
}

}  // namespace crnkit

#endif  // CRNKIT_DECOMPOSITION_HPP
