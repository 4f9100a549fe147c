#ifndef CRNKIT_WR_CF_HPP
#define CRNKIT_WR_CF_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "crnkit/cycles.hpp"
#include "crnkit/decomposition.hpp"
#include "crnkit/kinetics.hpp"
#include "crnkit/network.hpp"

namespace crnkit {

/// A simple cycle through an NF node, tagged with the CF-subset of the
/// branch reaction (the unique arc of the cycle leaving the anchor).
struct NFCycle {
  std::vector<std::size_t> arcs;
  std::size_t anchor = 0;
  std::size_t branch_reaction = 0;
  std::size_t cf_index = 0;
};

struct CFCCovering {
  std::size_t nf_node = 0;
  std::vector<std::vector<NFCycle>> per_cf;                // CFC_i(y)
  std::vector<std::vector<std::size_t>> subnetwork_reactions;  // union per CF-subset
  bool is_decomposition = false;  // blocks pairwise arc-disjoint and covering R
  bool truncated = false;
};

enum class WRCFOutcome { found, not_found_proven, not_found_greedy, resource_limit };
enum class SearchMode { greedy, exhaustive };

struct SearchLimits {
  std::size_t max_cycles = 10000;
  std::size_t max_branches = 1000000;
};

struct SearchStats {
  std::size_t cycles_enumerated = 0;
  std::size_t branches_explored = 0;
};

struct WRCFResult {
  WRCFOutcome outcome = WRCFOutcome::not_found_proven;
  SearchMode mode = SearchMode::exhaustive;
  std::vector<std::vector<std::size_t>> blocks;  // reaction indices, canonical order
  SearchStats stats;
  std::string reason;
  bool eulerian_fast_path = false;
};

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks the two defining properties of a weakly reversible
/// CF-decomposition: every block subnetwork weakly reversible, and within
/// every block each reactant's branching reactions share one kinetic-order
/// row.
inline VerifyResult verify_wr_cf(const Network& net, const KineticOrderMatrix& F,
                                 const std::vector<std::vector<std::size_t>>& blocks) {
  F.check_against(net);
  VerifyResult out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    Network sub = net.subnetwork(blocks[b]);
    if (!sub.weakly_reversible()) {
      out.ok = false;
      out.violations.push_back("block " + std::to_string(b) + " is not weakly reversible");
    }
    std::vector<std::size_t> sorted = blocks[b];
    std::sort(sorted.begin(), sorted.end());
    std::map<std::size_t, std::vector<std::size_t>> by_reactant;  // parent complex -> parent reactions
    for (std::size_t q : sorted) by_reactant[net.reaction(q).reactant].push_back(q);
    for (const auto& [y, rxns] : by_reactant)
      for (std::size_t i = 1; i < rxns.size(); ++i)
        if (F.row(rxns[i]) != F.row(rxns[0])) {
          out.ok = false;
          out.violations.push_back("block " + std::to_string(b) + " mixes CF-subsets at reactant '" +
                                   net.reaction(rxns[0]).label + "'");
          break;
        }
  }
  return out;
}

/// All simple cycles through NF node y, grouped by the CF-subset of their
/// branch reaction. Cycles keep lexicographic order within each group.
inline std::vector<std::vector<NFCycle>> enumerate_nf_cycles(const Network& net,
                                                             const ReactantNodeClass& node,
                                                             const SearchLimits& lim,
                                                             SearchStats& stats, bool& truncated) {
  CycleEnumeration ce = enumerate_cycles_through(net, node.complex_idx, lim.max_cycles);
  stats.cycles_enumerated += ce.cycles.size();
  if (ce.truncated) truncated = true;
  std::vector<std::vector<NFCycle>> groups(node.cf_subsets.size());
  for (const auto& c : ce.cycles) {
    NFCycle nc;
    nc.arcs = c.arcs;
    nc.anchor = c.anchor;
    nc.branch_reaction = c.arcs.front();
    bool found = false;
    for (std::size_t i = 0; i < node.cf_subsets.size() && !found; ++i)
      for (std::size_t q : node.cf_subsets[i])
        if (q == nc.branch_reaction) {
          nc.cf_index = i;
          groups[i].push_back(nc);
          found = true;
          break;
        }
  }
  return groups;
}

/// CF(y)-cycle covering of a weakly reversible single-linkage-class network
/// whose single NF node is y.
inline CFCCovering cfc_covering(const Network& net, const KineticOrderMatrix& F, std::size_t y,
                                const SearchLimits& lim = SearchLimits()) {
  F.check_against(net);
  if (net.num_linkage_classes() != 1)
    throw std::invalid_argument("cfc_covering: network must have a single linkage class");
  if (!net.weakly_reversible())
    throw std::invalid_argument("cfc_covering: network must be weakly reversible");
  NFClassification cls = classify_nodes(net, F);
  auto nf = cls.nf_nodes();
  if (nf.size() != 1 || nf[0] != y)
    throw std::invalid_argument("cfc_covering: y must be the single NF node");
  const ReactantNodeClass* node = cls.find(y);

  CFCCovering out;
  out.nf_node = y;
  SearchStats stats;
  out.per_cf = enumerate_nf_cycles(net, *node, lim, stats, out.truncated);

  std::set<std::size_t> all;
  std::vector<std::set<std::size_t>> unions(out.per_cf.size());
  for (std::size_t i = 0; i < out.per_cf.size(); ++i)
    for (const auto& c : out.per_cf[i])
      for (std::size_t q : c.arcs) unions[i].insert(q);
  out.subnetwork_reactions.resize(unions.size());
  bool disjoint = true;
  for (std::size_t i = 0; i < unions.size(); ++i) {
    out.subnetwork_reactions[i].assign(unions[i].begin(), unions[i].end());
    for (std::size_t q : unions[i]) {
      if (all.count(q)) disjoint = false;
      all.insert(q);
    }
  }
  out.is_decomposition = disjoint && all.size() == net.num_reactions();
  return out;
}

namespace detail {

constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

inline bool wr_subset(const Network& net, const std::vector<std::size_t>& arcs) {
  return net.subnetwork(arcs).weakly_reversible();
}

/// First simple cycle through y (lexicographic arc order) whose branch is
/// `branch` and whose arcs avoid reactions assigned to blocks other than
/// `own`. Empty result when none exists.
inline std::vector<std::size_t> first_cycle_with_branch(
    const Network& net, std::size_t y, std::size_t branch, std::size_t own,
    const std::vector<std::size_t>& block_of, const std::vector<std::size_t>& branches_of_y,
    const SearchLimits& lim, SearchStats& stats, bool& hit_limit) {
  std::vector<bool> allowed(net.num_reactions(), true);
  for (std::size_t q = 0; q < net.num_reactions(); ++q)
    if (block_of[q] != kUnassigned && block_of[q] != own) allowed[q] = false;
  for (std::size_t q : branches_of_y)
    if (q != branch) allowed[q] = false;
  CycleEnumeration ce = enumerate_cycles_through(net, y, allowed, 1);
  stats.cycles_enumerated += ce.cycles.size();
  if (ce.cycles.empty()) {
    if (ce.truncated) hit_limit = true;
    return {};
  }
  return ce.cycles.front().arcs;
}

/// First cycle through y with branch in CF-subset `cf`, containing reaction
/// `must_contain`, avoiding arcs of other blocks.
inline std::vector<std::size_t> first_cycle_covering(
    const Network& net, std::size_t y, std::size_t cf, std::size_t must_contain,
    const std::vector<std::size_t>& block_of, const ReactantNodeClass& node,
    const SearchLimits& lim, SearchStats& stats, bool& hit_limit) {
  std::vector<bool> allowed(net.num_reactions(), true);
  for (std::size_t q = 0; q < net.num_reactions(); ++q)
    if (block_of[q] != kUnassigned && block_of[q] != cf) allowed[q] = false;
  for (std::size_t i = 0; i < node.cf_subsets.size(); ++i)
    if (i != cf)
      for (std::size_t q : node.cf_subsets[i]) allowed[q] = false;
  CycleEnumeration ce = enumerate_cycles_through(net, y, allowed, lim.max_cycles);
  stats.cycles_enumerated += ce.cycles.size();
  if (ce.truncated) hit_limit = true;
  for (const auto& c : ce.cycles)
    if (std::find(c.arcs.begin(), c.arcs.end(), must_contain) != c.arcs.end()) return c.arcs;
  return {};
}

/// The published greedy procedure on a weakly reversible single-linkage
/// network, with y treated as the only NF node. Per CF-subset, per branching
/// reaction: commit the first cycle avoiding other blocks' arcs; then cover
/// leftover reactions by cycles whose branch picks their block. Returns true
/// with a full assignment or false (greedy dead end).
inline bool greedy_single(const Network& net, const ReactantNodeClass& node,
                          const SearchLimits& lim, SearchStats& stats,
                          std::vector<std::size_t>& block_of, bool& hit_limit) {
  const std::size_t y = node.complex_idx;
  block_of.assign(net.num_reactions(), kUnassigned);
  for (std::size_t i = 0; i < node.cf_subsets.size(); ++i)
    for (std::size_t q : node.cf_subsets[i]) block_of[q] = i;

  for (std::size_t i = 0; i < node.cf_subsets.size(); ++i)
    for (std::size_t b : node.cf_subsets[i]) {
      auto cyc = first_cycle_with_branch(net, y, b, i, block_of, node.branching_reactions, lim,
                                         stats, hit_limit);
      if (cyc.empty()) return false;
      for (std::size_t q : cyc) block_of[q] = i;
    }

  for (std::size_t q = 0; q < net.num_reactions(); ++q) {
    if (block_of[q] != kUnassigned) continue;
    bool covered = false;
    for (std::size_t j = 0; j < node.cf_subsets.size() && !covered; ++j) {
      auto cyc = first_cycle_covering(net, y, j, q, block_of, node, lim, stats, hit_limit);
      if (!cyc.empty()) {
        for (std::size_t a : cyc) block_of[a] = j;
        covered = true;
      }
    }
    if (!covered) return false;
  }
  return true;
}

/// Exhaustive assignment search: branching reactions are pinned to their
/// CF-subset's block; every other reaction ranges over the k block labels in
/// ascending order. A complete assignment is reported iff every block is
/// weakly reversible. Callback returns false to stop the enumeration.
/// Returns false when the branch budget was exhausted before completion.
inline bool exhaustive_single(const Network& net, const ReactantNodeClass& node,
                              const SearchLimits& lim, SearchStats& stats,
                              const std::function<bool(const std::vector<std::size_t>&)>& emit,
                              bool& stopped_by_callback) {
  const std::size_t k = node.cf_subsets.size();
  std::vector<std::size_t> block_of(net.num_reactions(), kUnassigned);
  std::vector<std::size_t> free_rxns;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t q : node.cf_subsets[i]) block_of[q] = i;
  for (std::size_t q = 0; q < net.num_reactions(); ++q)
    if (block_of[q] == kUnassigned) free_rxns.push_back(q);

  bool budget_ok = true;
  std::function<bool(std::size_t)> rec = [&](std::size_t d) -> bool {
    if (stats.branches_explored >= lim.max_branches) {
      budget_ok = false;
      return false;  // stop: budget exhausted
    }
    if (d == free_rxns.size()) {
      ++stats.branches_explored;
      std::vector<std::vector<std::size_t>> blocks(k);
      for (std::size_t q = 0; q < net.num_reactions(); ++q) blocks[block_of[q]].push_back(q);
      for (const auto& b : blocks)
        if (!wr_subset(net, b)) return true;  // invalid leaf, keep searching
      if (!emit(block_of)) {
        stopped_by_callback = true;
        return false;
      }
      return true;
    }
    for (std::size_t lab = 0; lab < k; ++lab) {
      block_of[free_rxns[d]] = lab;
      if (!rec(d + 1)) return false;
    }
    block_of[free_rxns[d]] = kUnassigned;
    return true;
  };
  rec(0);
  return budget_ok;
}

}  // namespace detail

/// Algorithm-1-style search on a weakly reversible single-linkage-class
/// network with exactly one NF node y. Greedy mode replicates the published
/// committed-choice procedure (NO answers are not proofs); exhaustive mode
/// searches all block assignments, so its NO is proven.
inline WRCFResult wr_cf_single(const Network& net, const KineticOrderMatrix& F, std::size_t y,
                               SearchMode mode, const SearchLimits& lim = SearchLimits()) {
  F.check_against(net);
  if (net.num_linkage_classes() != 1)
    throw std::invalid_argument("wr_cf_single: network must have a single linkage class");
  if (!net.weakly_reversible())
    throw std::invalid_argument("wr_cf_single: network must be weakly reversible");
  NFClassification cls = classify_nodes(net, F);
  auto nf = cls.nf_nodes();
  if (nf.size() != 1 || nf[0] != y)
    throw std::invalid_argument("wr_cf_single: y must be the single NF node");
  const ReactantNodeClass& node = *cls.find(y);

  WRCFResult res;
  res.mode = mode;
  auto assemble = [&](const std::vector<std::size_t>& block_of) {
    res.blocks.assign(node.cf_subsets.size(), {});
    for (std::size_t q = 0; q < net.num_reactions(); ++q) res.blocks[block_of[q]].push_back(q);
    std::sort(res.blocks.begin(), res.blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
  };

  if (mode == SearchMode::greedy) {
    std::vector<std::size_t> block_of;
    bool hit_limit = false;
    if (detail::greedy_single(net, node, lim, res.stats, block_of, hit_limit)) {
      assemble(block_of);
      res.outcome = WRCFOutcome::found;
    } else {
      res.outcome = hit_limit ? WRCFOutcome::resource_limit : WRCFOutcome::not_found_greedy;
      res.reason = hit_limit ? "cycle enumeration limit reached"
                             : "greedy cycle selection reached a dead end";
    }
    return res;
  }

  bool stopped = false;
  bool within_budget = detail::exhaustive_single(
      net, node, lim, res.stats,
      [&](const std::vector<std::size_t>& block_of) {
        assemble(block_of);
        return false;  // first (lexicographically smallest) solution suffices
      },
      stopped);
  if (stopped) {
    res.outcome = WRCFOutcome::found;
  } else if (!within_budget) {
    res.outcome = WRCFOutcome::resource_limit;
    res.reason = "branch budget exhausted";
  } else {
    res.outcome = WRCFOutcome::not_found_proven;
    res.reason = "all block assignments fail weak reversibility";
  }
  return res;
}

namespace detail {

/// Recursive refinement of one linkage class: process NF nodes in ascending
/// complex index; within each block where the node is still NF, split the
/// block via the single-node search, backtracking across iterations in
/// exhaustive mode. `blocks` holds parent-network reaction indices.
struct ClassSearch {
  const Network& net;
  const KineticOrderMatrix& F;
  SearchMode mode;
  const SearchLimits& lim;
  SearchStats& stats;
  std::vector<std::size_t> nf_nodes;  // parent complex indices, ascending
  std::vector<std::vector<std::size_t>> solution;
  bool found = false;
  bool hit_limit = false;

  bool refine(std::vector<std::vector<std::size_t>> blocks, std::size_t node_idx) {
    if (node_idx == nf_nodes.size()) {
      solution = std::move(blocks);
      found = true;
      return true;
    }
    std::size_t y = nf_nodes[node_idx];
    // locate a block in which y is still an NF node
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      Network sub = net.subnetwork(blocks[b]);
      std::vector<std::size_t> sorted = blocks[b];
      std::sort(sorted.begin(), sorted.end());
      Matrix subF(sorted.size(), F.num_species());
      for (std::size_t i = 0; i < sorted.size(); ++i)
        for (std::size_t j = 0; j < F.num_species(); ++j)
          subF(i, j) = F.matrix()(sorted[i], j);
      KineticOrderMatrix subK(subF);
      NFClassification cls = classify_nodes(sub, subK);
      const ReactantNodeClass* node = nullptr;
      for (const auto& rc : cls.reactants)
        if (sub.complexes()[rc.complex_idx] == net.complexes()[y] && rc.is_nf()) node = &rc;
      if (!node) continue;

      auto remaining = blocks;
      remaining.erase(remaining.begin() + b);
      auto try_split = [&](const std::vector<std::size_t>& block_of) -> bool {
        std::vector<std::vector<std::size_t>> split(node->cf_subsets.size());
        for (std::size_t q = 0; q < sorted.size(); ++q) split[block_of[q]].push_back(sorted[q]);
        auto next = remaining;
        for (auto& s : split) next.push_back(std::move(s));
        // same node may be NF in another block too: stay on node_idx
        return refine(std::move(next), node_idx);
      };

      if (mode == SearchMode::greedy) {
        std::vector<std::size_t> block_of;
        if (!greedy_single(sub, *node, lim, stats, block_of, hit_limit)) return false;
        return try_split(block_of);
      }
      bool stopped = false;
      bool within_budget = exhaustive_single(
          sub, *node, lim, stats,
          [&](const std::vector<std::size_t>& block_of) {
            return !try_split(block_of);  // keep enumerating until a full solution appears
          },
          stopped);
      if (!within_budget) hit_limit = true;
      return found;
    }
    // y is CF inside every current block; move to the next node
    return refine(std::move(blocks), node_idx + 1);
  }
};

}  // namespace detail

/// General search (Algorithm-2 style): per linkage class, trivially one
/// block when the class has no NF node, otherwise iterative refinement over
/// its NF nodes. With `eulerian_fast_path`, an Eulerian NF class is answered
/// by its arc-disjoint cycle decomposition directly.
inline WRCFResult wr_cf_search(const Network& net, const KineticOrderMatrix& F, SearchMode mode,
                               const SearchLimits& lim = SearchLimits(),
                               bool eulerian_fast_path = false) {
  F.check_against(net);
  WRCFResult res;
  res.mode = mode;
  if (!net.weakly_reversible()) {
    res.outcome = WRCFOutcome::not_found_proven;
    res.reason = "network is not weakly reversible; no weakly reversible decomposition exists";
    return res;
  }
  NFClassification cls = classify_nodes(net, F);
  std::vector<std::size_t> nf = cls.nf_nodes();

  std::vector<std::vector<std::size_t>> all_blocks;
  bool greedy_failed = false, limit_hit = false, proven_no = false;
  auto class_rxns = net.linkage_class_reactions();
  for (std::size_t lc = 0; lc < class_rxns.size(); ++lc) {
    std::vector<std::size_t> class_nf;
    for (std::size_t y : nf)
      if (net.linkage_class_of()[y] == lc) class_nf.push_back(y);
    if (class_nf.empty()) {
      all_blocks.push_back(class_rxns[lc]);
      continue;
    }
    if (eulerian_fast_path && net.is_eulerian(lc)) {
      for (auto& cyc : net.eulerian_cycle_decomposition(lc)) {
        std::sort(cyc.begin(), cyc.end());
        all_blocks.push_back(std::move(cyc));
      }
      res.eulerian_fast_path = true;
      continue;
    }
    detail::ClassSearch search{net, F, mode, lim, res.stats, class_nf};
    search.refine({class_rxns[lc]}, 0);
    if (search.found) {
      for (auto& b : search.solution) {
        std::sort(b.begin(), b.end());
        all_blocks.push_back(std::move(b));
      }
    } else if (search.hit_limit) {
      limit_hit = true;
      break;
    } else if (mode == SearchMode::greedy) {
      greedy_failed = true;
      break;
    } else {
      proven_no = true;
      break;
    }
  }

  if (limit_hit) {
    res.outcome = WRCFOutcome::resource_limit;
    res.reason = "search limits reached";
  } else if (greedy_failed) {
    res.outcome = WRCFOutcome::not_found_greedy;
    res.reason = "greedy refinement reached a dead end";
  } else if (proven_no) {
    res.outcome = WRCFOutcome::not_found_proven;
    res.reason = "exhaustive refinement found no weakly reversible CF-decomposition";
  } else {
    std::sort(all_blocks.begin(), all_blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    res.blocks = std::move(all_blocks);
    res.outcome = WRCFOutcome::found;
  }
  return res;
}

}  // namespace crnkit

#endif  // CRNKIT_WR_CF_HPP
