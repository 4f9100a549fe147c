#ifndef CRNKIT_INDEP_HPP
#define CRNKIT_INDEP_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "crnkit/decomposition.hpp"
#include "crnkit/matrix.hpp"
#include "crnkit/network.hpp"
#include "crnkit/wr_cf.hpp"

namespace crnkit {

/// Coordinate graph over a lexicographically-first maximal independent set
/// of reaction vectors. Vertices are the basis reactions; each dependent
/// reaction vector contributes a clique on the basis coordinates where its
/// expansion coefficients are nonzero.
struct CoordinateGraph {
  std::vector<std::size_t> basis_choice;               // reaction indices, ascending
  std::vector<std::size_t> dependent;                  // non-basis reaction indices
  std::vector<RVec> dependency_table;                  // row per dependent reaction
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // vertex index pairs, i < j
  std::vector<std::size_t> component_of;               // vertex -> component id
  std::size_t num_components = 0;

  bool connected() const { return num_components <= 1; }
};

inline CoordinateGraph coordinate_graph(const Network& net) {
  CoordinateGraph g;
  const std::size_t r = net.num_reactions();

  std::vector<RVec> basis_vectors;
  for (std::size_t q = 0; q < r; ++q) {
    std::vector<RVec> trial = basis_vectors;
    trial.push_back(net.reaction_vector(q));
    if (rank(Matrix::from_rows(trial)) > basis_vectors.size()) {
      basis_vectors.push_back(net.reaction_vector(q));
      g.basis_choice.push_back(q);
    } else {
      g.dependent.push_back(q);
    }
  }
  const std::size_t p = g.basis_choice.size();

  // columns of B are the basis vectors; solve B a = R_k exactly
  Matrix b(net.num_species(), p);
  for (std::size_t j = 0; j < p; ++j) {
    RVec v = basis_vectors[j];
    for (std::size_t i = 0; i < v.size(); ++i) b(i, j) = v[i];
  }
  std::set<std::pair<std::size_t, std::size_t>> edge_set;
  for (std::size_t k : g.dependent) {
    RVec a;
    if (!solve(b, net.reaction_vector(k), a))
      throw std::logic_error("internal: dependent reaction vector outside basis span");
    g.dependency_table.push_back(a);
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < p; ++j)
      if (!a[j].is_zero()) support.push_back(j);
    for (std::size_t i = 0; i < support.size(); ++i)
      for (std::size_t j = i + 1; j < support.size(); ++j)
        edge_set.insert({support[i], support[j]});
  }
  g.edges.assign(edge_set.begin(), edge_set.end());

  // connected components over the p vertices
  std::vector<std::size_t> parent(p);
  for (std::size_t i = 0; i < p; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [u, v] : g.edges) parent[find(u)] = find(v);
  std::map<std::size_t, std::size_t> renumber;
  g.component_of.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    std::size_t root = find(i);
    auto it = renumber.find(root);
    if (it == renumber.end()) it = renumber.emplace(root, renumber.size()).first;
    g.component_of[i] = it->second;
  }
  g.num_components = renumber.size();
  return g;
}

struct FinestIndependentDecomposition {
  std::vector<std::vector<std::size_t>> blocks;  // canonical order
  std::vector<std::size_t> component_of_block;   // block -> coordinate-graph component
  bool nontrivial = false;
};

/// Finest independent decomposition: basis reactions grouped by coordinate
/// graph component; each dependent reaction joins the (necessarily unique)
/// component carrying its nonzero expansion coefficients.
inline FinestIndependentDecomposition finest_independent(const Network& net) {
  CoordinateGraph g = coordinate_graph(net);
  FinestIndependentDecomposition out;
  std::vector<std::vector<std::size_t>> blocks(g.num_components);
  for (std::size_t v = 0; v < g.basis_choice.size(); ++v)
    blocks[g.component_of[v]].push_back(g.basis_choice[v]);
  for (std::size_t d = 0; d < g.dependent.size(); ++d) {
    const RVec& a = g.dependency_table[d];
    std::size_t comp = static_cast<std::size_t>(-1);
    for (std::size_t j = 0; j < a.size(); ++j)
      if (!a[j].is_zero()) { comp = g.component_of[j]; break; }
    if (comp == static_cast<std::size_t>(-1))
      throw std::logic_error("internal: zero reaction vector");
    blocks[comp].push_back(g.dependent[d]);
  }
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::vector<std::size_t> order(blocks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return blocks[x].front() < blocks[y].front(); });
  for (std::size_t i : order) {
    out.component_of_block.push_back(i);
    out.blocks.push_back(blocks[i]);
  }
  out.nontrivial = out.blocks.size() > 1;
  return out;
}

struct IndepWRCFResult {
  WRCFOutcome outcome = WRCFOutcome::not_found_proven;
  std::vector<std::vector<std::size_t>> blocks;
  SearchStats stats;
  std::string reason;
};

namespace detail {

/// All set partitions of {0..n-1} as restricted-growth strings, via callback.
inline void for_each_partition(std::size_t n,
                               const std::function<void(const std::vector<std::size_t>&)>& cb) {
  std::vector<std::size_t> rgs(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t maxv) {
    if (i == n) {
      cb(rgs);
      return;
    }
    for (std::size_t v = 0; v <= maxv + 1 && v <= i; ++v) {
      rgs[i] = v;
      rec(i + 1, std::max(maxv, v));
    }
  };
  if (n > 0) rec(1, 0);
  else cb(rgs);
}

}  // namespace detail

/// Searches for an independent weakly reversible CF-decomposition: takes the
/// canonical decomposition from the exhaustive search, enumerates its
/// CF-preserving coarsenings from coarsest to finest, and returns the first
/// independent one. When none is independent the coarsest representatives
/// have been covered, so absence is reported as proven.
inline IndepWRCFResult independent_wr_cf(const Network& net, const KineticOrderMatrix& F,
                                         const SearchLimits& lim = SearchLimits()) {
  IndepWRCFResult out;
  WRCFResult base = wr_cf_search(net, F, SearchMode::exhaustive, lim);
  out.stats = base.stats;
  if (base.outcome != WRCFOutcome::found) {
    out.outcome = base.outcome;
    out.reason = base.reason.empty() ? "no weakly reversible CF-decomposition exists" : base.reason;
    return out;
  }
  const auto& blocks = base.blocks;
  const std::size_t nb = blocks.size();

  // per block, CF-subset of each NF node represented by the block's branches
  NFClassification cls = classify_nodes(net, F);
  std::vector<std::map<std::size_t, std::size_t>> cf_at(nb);  // block -> (nf complex -> cf index)
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t q : blocks[b]) {
      const ReactantNodeClass* node = cls.find(net.reaction(q).reactant);
      if (!node || !node->is_nf()) continue;
      for (std::size_t i = 0; i < node->cf_subsets.size(); ++i)
        for (std::size_t qq : node->cf_subsets[i])
          if (qq == q) cf_at[b][node->complex_idx] = i;
    }

  // a group of blocks may merge iff no NF node contributes two CF-subsets
  auto group_valid = [&](const std::vector<std::size_t>& members) {
    std::map<std::size_t, std::size_t> seen;
    for (std::size_t b : members)
      for (const auto& [y, cf] : cf_at[b]) {
        auto it = seen.find(y);
        if (it != seen.end() && it->second != cf) return false;
        seen.emplace(y, cf);
      }
    return true;
  };

  std::vector<std::vector<std::size_t>> candidates;  // valid RGS strings
  detail::for_each_partition(nb, [&](const std::vector<std::size_t>& rgs) {
    std::size_t groups = *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<std::vector<std::size_t>> members(groups);
    for (std::size_t b = 0; b < nb; ++b) members[rgs[b]].push_back(b);
    for (const auto& m : members)
      if (!group_valid(m)) return;
    candidates.push_back(rgs);
  });
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) {
                     return *std::max_element(a.begin(), a.end()) <
                            *std::max_element(b.begin(), b.end());
                   });

  for (const auto& rgs : candidates) {
    std::size_t groups = *std::max_element(rgs.begin(), rgs.end()) + 1;
    std::vector<std::vector<std::size_t>> merged(groups);
    for (std::size_t b = 0; b < nb; ++b)
      merged[rgs[b]].insert(merged[rgs[b]].end(), blocks[b].begin(), blocks[b].end());
    Decomposition d(net, merged);
    if (!profile(net, d).independent) continue;
    if (!verify_wr_cf(net, F, d.blocks()).ok) continue;
    out.outcome = WRCFOutcome::found;
    out.blocks = d.blocks();
    return out;
  }
  out.outcome = WRCFOutcome::not_found_proven;
  out.reason = "no coarsening of the weakly reversible CF-decomposition is independent";
  return out;
}

}  // namespace crnkit

#endif  // CRNKIT_INDEP_HPP
