#ifndef CRNKIT_KINETIC_COMPLEXES_HPP
#define CRNKIT_KINETIC_COMPLEXES_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crnkit/decomposition.hpp"
#include "crnkit/kinetics.hpp"
#include "crnkit/network.hpp"
#include "crnkit/subspace.hpp"

namespace crnkit {

/// The network of kinetic complexes: vertices are the distinct kinetic-order
/// rows (as vectors over species), arcs come from the original reactions
/// with loops removed. Defined for cycle-terminal systems only (every
/// complex must be a reactant).
struct KineticComplexNetwork {
  std::vector<RVec> complexes;                              // kinetic complexes, first-seen order
  std::vector<std::pair<std::size_t, std::size_t>> arcs;    // (tail, head) into complexes
  std::vector<std::vector<std::size_t>> provenance;         // per arc: originating reactions
  std::vector<std::size_t> degenerate_reactions;            // reactions whose arcs all degenerated
  std::size_t n_tilde = 0, r_tilde = 0, l_tilde = 0, s_tilde = 0;
  long delta_tilde = 0;
  Subspace flux;  // kinetic flux subspace S~
  bool weakly_reversible = false;
  std::optional<Network> graph;  // the same structure as a Network value

  KineticComplexNetwork() : flux(0) {}
};

inline bool cycle_terminal(const Network& net) {
  std::vector<bool> is_reactant(net.num_complexes(), false);
  for (const auto& q : net.reactions()) is_reactant[q.reactant] = true;
  return std::find(is_reactant.begin(), is_reactant.end(), false) == is_reactant.end();
}

inline KineticComplexNetwork kinetic_network(const Network& net, const KineticOrderMatrix& F) {
  F.check_against(net);
  if (!cycle_terminal(net))
    throw std::invalid_argument("kinetic_network: network is not cycle terminal "
                                "(some complex is never a reactant)");
  NFClassification cls = classify_nodes(net, F);

  KineticComplexNetwork kn;
  kn.flux = Subspace(net.num_species());

  // C~(y) per reactant: one order vector per CF-subset; global identity by
  // exact vector equality, numbered in first-seen order over ascending y
  auto kc_index = [&](const RVec& v) -> std::size_t {
    for (std::size_t i = 0; i < kn.complexes.size(); ++i)
      if (kn.complexes[i] == v) return i;
    kn.complexes.push_back(v);
    return kn.complexes.size() - 1;
  };
  std::map<std::size_t, std::vector<std::size_t>> c_tilde;  // complex -> kinetic complex ids
  for (const auto& rc : cls.reactants) {
    std::vector<std::size_t>& ids = c_tilde[rc.complex_idx];
    for (const auto& cf : rc.cf_subsets) ids.push_back(kc_index(F.row(cf.front())));
  }

  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> arc_sources;
  for (std::size_t q = 0; q < net.num_reactions(); ++q) {
    const auto& tails = c_tilde.at(net.reaction(q).reactant);
    const auto& heads = c_tilde.at(net.reaction(q).product);
    bool contributed = false;
    for (std::size_t t : tails)
      for (std::size_t h : heads) {
        if (t == h) continue;  // loops removed by convention
        arc_sources[{t, h}].push_back(q);
        contributed = true;
      }
    if (!contributed) kn.degenerate_reactions.push_back(q);
  }
  for (const auto& [arc, sources] : arc_sources) {
    kn.arcs.push_back(arc);
    kn.provenance.push_back(sources);
  }

  kn.n_tilde = kn.complexes.size();
  kn.r_tilde = kn.arcs.size();

  // flux subspace from the arc difference vectors
  std::vector<RVec> diffs;
  for (const auto& [t, h] : kn.arcs) {
    RVec d(net.num_species());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = kn.complexes[h][j] - kn.complexes[t][j];
    diffs.push_back(std::move(d));
  }
  kn.flux = Subspace::span(net.num_species(), diffs);
  kn.s_tilde = kn.flux.dim();

  // graph analytics via a Network over the kinetic complexes; kinetic
  // complexes orphaned by loop removal are excluded from the graph
  std::vector<bool> touched(kn.complexes.size(), false);
  for (const auto& [t, h] : kn.arcs) touched[t] = touched[h] = true;
  std::vector<std::size_t> remap(kn.complexes.size(), static_cast<std::size_t>(-1));
  std::vector<RVec> graph_complexes;
  for (std::size_t i = 0; i < kn.complexes.size(); ++i)
    if (touched[i]) {
      remap[i] = graph_complexes.size();
      graph_complexes.push_back(kn.complexes[i]);
    }
  std::vector<Reaction> graph_rxns;
  for (std::size_t a = 0; a < kn.arcs.size(); ++a)
    graph_rxns.push_back({"t" + std::to_string(a + 1), remap[kn.arcs[a].first], remap[kn.arcs[a].second]});
  if (!graph_rxns.empty()) {
    kn.graph.emplace(net.species(), std::move(graph_complexes), std::move(graph_rxns), false);
    kn.l_tilde = kn.graph->num_linkage_classes();
    kn.weakly_reversible = kn.graph->weakly_reversible();
  }
  kn.delta_tilde = static_cast<long>(kn.n_tilde) - static_cast<long>(kn.l_tilde) -
                   static_cast<long>(kn.s_tilde);
  return kn;
}

struct ReactionCountCheck {
  std::size_t reaction = 0;
  std::size_t expected = 0;  // N_R(y) N_R(y') - |C~(y) ∩ C~(y')|
  std::size_t actual = 0;    // constructed pair count after loop removal
  bool ok = false;
};

struct KineticCountsReport {
  std::vector<ReactionCountCheck> per_reaction;
  std::size_t n_tilde = 0;
  std::size_t n_r_sum = 0;      // sum over reactants of N_R(y)
  std::size_t r_tilde = 0;
  std::size_t r_pair_sum = 0;   // sum over reactions of |R~(q)|
  bool interaction_span_surjective = false;  // reactant rows distinct across reactants
  bool n_bound_ok = false;      // n~ <= sum N_R(y), equality under ISK
  bool r_bound_ok = false;
  bool n_equality = false;
  bool r_equality = false;
};

inline KineticCountsReport kinetic_counts_check(const Network& net, const KineticOrderMatrix& F) {
  KineticComplexNetwork kn = kinetic_network(net, F);
  NFClassification cls = classify_nodes(net, F);
  KineticCountsReport rep;
  rep.n_tilde = kn.n_tilde;
  rep.r_tilde = kn.r_tilde;

  std::map<std::size_t, std::vector<RVec>> c_tilde;
  for (const auto& rc : cls.reactants) {
    std::vector<RVec>& rows = c_tilde[rc.complex_idx];
    for (const auto& cf : rc.cf_subsets) rows.push_back(F.row(cf.front()));
    rep.n_r_sum += rc.cf_subsets.size();
  }
  for (std::size_t q = 0; q < net.num_reactions(); ++q) {
    const auto& ty = c_tilde.at(net.reaction(q).reactant);
    const auto& hy = c_tilde.at(net.reaction(q).product);
    std::size_t common = 0, pairs = 0;
    for (const auto& a : ty)
      for (const auto& b : hy) {
        if (a == b) ++common;
        else ++pairs;
      }
    ReactionCountCheck c;
    c.reaction = q;
    c.expected = ty.size() * hy.size() - common;
    c.actual = pairs;
    c.ok = c.expected == c.actual;
    rep.r_pair_sum += pairs;
    rep.per_reaction.push_back(c);
  }
  rep.interaction_span_surjective = classify_system(net, F).factor_span_surjective;
  rep.n_bound_ok = rep.n_tilde <= rep.n_r_sum;
  rep.r_bound_ok = rep.r_tilde <= rep.r_pair_sum;
  rep.n_equality = rep.n_tilde == rep.n_r_sum;
  rep.r_equality = rep.r_tilde == rep.r_pair_sum;
  return rep;
}

struct InducedDecomposition {
  std::vector<KineticComplexNetwork> blocks;  // N~_i per block of D
  std::size_t n_D = 0, r_D = 0, l_D = 0, s_D = 0;  // counts of the union N~_D
  long delta_D = 0;
  bool is_decomposition = false;  // block arc sets pairwise disjoint in the union
  bool induced_independent = false;
  bool induced_incidence_independent = false;
  bool bi_level_weakly_reversible = false;
  bool bi_level_independent = false;
  bool bi_level_bi_independent = false;
  std::vector<std::string> warnings;
  std::optional<Network> union_graph;
};

/// Builds the induced kinetic-complex structure of a decomposition: each
/// block's reactions form their own kinetic complexes, and the union is
/// taken over the resulting arcs (vectors compared exactly, so blocks can
/// share kinetic complexes).
inline InducedDecomposition induced_decomposition(const Network& net, const KineticOrderMatrix& F,
                                                  const Decomposition& d) {
  F.check_against(net);
  InducedDecomposition out;

  std::vector<RVec> union_complexes;
  auto uc_index = [&](const RVec& v) -> std::size_t {
    for (std::size_t i = 0; i < union_complexes.size(); ++i)
      if (union_complexes[i] == v) return i;
    union_complexes.push_back(v);
    return union_complexes.size() - 1;
  };
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> arc_count;

  for (std::size_t b = 0; b < d.num_blocks(); ++b) {
    const Network& sub = d.subnetworks()[b];
    const auto& idx = d.blocks()[b];  // ascending; matches subnetwork reaction order
    Matrix subF(idx.size(), F.num_species());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < F.num_species(); ++j) subF(i, j) = F.matrix()(idx[i], j);
    KineticOrderMatrix subK(subF);
    if (classify_system(sub, subK).kind != KineticsClass::PL_RDK)
      out.warnings.push_back("block " + std::to_string(b) + " is not PL-RDK");
    KineticComplexNetwork kn = kinetic_network(sub, subK);
    for (const auto& [t, h] : kn.arcs) {
      std::pair<std::size_t, std::size_t> arc{uc_index(kn.complexes[t]), uc_index(kn.complexes[h])};
      ++arc_count[arc];
    }
    out.blocks.push_back(std::move(kn));
  }

  out.is_decomposition = true;
  std::vector<Reaction> union_rxns;
  std::size_t a = 0;
  for (const auto& [arc, count] : arc_count) {
    if (count > 1) out.is_decomposition = false;
    union_rxns.push_back({"u" + std::to_string(++a), arc.first, arc.second});
  }
  out.n_D = union_complexes.size();
  out.r_D = union_rxns.size();
  if (union_rxns.empty()) {
    out.warnings.push_back("induced kinetic network has no arcs (all degenerate)");
    return out;
  }
  Network ug(net.species(), union_complexes, std::move(union_rxns), false);
  out.l_D = ug.num_linkage_classes();
  out.s_D = ug.stoichiometric_subspace().dim();
  out.delta_D = static_cast<long>(out.n_D) - static_cast<long>(out.l_D) - static_cast<long>(out.s_D);

  std::size_t s_sum = 0;
  long nl_sum = 0;
  bool all_wr = true;
  for (const auto& kn : out.blocks) {
    s_sum += kn.s_tilde;
    nl_sum += static_cast<long>(kn.n_tilde) - static_cast<long>(kn.l_tilde);
    if (!kn.weakly_reversible) all_wr = false;
  }
  out.induced_independent = s_sum == out.s_D;
  out.induced_incidence_independent = nl_sum == static_cast<long>(out.n_D) - static_cast<long>(out.l_D);

  DecompositionProfile dp = profile(net, d);
  if (!out.is_decomposition) {
    out.warnings.push_back("induced kinetic covering is not a decomposition; "
                           "bi-level flags suppressed");
  } else {
    out.bi_level_weakly_reversible = dp.weakly_reversible && all_wr;
    bool dims_match = true;
    for (std::size_t b = 0; b < d.num_blocks(); ++b)
      if (d.subspaces()[b].dim() != out.blocks[b].s_tilde) dims_match = false;
    out.bi_level_independent = dp.independent && dims_match && out.induced_independent;
    out.bi_level_bi_independent = out.bi_level_independent && dp.incidence_independent &&
                                  out.induced_incidence_independent;
  }
  out.union_graph.emplace(std::move(ug));
  return out;
}

}  // namespace crnkit

#endif  // CRNKIT_KINETIC_COMPLEXES_HPP
