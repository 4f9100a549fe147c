#ifndef CRNKIT_TESTS_HELPERS_HPP
#define CRNKIT_TESTS_HELPERS_HPP

// Shared deterministic generators and brute-force oracles for the property
// suites. Everything is seeded explicitly; no global RNG state.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crnkit/kinetics.hpp"
#include "crnkit/network.hpp"
#include "crnkit/parser.hpp"

namespace testhelpers {

using namespace crnkit;

inline ParsedModel load_fixture(const std::string& name) {
  std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_crn(os.str());
}

// ---------------------------------------------------------------------------
// digraphs as arc lists over monospecies complexes

struct RawDigraph {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;  // no loops, no duplicates
};

inline Network to_network(const RawDigraph& g) {
  std::vector<std::string> species;
  std::vector<RVec> complexes;
  for (std::size_t v = 0; v < g.vertices; ++v) {
    species.push_back("X" + std::to_string(v + 1));
    RVec c(g.vertices);
    c[v] = Rational(1);
    complexes.push_back(std::move(c));
  }
  std::vector<Reaction> rxns;
  for (std::size_t a = 0; a < g.arcs.size(); ++a)
    rxns.push_back({"R" + std::to_string(a + 1), g.arcs[a].first, g.arcs[a].second});
  return Network(species, complexes, rxns, true);
}

/// Random digraph where every vertex touches at least one arc.
inline RawDigraph random_digraph(std::mt19937_64& rng, std::size_t max_vertices,
                                 std::size_t max_arcs) {
  for (;;) {
    RawDigraph g;
    g.vertices = 2 + rng() % (max_vertices - 1);
    std::size_t want = 1 + rng() % max_arcs;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t tries = 0; tries < 4 * want; ++tries) {
      std::size_t u = rng() % g.vertices, v = rng() % g.vertices;
      if (u == v) continue;
      if (!seen.insert({u, v}).second) continue;
      g.arcs.push_back({u, v});
      if (g.arcs.size() == want) break;
    }
    if (g.arcs.empty()) continue;
    std::vector<bool> touched(g.vertices, false);
    for (auto [u, v] : g.arcs) touched[u] = touched[v] = true;
    std::size_t kept = 0;
    std::vector<std::size_t> remap(g.vertices);
    RawDigraph out;
    for (std::size_t v = 0; v < g.vertices; ++v)
      if (touched[v]) remap[v] = kept++;
    out.vertices = kept;
    for (auto [u, v] : g.arcs) out.arcs.push_back({remap[u], remap[v]});
    if (out.vertices >= 2) return out;
  }
}

/// Brute-force simple cycles through `anchor` by extending vertex paths
/// (independent of the arc-indexed DFS in the library). Returns arc index
/// sequences starting with an arc leaving the anchor.
inline std::vector<std::vector<std::size_t>> brute_cycles_through(const RawDigraph& g,
                                                                  std::size_t anchor) {
  std::vector<std::vector<std::size_t>> result;
  std::vector<std::size_t> path_vertices{anchor};
  std::vector<std::size_t> path_arcs;
  std::function<void(std::size_t)> extend = [&](std::size_t at) {
    for (std::size_t a = 0; a < g.arcs.size(); ++a) {
      if (g.arcs[a].first != at) continue;
      std::size_t to = g.arcs[a].second;
      if (to == anchor) {
        path_arcs.push_back(a);
        result.push_back(path_arcs);
        path_arcs.pop_back();
        continue;
      }
      if (std::find(path_vertices.begin(), path_vertices.end(), to) != path_vertices.end())
        continue;
      path_vertices.push_back(to);
      path_arcs.push_back(a);
      extend(to);
      path_arcs.pop_back();
      path_vertices.pop_back();
    }
  };
  extend(anchor);
  std::sort(result.begin(), result.end());
  return result;
}

/// Weak reversibility of an arc subset without building a Network: every arc
/// must lie on a directed cycle within the subset.
inline bool wr_arc_subset(const RawDigraph& g, const std::vector<std::size_t>& arcs) {
  for (std::size_t a : arcs) {
    // BFS from head back to tail using subset arcs
    std::vector<bool> seen(g.vertices, false);
    std::vector<std::size_t> queue{g.arcs[a].second};
    seen[g.arcs[a].second] = true;
    bool closed = false;
    while (!queue.empty() && !closed) {
      std::size_t at = queue.back();
      queue.pop_back();
      if (at == g.arcs[a].first) {
        closed = true;
        break;
      }
      for (std::size_t b : arcs)
        if (g.arcs[b].first == at && !seen[g.arcs[b].second]) {
          seen[g.arcs[b].second] = true;
          queue.push_back(g.arcs[b].second);
        }
    }
    if (!closed) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// single-NF weakly reversible instances

struct SingleNFInstance {
  RawDigraph g;
  std::size_t nf_vertex = 0;
  std::vector<RVec> rows;  // kinetic order row per arc, over g.vertices species
};

/// Weakly reversible single-linkage-class digraph built as a union of simple
/// cycles each sharing a vertex with what came before; vertex 0 is the only
/// NF node (its branch arcs get one of two distinct rows, all other
/// reactants one row each).
inline SingleNFInstance random_single_nf(std::mt19937_64& rng, std::size_t max_vertices,
                                         std::size_t max_arcs) {
  for (;;) {
    RawDigraph g;
    g.vertices = 3 + rng() % (max_vertices - 2);
    std::set<std::pair<std::size_t, std::size_t>> arcset;
    std::set<std::size_t> reached{0};
    std::size_t cycles = 2 + rng() % 3;
    for (std::size_t c = 0; c < cycles && g.arcs.size() < max_arcs; ++c) {
      // random simple cycle through a vertex already reached
      std::vector<std::size_t> pool(reached.begin(), reached.end());
      std::size_t start = c < 2 ? 0 : pool[rng() % pool.size()];
      std::vector<std::size_t> verts{start};
      std::size_t len = 1 + rng() % 3;
      for (std::size_t i = 0; i < len; ++i) {
        std::size_t v = rng() % g.vertices;
        if (std::find(verts.begin(), verts.end(), v) == verts.end()) verts.push_back(v);
      }
      if (verts.size() < 2) continue;
      for (std::size_t i = 0; i < verts.size(); ++i) {
        auto arc = std::make_pair(verts[i], verts[(i + 1) % verts.size()]);
        if (arcset.insert(arc).second) g.arcs.push_back(arc);
        reached.insert(arc.first);
      }
    }
    // drop unreachable vertices, renumber (keep 0 first)
    std::vector<bool> touched(g.vertices, false);
    for (auto [u, v] : g.arcs) touched[u] = touched[v] = true;
    if (!touched[0]) continue;
    std::vector<std::size_t> remap(g.vertices);
    std::size_t kept = 0;
    for (std::size_t v = 0; v < g.vertices; ++v)
      if (touched[v]) remap[v] = kept++;
    RawDigraph h;
    h.vertices = kept;
    for (auto [u, v] : g.arcs) h.arcs.push_back({remap[u], remap[v]});

    // need >= 2 branches at vertex 0 and a weakly reversible single class
    std::size_t branches = 0;
    for (auto [u, v] : h.arcs)
      if (u == 0) ++branches;
    if (branches < 2 || h.arcs.size() > max_arcs) continue;
    std::vector<std::size_t> all(h.arcs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (!wr_arc_subset(h, all)) continue;
    Network net = to_network(h);
    if (net.num_linkage_classes() != 1) continue;

    SingleNFInstance inst;
    inst.g = h;
    // rows: reactant-determined except at vertex 0, where branches draw from
    // two distinct order values
    Rational a(1 + static_cast<long>(rng() % 5)), b(7 + static_cast<long>(rng() % 5));
    bool used_a = false, used_b = false;
    for (std::size_t i = 0; i < h.arcs.size(); ++i) {
      RVec row(h.vertices);
      if (h.arcs[i].first == 0) {
        bool pick_a = rng() % 2 == 0;
        if (pick_a) used_a = true;
        else used_b = true;
        row[0] = pick_a ? a : b;
      } else {
        row[h.arcs[i].first] = Rational(1);
      }
      inst.rows.push_back(std::move(row));
    }
    if (!used_a || !used_b) continue;  // vertex 0 must really be NF
    return inst;
  }
}

inline KineticOrderMatrix rows_to_F(const std::vector<RVec>& rows) {
  return KineticOrderMatrix(Matrix::from_rows(rows));
}

/// Brute-force existence of a weakly reversible CF-decomposition: all set
/// partitions of the arc set into at most `max_blocks` blocks, each block
/// weakly reversible and row-uniform per reactant.
inline bool brute_force_wr_cf_exists(const SingleNFInstance& inst, std::size_t max_blocks) {
  const std::size_t n = inst.g.arcs.size();
  std::vector<std::size_t> rgs(n, 0);
  bool found = false;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t maxv) {
    if (found) return;
    if (i == n) {
      std::size_t groups = maxv + 1;
      std::vector<std::vector<std::size_t>> blocks(groups);
      for (std::size_t q = 0; q < n; ++q) blocks[rgs[q]].push_back(q);
      for (const auto& blk : blocks) {
        if (!wr_arc_subset(inst.g, blk)) return;
        // CF within the block: per reactant, identical rows
        std::map<std::size_t, std::size_t> first_at;
        for (std::size_t q : blk) {
          auto [it, fresh] = first_at.emplace(inst.g.arcs[q].first, q);
          if (!fresh && inst.rows[q] != inst.rows[it->second]) return;
        }
      }
      found = true;
      return;
    }
    for (std::size_t v = 0; v <= std::min(maxv + 1, max_blocks - 1) && !found; ++v) {
      rgs[i] = v;
      rec(i + 1, std::max(maxv, v));
    }
  };
  rec(1, 0);
  return found;
}

// ---------------------------------------------------------------------------
// general random networks (non-monospecies) for independence properties

inline Network random_general_network(std::mt19937_64& rng, std::size_t max_species,
                                      std::size_t max_reactions) {
  for (;;) {
    std::size_t m = 2 + rng() % (max_species - 1);
    std::size_t nc = 2 + rng() % 4;
    std::vector<RVec> complexes;
    std::set<std::vector<long>> seen;
    for (std::size_t tries = 0; complexes.size() < nc && tries < 40; ++tries) {
      std::vector<long> raw(m);
      for (auto& x : raw) x = rng() % 3;
      if (!seen.insert(raw).second) continue;
      RVec c(m);
      for (std::size_t j = 0; j < m; ++j) c[j] = Rational(raw[j]);
      complexes.push_back(std::move(c));
    }
    if (complexes.size() < 2) continue;
    std::size_t want = 1 + rng() % max_reactions;
    std::set<std::pair<std::size_t, std::size_t>> arcs;
    std::vector<Reaction> rxns;
    for (std::size_t tries = 0; rxns.size() < want && tries < 60; ++tries) {
      std::size_t u = rng() % complexes.size(), v = rng() % complexes.size();
      if (u == v || !arcs.insert({u, v}).second) continue;
      rxns.push_back({"R" + std::to_string(rxns.size() + 1), u, v});
    }
    if (rxns.empty()) continue;
    // keep only complexes that occur
    std::vector<bool> touched(complexes.size(), false);
    for (const auto& r : rxns) touched[r.reactant] = touched[r.product] = true;
    std::vector<std::size_t> remap(complexes.size());
    std::vector<RVec> used;
    for (std::size_t c = 0; c < complexes.size(); ++c)
      if (touched[c]) {
        remap[c] = used.size();
        used.push_back(complexes[c]);
      }
    for (auto& r : rxns) {
      r.reactant = remap[r.reactant];
      r.product = remap[r.product];
    }
    std::vector<std::string> species;
    for (std::size_t j = 0; j < m; ++j) species.push_back("X" + std::to_string(j + 1));
    return Network(species, used, rxns, true);
  }
}

/// Random partition of the reaction set into `blocks` nonempty blocks.
inline std::vector<std::vector<std::size_t>> random_partition(std::mt19937_64& rng, std::size_t r,
                                                              std::size_t blocks) {
  blocks = std::min(blocks, r);
  for (;;) {
    std::vector<std::vector<std::size_t>> out(blocks);
    for (std::size_t q = 0; q < r; ++q) out[rng() % blocks].push_back(q);
    bool ok = true;
    for (const auto& b : out) ok = ok && !b.empty();
    if (ok) return out;
  }
}

}  // namespace testhelpers

#endif  // CRNKIT_TESTS_HELPERS_HPP
