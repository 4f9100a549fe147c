#ifndef CRNKIT_NETWORK_HPP
#define CRNKIT_NETWORK_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnkit/matrix.hpp"
#include "crnkit/subspace.hpp"

namespace crnkit {

struct Reaction {
  std::string label;
  std::size_t reactant;  // complex index
  std::size_t product;   // complex index
};

struct NetworkSummary {
  std::size_t m = 0;   // species
  std::size_t n = 0;   // complexes
  std::size_t r = 0;   // reactions
  std::size_t l = 0;   // linkage classes
  std::size_t sl = 0;  // strong linkage classes
  std::size_t t = 0;   // terminal strong linkage classes
  std::size_t s = 0;   // rank
  long delta = 0;      // deficiency n - l - s
  bool weakly_reversible = false;
  bool t_minimal = false;
};

class NetworkError : public std::runtime_error {
 public:
  explicit NetworkError(const std::string& what) : std::runtime_error(what) {}
};

/// A chemical reaction network: species, complexes (rational coefficient
/// vectors over species), and reactions as ordered complex pairs. Derived
/// matrices Y (m x n), I_a (n x r), N = Y * I_a (m x r) are built eagerly.
/// Immutable after construction.
class Network {
 public:
  Network(std::vector<std::string> species, std::vector<RVec> complexes,
          std::vector<Reaction> reactions, bool require_nonnegative = true)
      : species_(std::move(species)),
        complexes_(std::move(complexes)),
        reactions_(std::move(reactions)) {
    validate(require_nonnegative);
    build_matrices();
    build_graph();
  }

  std::size_t num_species() const { return species_.size(); }
  std::size_t num_complexes() const { return complexes_.size(); }
  std::size_t num_reactions() const { return reactions_.size(); }

  const std::vector<std::string>& species() const { return species_; }
  const std::vector<RVec>& complexes() const { return complexes_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  const Reaction& reaction(std::size_t i) const { return reactions_.at(i); }

  std::optional<std::size_t> species_index(const std::string& id) const {
    for (std::size_t i = 0; i < species_.size(); ++i)
      if (species_[i] == id) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> reaction_index(const std::string& label) const {
    for (std::size_t i = 0; i < reactions_.size(); ++i)
      if (reactions_[i].label == label) return i;
    return std::nullopt;
  }

  const Matrix& molecularity() const { return y_; }     // Y, m x n
  const Matrix& incidence() const { return ia_; }       // I_a, n x r
  const Matrix& stoichiometric() const { return n_; }   // N, m x r

  RVec reaction_vector(std::size_t i) const { return n_.col(i); }

  Subspace stoichiometric_subspace() const { return Subspace::column_space(n_); }

  /// Complex -> linkage class id (weakly connected component), ids ordered
  /// by smallest complex index.
  const std::vector<std::size_t>& linkage_class_of() const { return linkage_of_; }
  std::size_t num_linkage_classes() const { return num_linkage_; }

  std::vector<std::vector<std::size_t>> linkage_class_complexes() const {
    std::vector<std::vector<std::size_t>> out(num_linkage_);
    for (std::size_t c = 0; c < complexes_.size(); ++c) out[linkage_of_[c]].push_back(c);
    return out;
  }
  std::vector<std::vector<std::size_t>> linkage_class_reactions() const {
    std::vector<std::vector<std::size_t>> out(num_linkage_);
    for (std::size_t q = 0; q < reactions_.size(); ++q)
      out[linkage_of_[reactions_[q].reactant]].push_back(q);
    return out;
  }

  /// Complex -> strong linkage class id, ids ordered by smallest complex
  /// index; terminal_[k] is true iff no arc leaves strong class k.
  const std::vector<std::size_t>& strong_class_of() const { return strong_of_; }
  std::size_t num_strong_classes() const { return num_strong_; }
  const std::vector<bool>& strong_class_terminal() const { return terminal_; }

  bool weakly_reversible() const { return num_strong_ == num_linkage_; }

  NetworkSummary summarize() const {
    NetworkSummary s;
    s.m = species_.size();
    s.n = complexes_.size();
    s.r = reactions_.size();
    s.l = num_linkage_;
    s.sl = num_strong_;
    s.t = 0;
    for (bool b : terminal_)
      if (b) ++s.t;
    s.s = rank(n_);
    s.delta = static_cast<long>(s.n) - static_cast<long>(s.l) - static_cast<long>(s.s);
    s.weakly_reversible = s.sl == s.l;
    s.t_minimal = s.t == s.l;
    return s;
  }

  std::pair<std::size_t, std::size_t> degree_profile(std::size_t complex_idx) const {
    std::size_t in = 0, out = 0;
    for (const auto& q : reactions_) {
      if (q.product == complex_idx) ++in;
      if (q.reactant == complex_idx) ++out;
    }
    return {in, out};
  }

  /// A linkage class is Eulerian iff every complex in it is balanced
  /// (in-degree = out-degree); the class is connected by construction.
  bool is_eulerian(std::size_t linkage_class) const {
    for (std::size_t c = 0; c < complexes_.size(); ++c) {
      if (linkage_of_[c] != linkage_class) continue;
      auto [in, out] = degree_profile(c);
      if (in != out) return false;
    }
    return true;
  }

  /// Partitions the arc set of an Eulerian linkage class into simple
  /// directed cycles: Hierholzer-style trail extension with smallest-index
  /// arc preference, closed trails split into simple cycles at repeated
  /// vertices. Each returned cycle is a list of reaction indices in path
  /// order. Throws when the class is not Eulerian.
  std::vector<std::vector<std::size_t>> eulerian_cycle_decomposition(std::size_t linkage_class) const {
    if (!is_eulerian(linkage_class)) throw NetworkError("linkage class is not Eulerian");
    std::vector<bool> used(reactions_.size(), true);
    for (std::size_t q = 0; q < reactions_.size(); ++q)
      if (linkage_of_[reactions_[q].reactant] == linkage_class) used[q] = false;

    std::vector<std::vector<std::size_t>> cycles;
    for (;;) {
      // smallest unused arc starts the next closed trail
      std::size_t start = reactions_.size();
      for (std::size_t q = 0; q < reactions_.size(); ++q)
        if (!used[q]) { start = q; break; }
      if (start == reactions_.size()) break;

      // trace a closed trail back to the start vertex; in an even digraph
      // every vertex we enter has an unused out-arc until we close up
      std::vector<std::size_t> trail{start};
      used[start] = true;
      std::size_t home = reactions_[start].reactant;
      std::size_t at = reactions_[start].product;
      while (at != home) {
        std::size_t next = reactions_.size();
        for (std::size_t q = 0; q < reactions_.size(); ++q)
          if (!used[q] && reactions_[q].reactant == at) { next = q; break; }
        if (next == reactions_.size()) throw NetworkError("internal: trail extension failed");
        used[next] = true;
        trail.push_back(next);
        at = reactions_[next].product;
      }
      split_trail_into_simple_cycles(trail, cycles);
    }
    return cycles;
  }

  /// Subnetwork induced by a set of reaction indices. Species set is kept
  /// (the ambient space must stay comparable across subnetworks); complexes
  /// are exactly those appearing in the chosen reactions.
  Network subnetwork(const std::vector<std::size_t>& reaction_indices) const {
    std::vector<std::size_t> old_to_new(complexes_.size(), SIZE_MAX);
    std::vector<RVec> sub_complexes;
    std::vector<Reaction> sub_reactions;
    std::vector<std::size_t> sorted = reaction_indices;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t q : sorted) {
      const Reaction& rx = reactions_.at(q);
      for (std::size_t c : {rx.reactant, rx.product}) {
        if (old_to_new[c] == SIZE_MAX) {
          old_to_new[c] = sub_complexes.size();
          sub_complexes.push_back(complexes_[c]);
        }
      }
      sub_reactions.push_back({rx.label, old_to_new[rx.reactant], old_to_new[rx.product]});
    }
    return Network(species_, std::move(sub_complexes), std::move(sub_reactions), false);
  }

 private:
  void validate(bool require_nonnegative) {
    if (species_.empty()) throw NetworkError("network has no species");
    if (reactions_.empty()) throw NetworkError("network has no reactions");
    std::set<std::string> ids(species_.begin(), species_.end());
    if (ids.size() != species_.size()) throw NetworkError("duplicate species id");
    for (std::size_t c = 0; c < complexes_.size(); ++c) {
      if (complexes_[c].size() != species_.size()) throw NetworkError("complex has wrong length");
      if (require_nonnegative)
        for (const auto& coeff : complexes_[c])
          if (coeff.sign() < 0) throw NetworkError("complex has a negative coefficient");
      for (std::size_t d = c + 1; d < complexes_.size(); ++d)
        if (complexes_[c] == complexes_[d]) throw NetworkError("duplicate complex");
    }
    std::set<std::pair<std::size_t, std::size_t>> arcs;
    std::vector<bool> touched(complexes_.size(), false);
    for (const auto& q : reactions_) {
      if (q.reactant >= complexes_.size() || q.product >= complexes_.size())
        throw NetworkError("reaction references unknown complex");
      if (q.reactant == q.product)
        throw NetworkError("self-loop reaction '" + q.label + "'");
      if (!arcs.insert({q.reactant, q.product}).second)
        throw NetworkError("duplicate reaction arc '" + q.label + "'");
      touched[q.reactant] = touched[q.product] = true;
    }
    for (std::size_t c = 0; c < complexes_.size(); ++c)
      if (!touched[c]) throw NetworkError("complex participates in no reaction");
    std::set<std::string> labels;
    for (const auto& q : reactions_)
      if (!labels.insert(q.label).second) throw NetworkError("duplicate reaction label '" + q.label + "'");
  }

  void build_matrices() {
    const std::size_t m = species_.size(), n = complexes_.size(), r = reactions_.size();
    y_ = Matrix(m, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) y_(i, j) = complexes_[j][i];
    ia_ = Matrix(n, r);
    for (std::size_t j = 0; j < r; ++j) {
      ia_(reactions_[j].reactant, j) = Rational(-1);
      ia_(reactions_[j].product, j) = Rational(1);
    }
    n_ = y_ * ia_;
  }

  void build_graph() {
    const std::size_t n = complexes_.size();
    // weakly connected components
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& q : reactions_) parent[find(q.reactant)] = find(q.product);
    std::map<std::size_t, std::size_t> renumber;
    linkage_of_.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t root = find(c);
      auto it = renumber.find(root);
      if (it == renumber.end()) it = renumber.emplace(root, renumber.size()).first;
      linkage_of_[c] = it->second;
    }
    num_linkage_ = renumber.size();

    // Tarjan SCC, then renumber by smallest complex index
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& q : reactions_) adj[q.reactant].push_back(q.product);
    std::vector<long> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> comp(n, SIZE_MAX);
    long next_index = 0;
    std::size_t comp_count = 0;
    // iterative Tarjan
    struct Frame { std::size_t v; std::size_t edge; };
    for (std::size_t root = 0; root < n; ++root) {
      if (index[root] != -1) continue;
      std::vector<Frame> frames{{root, 0}};
      index[root] = low[root] = next_index++;
      stack.push_back(root);
      on_stack[root] = true;
      while (!frames.empty()) {
        Frame& f = frames.back();
        if (f.edge < adj[f.v].size()) {
          std::size_t w = adj[f.v][f.edge++];
          if (index[w] == -1) {
            index[w] = low[w] = next_index++;
            stack.push_back(w);
            on_stack[w] = true;
            frames.push_back({w, 0});
          } else if (on_stack[w]) {
            low[f.v] = std::min(low[f.v], index[w]);
          }
        } else {
          if (low[f.v] == index[f.v]) {
            for (;;) {
              std::size_t w = stack.back();
              stack.pop_back();
              on_stack[w] = false;
              comp[w] = comp_count;
              if (w == f.v) break;
            }
            ++comp_count;
          }
          std::size_t v = f.v;
          frames.pop_back();
          if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
      }
    }
    // deterministic ids: order strong classes by their smallest complex
    std::vector<std::size_t> first_seen(comp_count, SIZE_MAX);
    for (std::size_t c = 0; c < n; ++c)
      first_seen[comp[c]] = std::min(first_seen[comp[c]], c);
    std::vector<std::size_t> order(comp_count);
    for (std::size_t k = 0; k < comp_count; ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return first_seen[a] < first_seen[b]; });
    std::vector<std::size_t> new_id(comp_count);
    for (std::size_t k = 0; k < comp_count; ++k) new_id[order[k]] = k;
    strong_of_.resize(n);
    for (std::size_t c = 0; c < n; ++c) strong_of_[c] = new_id[comp[c]];
    num_strong_ = comp_count;
    terminal_.assign(comp_count, true);
    for (const auto& q : reactions_)
      if (strong_of_[q.reactant] != strong_of_[q.product]) terminal_[strong_of_[q.reactant]] = false;
  }

  void split_trail_into_simple_cycles(const std::vector<std::size_t>& trail,
                                      std::vector<std::vector<std::size_t>>& cycles) const {
    // walk the closed trail keeping a vertex stack; a repeated vertex closes
    // a simple cycle which is popped off
    std::vector<std::size_t> arc_stack;
    std::vector<std::size_t> vertex_stack{reactions_[trail.front()].reactant};
    for (std::size_t q : trail) {
      arc_stack.push_back(q);
      std::size_t head = reactions_[q].product;
      auto it = std::find(vertex_stack.begin(), vertex_stack.end(), head);
      if (it != vertex_stack.end()) {
        std::size_t keep = static_cast<std::size_t>(it - vertex_stack.begin());
        cycles.emplace_back(arc_stack.begin() + keep, arc_stack.end());
        arc_stack.resize(keep);
        vertex_stack.resize(keep + 1);
      } else {
        vertex_stack.push_back(head);
      }
    }
    if (!arc_stack.empty()) throw NetworkError("internal: trail did not close");
  }

  std::vector<std::string> species_;
  std::vector<RVec> complexes_;
  std::vector<Reaction> reactions_;
  Matrix y_, ia_, n_;
  std::vector<std::size_t> linkage_of_;
  std::size_t num_linkage_ = 0;
  std::vector<std::size_t> strong_of_;
  std::size_t num_strong_ = 0;
  std::vector<bool> terminal_;
};

/// Validated construction per the CRN definition: nonnegative complexes, no
/// self-loops, no duplicate complexes or arcs, every complex in a reaction.
inline Network build_network(std::vector<std::string> species, std::vector<RVec> complexes,
                             std::vector<Reaction> reactions) {
  return Network(std::move(species), std::move(complexes), std::move(reactions), true);
}

}  // namespace crnkit

#endif  // CRNKIT_NETWORK_HPP
