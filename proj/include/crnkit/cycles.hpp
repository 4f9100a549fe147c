#ifndef CRNKIT_CYCLES_HPP
#define CRNKIT_CYCLES_HPP

#include <cstddef>
#include <vector>

#include "crnkit/network.hpp"

namespace crnkit {

/// A simple directed cycle given as reaction (arc) indices in path order.
/// `anchor` is the vertex the enumeration was rooted at; the first arc
/// leaves the anchor.
struct SimpleCycle {
  std::vector<std::size_t> arcs;
  std::size_t anchor = 0;
};

struct CycleEnumeration {
  std::vector<SimpleCycle> cycles;
  bool truncated = false;  // hit the cap before the enumeration finished
};

/// All simple directed cycles through vertex `anchor`, in lexicographic
/// order of their arc-index sequences (DFS extends by ascending arc index).
/// Arcs with `allowed[q] == false` are skipped. Stops after `max_cycles`
/// cycles and sets `truncated`.
inline CycleEnumeration enumerate_cycles_through(const Network& net, std::size_t anchor,
                                                 const std::vector<bool>& allowed,
                                                 std::size_t max_cycles = SIZE_MAX) {
  CycleEnumeration out;
  const std::size_t n = net.num_complexes();
  std::vector<std::vector<std::size_t>> out_arcs(n);
  for (std::size_t q = 0; q < net.num_reactions(); ++q)
    if (allowed.empty() || allowed[q]) out_arcs[net.reaction(q).reactant].push_back(q);

  std::vector<bool> on_path(n, false);
  std::vector<std::size_t> path;  // arc indices

  struct Frame {
    std::size_t vertex;
    std::size_t next;  // index into out_arcs[vertex]
  };
  std::vector<Frame> stack{{anchor, 0}};
  on_path[anchor] = true;

  while (!stack.empty()) {
    Frame& f = stack.back();
    if (out.cycles.size() >= max_cycles) {
      out.truncated = true;
      break;
    }
    if (f.next < out_arcs[f.vertex].size()) {
      std::size_t q = out_arcs[f.vertex][f.next++];
      std::size_t head = net.reaction(q).product;
      if (head == anchor) {
        path.push_back(q);
        out.cycles.push_back({path, anchor});
        path.pop_back();
      } else if (!on_path[head]) {
        path.push_back(q);
        on_path[head] = true;
        stack.push_back({head, 0});
      }
    } else {
      on_path[f.vertex] = false;
      if (!path.empty()) path.pop_back();
      stack.pop_back();
    }
  }
  return out;
}

inline CycleEnumeration enumerate_cycles_through(const Network& net, std::size_t anchor,
                                                 std::size_t max_cycles = SIZE_MAX) {
  return enumerate_cycles_through(net, anchor, std::vector<bool>(), max_cycles);
}

}  // namespace crnkit

#endif  // CRNKIT_CYCLES_HPP
