#pragma once

#include <algorithm>
#include <initializer_list>
#include <vector>

#include "mdsep/hypergraph.hpp"

namespace mdsep {

// Sorted, duplicate-free list of wires.
using WireSet = std::vector<WireId>;

inline WireSet make_wire_set(std::vector<WireId> wires) {
  std::sort(wires.begin(), wires.end());
  wires.erase(std::unique(wires.begin(), wires.end()), wires.end());
  return wires;
}

inline WireSet make_wire_set(std::initializer_list<WireId> wires) {
  return make_wire_set(std::vector<WireId>(wires));
}

inline bool contains(const WireSet& s, WireId w) { return std::binary_search(s.begin(), s.end(), w); }

inline WireSet set_union(const WireSet& a, const WireSet& b) {
  WireSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline WireSet set_difference(const WireSet& a, const WireSet& b) {
  WireSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline WireSet set_intersection(const WireSet& a, const WireSet& b) {
  WireSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const WireSet& a, const WireSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool disjoint(const WireSet& a, const WireSet& b) { return set_intersection(a, b).empty(); }

}  // namespace mdsep
