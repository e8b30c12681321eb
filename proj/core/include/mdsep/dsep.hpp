#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdsep/causal_model.hpp"
#include "mdsep/diagram.hpp"
#include "mdsep/wire_set.hpp"

namespace mdsep {

// Three pairwise disjoint sets of output wires.
struct DSepQuery {
  WireSet x, y, z;
};

// Throws QueryError unless x, y, z are disjoint subsets of out(phi).
void validate_query(const CausalModel& phi, const DSepQuery& q);

// Deletes the wires in z together with every port attached to them. Boxes
// are kept with lowered arities; z disappears from both legs. The result is
// typed over its own body (identity typing) and is not normalized. Throws
// QueryError when z contains a non-output.
StringDiagram cut(const StringDiagram& d, const WireSet& z);
StringDiagram cut(const CausalModel& phi, const WireSet& z);

// Component label per wire, where a box joins all wires attached to it.
std::vector<std::size_t> undirected_components(const StringDiagram& d);
bool undirected_reachable(const StringDiagram& d, WireId a, WireId b);

// No undirected path from x to y in the cut of the marginal on x ∪ y ∪ z.
// Vacuously true when x or y is empty.
bool d_separated_categorical(const CausalModel& phi, const DSepQuery& q);

// The same decision spelled out: marginalize, cut, test reachability.
bool d_separated_by_construction(const CausalModel& phi, const DSepQuery& q);

// Wires as nodes, edge A -> B when B's producer reads A.
struct Dag {
  std::vector<std::vector<std::uint32_t>> parents;
  std::vector<std::vector<std::uint32_t>> children;

  std::size_t size() const noexcept { return parents.size(); }
  void add_edge(std::uint32_t from, std::uint32_t to);
};

// Why phi has no underlying DAG, or nullopt when it has one.
std::optional<std::string> dag_obstruction(const CausalModel& phi);

// Requires a pure bloom with no inputs and single-output boxes; throws
// ModelError naming the first offending box or wire otherwise.
Dag underlying_dag(const CausalModel& phi);

// Reachability along active trails (Bayes ball).
bool d_separated_classical(const Dag& g, const WireSet& x, const WireSet& y, const WireSet& z);
bool d_separated_classical(const CausalModel& phi, const DSepQuery& q);

struct EquivalenceReport {
  bool categorical = false;
  bool classical = false;
  bool agree() const noexcept { return categorical == classical; }
};

EquivalenceReport equivalence_check(const CausalModel& phi, const DSepQuery& q);

}  // namespace mdsep
