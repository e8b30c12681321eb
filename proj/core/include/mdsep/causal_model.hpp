#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdsep/diagram.hpp"
#include "mdsep/wire_set.hpp"

namespace mdsep {

// A normalized string diagram whose output leg is injective. Ancestry over
// the wire relation A -> B (some box reads A and writes B) is precomputed.
class CausalModel {
 public:
  // Throws ModelError carrying every failed condition.
  static CausalModel from_diagram(StringDiagram d);

  // Diagram violations plus "not normalized" and "output leg not injective".
  static std::vector<std::string> violations(const StringDiagram& d);

  const StringDiagram& diagram() const noexcept { return diagram_; }
  const Hypergraph& body() const noexcept { return diagram_.body; }
  const std::vector<WireId>& inputs() const noexcept { return diagram_.inputs; }
  const std::vector<WireId>& outputs() const noexcept { return diagram_.outputs; }
  std::size_t wire_count() const noexcept { return diagram_.body.wire_count(); }
  std::size_t box_count() const noexcept { return diagram_.body.box_count(); }

  bool is_pure_bloom() const noexcept { return pure_bloom_; }
  bool is_output(WireId w) const { return output_position_.at(w.value).has_value(); }
  bool is_input(WireId w) const { return input_flag_.at(w.value); }
  // Position of w in the output leg.
  std::optional<std::size_t> output_position(WireId w) const { return output_position_.at(w.value); }

  WireSet input_set() const;
  WireSet output_set() const;

  std::optional<BoxId> producer(WireId w) const { return producer_.at(w.value); }
  const std::vector<BoxId>& consumers(WireId w) const { return consumers_.at(w.value); }
  const std::vector<BoxId>& topological_order() const noexcept { return topo_; }

  // u ->> v reflexive (u == v counts).
  bool reaches(WireId u, WireId v) const { return reach_[u.value * wire_count() + v.value] != 0; }

  WireSet ancestors(const WireSet& x) const;
  WireSet descendants(const WireSet& x) const;

  // True when every box has a distinct type in the signature.
  bool has_distinct_box_types() const;

 private:
  explicit CausalModel(StringDiagram d);

  StringDiagram diagram_;
  bool pure_bloom_ = false;
  std::vector<std::optional<std::size_t>> output_position_;
  std::vector<char> input_flag_;
  std::vector<std::optional<BoxId>> producer_;
  std::vector<std::vector<BoxId>> consumers_;
  std::vector<BoxId> topo_;
  std::vector<char> reach_;  // wire_count x wire_count
};

}  // namespace mdsep
