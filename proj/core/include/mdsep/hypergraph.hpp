#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mdsep {

// Dense index of a wire inside one Hypergraph. Only meaningful together with
// the graph that issued it.
struct WireId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(WireId, WireId) = default;
};

struct BoxId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(BoxId, BoxId) = default;
};

struct Box {
  std::string name;
  std::vector<WireId> inputs;
  std::vector<WireId> outputs;
};

// String-keyed description of a hypergraph as it appears in a file. Unlike
// Hypergraph it may be malformed; validate_hypergraph reports how.
struct BoxData {
  std::string id;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

struct HypergraphData {
  std::vector<std::string> wires;
  std::vector<BoxData> boxes;
};

enum class ViolationKind {
  dangling_wire,
  duplicate_wire,
  duplicate_box,
  map_size,
  map_out_of_range,
  arity_mismatch,
  naturality,
};

struct Violation {
  ViolationKind kind;
  std::string subject;  // offending wire or box identifier
  std::string detail;

  std::string to_string() const;
  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string_view to_string(ViolationKind kind);

// A finite directed hypergraph: wires plus boxes with ordered input and
// output port lists. Identifiers are opaque strings; all algorithms work on
// the dense WireId/BoxId indices assigned in insertion order.
class Hypergraph {
 public:
  Hypergraph() = default;

  // Throws ValidationError listing every violation of the data.
  static Hypergraph from_data(const HypergraphData& data);

  WireId add_wire(std::string name);
  BoxId add_box(std::string name, std::vector<WireId> inputs, std::vector<WireId> outputs);

  std::size_t wire_count() const noexcept { return wire_names_.size(); }
  std::size_t box_count() const noexcept { return boxes_.size(); }

  const std::string& wire_name(WireId w) const;
  const Box& box(BoxId b) const;
  const std::vector<Box>& boxes() const noexcept { return boxes_; }
  const std::vector<std::string>& wire_names() const noexcept { return wire_names_; }

  std::optional<WireId> find_wire(std::string_view name) const;
  std::optional<BoxId> find_box(std::string_view name) const;
  WireId wire(std::string_view name) const;  // throws LookupError
  BoxId box_id(std::string_view name) const;  // throws LookupError

  bool contains(WireId w) const noexcept { return w.value < wire_names_.size(); }
  bool contains(BoxId b) const noexcept { return b.value < boxes_.size(); }

  HypergraphData to_data() const;

  friend bool operator==(const Hypergraph& a, const Hypergraph& b);

 private:
  std::vector<std::string> wire_names_;
  std::vector<Box> boxes_;
  std::unordered_map<std::string, std::uint32_t> wire_index_;
  std::unordered_map<std::string, std::uint32_t> box_index_;
};

// Structure-preserving map between hypergraphs: arity-preserving on boxes and
// commuting with every in_i / out_j.
struct HypergraphMorphism {
  std::vector<WireId> wire_map;  // indexed by source wire
  std::vector<BoxId> box_map;    // indexed by source box

  static HypergraphMorphism identity(const Hypergraph& g);
};

std::vector<Violation> validate_hypergraph(const HypergraphData& g);
std::vector<Violation> validate_morphism(const HypergraphMorphism& m, const Hypergraph& src,
                                         const Hypergraph& dst);

// second ∘ first
HypergraphMorphism compose(const HypergraphMorphism& first, const HypergraphMorphism& second);

// Number of input (output) ports of b attached to w.
std::size_t in_count(const Hypergraph& g, BoxId b, WireId w);
std::size_t out_count(const Hypergraph& g, BoxId b, WireId w);

// De-duplicated port wires, in order of first appearance.
std::vector<WireId> in_set(const Hypergraph& g, BoxId b);
std::vector<WireId> out_set(const Hypergraph& g, BoxId b);

}  // namespace mdsep

template <>
struct std::hash<mdsep::WireId> {
  std::size_t operator()(mdsep::WireId w) const noexcept { return std::hash<std::uint32_t>{}(w.value); }
};

template <>
struct std::hash<mdsep::BoxId> {
  std::size_t operator()(mdsep::BoxId b) const noexcept { return std::hash<std::uint32_t>{}(b.value); }
};
