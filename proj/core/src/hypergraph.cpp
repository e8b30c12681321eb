#include "mdsep/hypergraph.hpp"

#include <algorithm>
#include <unordered_set>

#include "mdsep/errors.hpp"

namespace mdsep {

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::dangling_wire: return "dangling-wire";
    case ViolationKind::duplicate_wire: return "duplicate-wire";
    case ViolationKind::duplicate_box: return "duplicate-box";
    case ViolationKind::map_size: return "map-size";
    case ViolationKind::map_out_of_range: return "map-out-of-range";
    case ViolationKind::arity_mismatch: return "arity-mismatch";
    case ViolationKind::naturality: return "naturality";
  }
  return "unknown";
}

std::string Violation::to_string() const {
  std::string out{mdsep::to_string(kind)};
  out += "(" + subject + ")";
  if (!detail.empty()) out += ": " + detail;
  return out;
}

Hypergraph Hypergraph::from_data(const HypergraphData& data) {
  auto violations = validate_hypergraph(data);
  if (!violations.empty()) {
    std::vector<std::string> messages;
    messages.reserve(violations.size());
    for (const auto& v : violations) messages.push_back(v.to_string());
    throw ValidationError(std::move(messages));
  }
  Hypergraph g;
  for (const auto& w : data.wires) g.add_wire(w);
  for (const auto& b : data.boxes) {
    std::vector<WireId> in, out;
    in.reserve(b.inputs.size());
    out.reserve(b.outputs.size());
    for (const auto& w : b.inputs) in.push_back(g.wire(w));
    for (const auto& w : b.outputs) out.push_back(g.wire(w));
    g.add_box(b.id, std::move(in), std::move(out));
  }
  return g;
}

WireId Hypergraph::add_wire(std::string name) {
  const auto id = static_cast<std::uint32_t>(wire_names_.size());
  auto [it, inserted] = wire_index_.emplace(name, id);
  if (!inserted) throw Error("duplicate wire identifier '" + name + "'");
  wire_names_.push_back(std::move(name));
  return WireId{id};
}

BoxId Hypergraph::add_box(std::string name, std::vector<WireId> inputs, std::vector<WireId> outputs) {
  for (auto w : inputs)
    if (!contains(w)) throw LookupError("box '" + name + "' references unknown wire index");
  for (auto w : outputs)
    if (!contains(w)) throw LookupError("box '" + name + "' references unknown wire index");
  const auto id = static_cast<std::uint32_t>(boxes_.size());
  auto [it, inserted] = box_index_.emplace(name, id);
  if (!inserted) throw Error("duplicate box identifier '" + name + "'");
  boxes_.push_back(Box{std::move(name), std::move(inputs), std::move(outputs)});
  return BoxId{id};
}

const std::string& Hypergraph::wire_name(WireId w) const {
  if (!contains(w)) throw LookupError("wire index " + std::to_string(w.value) + " out of range");
  return wire_names_[w.value];
}

const Box& Hypergraph::box(BoxId b) const {
  if (!contains(b)) throw LookupError("box index " + std::to_string(b.value) + " out of range");
  return boxes_[b.value];
}

std::optional<WireId> Hypergraph::find_wire(std::string_view name) const {
  auto it = wire_index_.find(std::string(name));
  if (it == wire_index_.end()) return std::nullopt;
  return WireId{it->second};
}

std::optional<BoxId> Hypergraph::find_box(std::string_view name) const {
  auto it = box_index_.find(std::string(name));
  if (it == box_index_.end()) return std::nullopt;
  return BoxId{it->second};
}

WireId Hypergraph::wire(std::string_view name) const {
  if (auto w = find_wire(name)) return *w;
  throw LookupError("unknown wire '" + std::string(name) + "'");
}

BoxId Hypergraph::box_id(std::string_view name) const {
  if (auto b = find_box(name)) return *b;
  throw LookupError("unknown box '" + std::string(name) + "'");
}

HypergraphData Hypergraph::to_data() const {
  HypergraphData data;
  data.wires = wire_names_;
  data.boxes.reserve(boxes_.size());
  for (const auto& b : boxes_) {
    BoxData bd{b.name, {}, {}};
    for (auto w : b.inputs) bd.inputs.push_back(wire_names_[w.value]);
    for (auto w : b.outputs) bd.outputs.push_back(wire_names_[w.value]);
    data.boxes.push_back(std::move(bd));
  }
  return data;
}

bool operator==(const Hypergraph& a, const Hypergraph& b) {
  if (a.wire_names_ != b.wire_names_ || a.boxes_.size() != b.boxes_.size()) return false;
  for (std::size_t i = 0; i < a.boxes_.size(); ++i) {
    const auto& x = a.boxes_[i];
    const auto& y = b.boxes_[i];
    if (x.name != y.name || x.inputs != y.inputs || x.outputs != y.outputs) return false;
  }
  return true;
}

HypergraphMorphism HypergraphMorphism::identity(const Hypergraph& g) {
  HypergraphMorphism m;
  m.wire_map.reserve(g.wire_count());
  m.box_map.reserve(g.box_count());
  for (std::uint32_t i = 0; i < g.wire_count(); ++i) m.wire_map.push_back(WireId{i});
  for (std::uint32_t i = 0; i < g.box_count(); ++i) m.box_map.push_back(BoxId{i});
  return m;
}

std::vector<Violation> validate_hypergraph(const HypergraphData& g) {
  std::vector<Violation> out;
  std::unordered_set<std::string> wires;
  for (const auto& w : g.wires)
    if (!wires.insert(w).second) out.push_back({ViolationKind::duplicate_wire, w, {}});

  std::unordered_set<std::string> boxes;
  for (const auto& b : g.boxes) {
    if (!boxes.insert(b.id).second) out.push_back({ViolationKind::duplicate_box, b.id, {}});
    // Report each undeclared wire once per box.
    std::unordered_set<std::string> reported;
    auto check = [&](const std::string& w, std::string_view side, std::size_t port) {
      if (wires.count(w) || !reported.insert(w).second) return;
      out.push_back({ViolationKind::dangling_wire, w,
                     "box '" + b.id + "' " + std::string(side) + " port " + std::to_string(port)});
    };
    for (std::size_t i = 0; i < b.inputs.size(); ++i) check(b.inputs[i], "input", i);
    for (std::size_t j = 0; j < b.outputs.size(); ++j) check(b.outputs[j], "output", j);
  }
  return out;
}

std::vector<Violation> validate_morphism(const HypergraphMorphism& m, const Hypergraph& src,
                                         const Hypergraph& dst) {
  std::vector<Violation> out;
  if (m.wire_map.size() != src.wire_count())
    out.push_back({ViolationKind::map_size, "wire_map",
                   "has " + std::to_string(m.wire_map.size()) + " entries, source has " +
                       std::to_string(src.wire_count()) + " wires"});
  if (m.box_map.size() != src.box_count())
    out.push_back({ViolationKind::map_size, "box_map",
                   "has " + std::to_string(m.box_map.size()) + " entries, source has " +
                       std::to_string(src.box_count()) + " boxes"});
  if (!out.empty()) return out;

  for (std::size_t i = 0; i < m.wire_map.size(); ++i)
    if (!dst.contains(m.wire_map[i]))
      out.push_back({ViolationKind::map_out_of_range, src.wire_names()[i], "image not a target wire"});
  for (std::size_t i = 0; i < m.box_map.size(); ++i)
    if (!dst.contains(m.box_map[i]))
      out.push_back({ViolationKind::map_out_of_range, src.boxes()[i].name, "image not a target box"});
  if (!out.empty()) return out;

  auto wire_image = [&](WireId w) { return m.wire_map[w.value]; };
  for (std::size_t i = 0; i < src.box_count(); ++i) {
    const Box& b = src.boxes()[i];
    const Box& image = dst.box(m.box_map[i]);
    if (b.inputs.size() != image.inputs.size() || b.outputs.size() != image.outputs.size()) {
      out.push_back({ViolationKind::arity_mismatch, b.name,
                     "(" + std::to_string(b.inputs.size()) + "," + std::to_string(b.outputs.size()) +
                         ")-box mapped to (" + std::to_string(image.inputs.size()) + "," +
                         std::to_string(image.outputs.size()) + ")-box '" + image.name + "'"});
      continue;
    }
    for (std::size_t k = 0; k < b.inputs.size(); ++k)
      if (wire_image(b.inputs[k]) != image.inputs[k])
        out.push_back({ViolationKind::naturality, b.name, "input port " + std::to_string(k)});
    for (std::size_t k = 0; k < b.outputs.size(); ++k)
      if (wire_image(b.outputs[k]) != image.outputs[k])
        out.push_back({ViolationKind::naturality, b.name, "output port " + std::to_string(k)});
  }
  return out;
}

HypergraphMorphism compose(const HypergraphMorphism& first, const HypergraphMorphism& second) {
  HypergraphMorphism m;
  m.wire_map.reserve(first.wire_map.size());
  m.box_map.reserve(first.box_map.size());
  for (auto w : first.wire_map) m.wire_map.push_back(second.wire_map.at(w.value));
  for (auto b : first.box_map) m.box_map.push_back(second.box_map.at(b.value));
  return m;
}

std::size_t in_count(const Hypergraph& g, BoxId b, WireId w) {
  const Box& box = g.box(b);
  g.wire_name(w);  // lookup check
  return static_cast<std::size_t>(std::count(box.inputs.begin(), box.inputs.end(), w));
}

std::size_t out_count(const Hypergraph& g, BoxId b, WireId w) {
  const Box& box = g.box(b);
  g.wire_name(w);
  return static_cast<std::size_t>(std::count(box.outputs.begin(), box.outputs.end(), w));
}

namespace {

std::vector<WireId> dedup(const std::vector<WireId>& ports) {
  std::vector<WireId> out;
  for (auto w : ports)
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
  return out;
}

}  // namespace

std::vector<WireId> in_set(const Hypergraph& g, BoxId b) { return dedup(g.box(b).inputs); }
std::vector<WireId> out_set(const Hypergraph& g, BoxId b) { return dedup(g.box(b).outputs); }

}  // namespace mdsep
