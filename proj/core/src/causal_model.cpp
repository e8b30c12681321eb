#include "mdsep/causal_model.hpp"

#include <unordered_set>

#include "mdsep/errors.hpp"
#include "mdsep/normalize.hpp"

namespace mdsep {

std::vector<std::string> CausalModel::violations(const StringDiagram& d) {
  auto out = validate_diagram(d);
  if (!out.empty()) return out;

  for (auto b : eliminable_boxes(d))
    out.push_back("not normalized: box '" + d.body.box(b).name + "' is eliminable");

  std::vector<char> seen(d.body.wire_count(), 0);
  for (auto w : d.outputs) {
    if (seen[w.value] == 1) out.push_back("output leg not injective: wire '" + d.body.wire_name(w) + "' listed twice");
    ++seen[w.value];
  }
  return out;
}

CausalModel CausalModel::from_diagram(StringDiagram d) {
  auto problems = violations(d);
  if (!problems.empty()) {
    std::string msg = "not a causal model";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ModelError(msg);
  }
  return CausalModel(std::move(d));
}

CausalModel::CausalModel(StringDiagram d) : diagram_(std::move(d)) {
  const std::size_t nw = diagram_.body.wire_count();
  output_position_.assign(nw, std::nullopt);
  for (std::size_t j = 0; j < diagram_.outputs.size(); ++j) output_position_[diagram_.outputs[j].value] = j;
  input_flag_.assign(nw, 0);
  for (auto w : diagram_.inputs) input_flag_[w.value] = 1;
  pure_bloom_ = diagram_.outputs.size() == nw;

  producer_.assign(nw, std::nullopt);
  consumers_.assign(nw, {});
  const auto& boxes = diagram_.body.boxes();
  for (std::uint32_t b = 0; b < boxes.size(); ++b) {
    for (auto w : boxes[b].outputs) producer_[w.value] = BoxId{b};
    for (auto w : in_set(diagram_.body, BoxId{b})) consumers_[w.value].push_back(BoxId{b});
  }
  topo_ = topological_box_order(diagram_);

  // Row u holds every v with u ->> v. Walking boxes against topological order
  // finalizes each output row before it is merged into the box's inputs.
  reach_.assign(nw * nw, 0);
  for (std::size_t w = 0; w < nw; ++w) reach_[w * nw + w] = 1;
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    const Box& box = boxes[it->value];
    for (auto i : box.inputs)
      for (auto o : box.outputs)
        for (std::size_t v = 0; v < nw; ++v) reach_[i.value * nw + v] |= reach_[o.value * nw + v];
  }
}

WireSet CausalModel::input_set() const { return make_wire_set(diagram_.inputs); }
WireSet CausalModel::output_set() const { return make_wire_set(diagram_.outputs); }

WireSet CausalModel::ancestors(const WireSet& x) const {
  const std::size_t nw = wire_count();
  for (auto w : x)
    if (w.value >= nw) throw LookupError("unknown wire index " + std::to_string(w.value));
  WireSet out;
  for (std::size_t u = 0; u < nw; ++u)
    for (auto w : x)
      if (reach_[u * nw + w.value]) {
        out.push_back(WireId{static_cast<std::uint32_t>(u)});
        break;
      }
  return out;
}

WireSet CausalModel::descendants(const WireSet& x) const {
  const std::size_t nw = wire_count();
  for (auto w : x)
    if (w.value >= nw) throw LookupError("unknown wire index " + std::to_string(w.value));
  WireSet out;
  for (std::size_t v = 0; v < nw; ++v)
    for (auto w : x)
      if (reach_[w.value * nw + v]) {
        out.push_back(WireId{static_cast<std::uint32_t>(v)});
        break;
      }
  return out;
}

bool CausalModel::has_distinct_box_types() const {
  std::unordered_set<std::uint32_t> seen;
  for (auto t : diagram_.typing.box_map)
    if (!seen.insert(t.value).second) return false;
  return true;
}

}  // namespace mdsep
