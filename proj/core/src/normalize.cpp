#include "mdsep/normalize.hpp"

#include <algorithm>

#include "mdsep/errors.hpp"

namespace mdsep {
namespace {

// Worklist elimination. `leg_uses[w]` counts how often w is on the output
// leg; a box is eliminable once none of its outputs is used by the leg or by
// a surviving box. Returns the removed-box mask.
std::vector<char> eliminate(const Hypergraph& body, const std::vector<std::size_t>& leg_uses,
                            const EliminationChooser* choose) {
  const auto& boxes = body.boxes();
  std::vector<std::size_t> reads(body.wire_count(), 0);
  std::vector<std::optional<std::uint32_t>> producer(body.wire_count());
  for (std::uint32_t b = 0; b < boxes.size(); ++b) {
    for (auto w : boxes[b].inputs) ++reads[w.value];
    for (auto w : boxes[b].outputs) producer[w.value] = b;
  }
  auto discarded = [&](WireId w) { return reads[w.value] == 0 && leg_uses[w.value] == 0; };
  auto eliminable = [&](std::uint32_t b) {
    return std::all_of(boxes[b].outputs.begin(), boxes[b].outputs.end(), discarded);
  };

  std::vector<char> removed(boxes.size(), 0), queued(boxes.size(), 0);
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t b = 0; b < boxes.size(); ++b)
    if (eliminable(b)) {
      candidates.push_back(b);
      queued[b] = 1;
    }

  while (!candidates.empty()) {
    std::size_t pick = 0;
    if (choose) {
      pick = (*choose)(candidates.size());
      if (pick >= candidates.size()) throw Error("elimination chooser returned an out-of-range index");
    }
    const auto b = candidates[pick];
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
    removed[b] = 1;
    for (auto w : boxes[b].inputs) {
      if (--reads[w.value] != 0 || leg_uses[w.value] != 0) continue;
      auto p = producer[w.value];
      if (p && !queued[*p] && eliminable(*p)) {
        queued[*p] = 1;
        candidates.insert(std::lower_bound(candidates.begin(), candidates.end(), *p), *p);
      }
    }
  }
  return removed;
}

std::vector<std::size_t> leg_uses_of(const StringDiagram& d) {
  std::vector<std::size_t> uses(d.body.wire_count(), 0);
  for (auto w : d.outputs) ++uses[w.value];
  return uses;
}

// Copy of d keeping only unmarked boxes; outputs of removed boxes vanish.
StringDiagram drop_boxes(const StringDiagram& d, const std::vector<char>& removed) {
  const auto& boxes = d.body.boxes();
  std::vector<char> keep_wire(d.body.wire_count(), 1);
  for (std::size_t b = 0; b < boxes.size(); ++b)
    if (removed[b])
      for (auto w : boxes[b].outputs) keep_wire[w.value] = 0;

  StringDiagram out;
  out.signature = d.signature;
  std::vector<WireId> remap(d.body.wire_count());
  for (std::size_t w = 0; w < keep_wire.size(); ++w) {
    if (!keep_wire[w]) continue;
    remap[w] = out.body.add_wire(d.body.wire_names()[w]);
    out.typing.wire_map.push_back(d.typing.wire_map[w]);
  }
  auto map_all = [&](const std::vector<WireId>& ws) {
    std::vector<WireId> r;
    r.reserve(ws.size());
    for (auto w : ws) r.push_back(remap[w.value]);
    return r;
  };
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    if (removed[b]) continue;
    out.body.add_box(boxes[b].name, map_all(boxes[b].inputs), map_all(boxes[b].outputs));
    out.typing.box_map.push_back(d.typing.box_map[b]);
  }
  out.inputs = map_all(d.inputs);
  out.outputs = map_all(d.outputs);
  return out;
}

}  // namespace

std::vector<BoxId> eliminable_boxes(const StringDiagram& d) {
  const auto uses = leg_uses_of(d);
  std::vector<std::size_t> reads(d.body.wire_count(), 0);
  for (const auto& box : d.body.boxes())
    for (auto w : box.inputs) ++reads[w.value];
  std::vector<BoxId> out;
  const auto& boxes = d.body.boxes();
  for (std::uint32_t b = 0; b < boxes.size(); ++b) {
    bool all = std::all_of(boxes[b].outputs.begin(), boxes[b].outputs.end(),
                           [&](WireId w) { return reads[w.value] == 0 && uses[w.value] == 0; });
    if (all) out.push_back(BoxId{b});
  }
  return out;
}

StringDiagram normalize(const StringDiagram& d) { return drop_boxes(d, eliminate(d.body, leg_uses_of(d), nullptr)); }

StringDiagram normalize(const StringDiagram& d, const EliminationChooser& choose) {
  return drop_boxes(d, eliminate(d.body, leg_uses_of(d), &choose));
}

static void require_outputs(const CausalModel& phi, const WireSet& keep) {
  for (auto w : keep) {
    if (!phi.body().contains(w)) throw LookupError("unknown wire index " + std::to_string(w.value));
    if (!phi.is_output(w)) throw QueryError("wire '" + phi.body().wire_name(w) + "' is not an output");
  }
}

std::vector<char> surviving_boxes(const CausalModel& phi, const WireSet& keep) {
  require_outputs(phi, keep);
  std::vector<std::size_t> uses(phi.wire_count(), 0);
  for (auto w : keep) uses[w.value] = 1;
  auto removed = eliminate(phi.body(), uses, nullptr);
  for (auto& r : removed) r = !r;
  return removed;
}

CausalModel marginalize(const CausalModel& phi, const WireSet& keep) {
  require_outputs(phi, keep);
  StringDiagram d = phi.diagram();
  std::vector<WireId> outs;
  for (auto w : d.outputs)
    if (contains(keep, w)) outs.push_back(w);
  d.outputs = std::move(outs);
  return CausalModel::from_diagram(normalize(d));
}

WireSet ancestors(const CausalModel& phi, const WireSet& x) { return phi.ancestors(x); }
WireSet descendants(const CausalModel& phi, const WireSet& x) { return phi.descendants(x); }

CausalModel pure_bloom_version(const CausalModel& phi) {
  if (phi.is_pure_bloom()) return phi;
  StringDiagram d = phi.diagram();
  for (std::uint32_t w = 0; w < d.body.wire_count(); ++w)
    if (!phi.is_output(WireId{w})) d.outputs.push_back(WireId{w});
  return CausalModel::from_diagram(std::move(d));
}

std::vector<BoxId> final_boxes(const CausalModel& phi) {
  if (!phi.is_pure_bloom()) throw ModelError("final boxes are defined for pure blooms only");
  std::vector<BoxId> out;
  const auto& boxes = phi.body().boxes();
  for (std::uint32_t b = 0; b < boxes.size(); ++b) {
    bool feeds = std::any_of(boxes[b].outputs.begin(), boxes[b].outputs.end(),
                             [&](WireId w) { return !phi.consumers(w).empty(); });
    if (!feeds) out.push_back(BoxId{b});
  }
  return out;
}

}  // namespace mdsep
