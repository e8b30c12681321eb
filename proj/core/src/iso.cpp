#include <algorithm>
#include <cstdint>
#include <vector>

#include "mdsep/diagram.hpp"

namespace mdsep {
namespace {

using Descriptor = std::vector<std::int64_t>;

// Isomorphism-invariant fingerprint of every wire: its type, the port that
// produces it, the ports that consume it, and its leg positions. Two
// isomorphic diagrams have equal sorted fingerprints.
std::vector<Descriptor> wire_fingerprints(const StringDiagram& d) {
  const std::size_t nw = d.body.wire_count();
  std::vector<Descriptor> producer(nw), consumers(nw), legs(nw);
  for (std::size_t b = 0; b < d.body.box_count(); ++b) {
    const Box& box = d.body.boxes()[b];
    const std::int64_t type = d.typing.box_map[b].value;
    for (std::size_t k = 0; k < box.outputs.size(); ++k)
      producer[box.outputs[k].value] = {type, static_cast<std::int64_t>(k)};
    for (std::size_t k = 0; k < box.inputs.size(); ++k) {
      auto& c = consumers[box.inputs[k].value];
      c.push_back(type * 4096 + static_cast<std::int64_t>(k));
    }
  }
  for (std::size_t i = 0; i < d.inputs.size(); ++i) legs[d.inputs[i].value].push_back(-1 - static_cast<std::int64_t>(i));
  for (std::size_t j = 0; j < d.outputs.size(); ++j) legs[d.outputs[j].value].push_back(static_cast<std::int64_t>(j));

  std::vector<Descriptor> out(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    auto& desc = out[w];
    desc.push_back(d.typing.wire_map[w].value);
    desc.push_back(static_cast<std::int64_t>(producer[w].size()));
    desc.insert(desc.end(), producer[w].begin(), producer[w].end());
    std::sort(consumers[w].begin(), consumers[w].end());
    desc.push_back(static_cast<std::int64_t>(consumers[w].size()));
    desc.insert(desc.end(), consumers[w].begin(), consumers[w].end());
    std::sort(legs[w].begin(), legs[w].end());
    desc.push_back(static_cast<std::int64_t>(legs[w].size()));
    desc.insert(desc.end(), legs[w].begin(), legs[w].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

class IsoSearch {
 public:
  IsoSearch(const StringDiagram& f, const StringDiagram& g)
      : f_(f),
        g_(g),
        f2g_(f.body.wire_count(), -1),
        g2f_(g.body.wire_count(), -1),
        box_used_(g.body.box_count(), false),
        box_done_(f.body.box_count(), false) {}

  bool run() {
    for (std::size_t i = 0; i < f_.inputs.size(); ++i)
      if (!bind(f_.inputs[i], g_.inputs[i])) return false;
    for (std::size_t j = 0; j < f_.outputs.size(); ++j)
      if (!bind(f_.outputs[j], g_.outputs[j])) return false;
    trail_.clear();
    return search(0);
  }

 private:
  bool bind(WireId a, WireId b) {
    auto& fa = f2g_[a.value];
    auto& gb = g2f_[b.value];
    if (fa == -1 && gb == -1) {
      if (f_.typing.wire_map[a.value] != g_.typing.wire_map[b.value]) return false;
      fa = static_cast<std::int64_t>(b.value);
      gb = static_cast<std::int64_t>(a.value);
      trail_.push_back(a.value);
      return true;
    }
    return fa == static_cast<std::int64_t>(b.value);
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      auto a = trail_.back();
      trail_.pop_back();
      g2f_[static_cast<std::size_t>(f2g_[a])] = -1;
      f2g_[a] = -1;
    }
  }

  // Unmapped f-box with the most already-bound port wires.
  std::optional<std::size_t> pick_box() const {
    std::optional<std::size_t> best;
    std::size_t best_score = 0;
    for (std::size_t b = 0; b < box_done_.size(); ++b) {
      if (box_done_[b]) continue;
      const Box& box = f_.body.boxes()[b];
      std::size_t score = 0;
      for (auto w : box.inputs) score += f2g_[w.value] != -1;
      for (auto w : box.outputs) score += f2g_[w.value] != -1;
      if (!best || score > best_score) {
        best = b;
        best_score = score;
      }
    }
    return best;
  }

  bool search(std::size_t depth) {
    auto next = pick_box();
    if (!next) return finish();
    const std::size_t fb = *next;
    const Box& fbox = f_.body.boxes()[fb];
    const auto type = f_.typing.box_map[fb];
    box_done_[fb] = true;
    for (std::size_t gb = 0; gb < box_used_.size(); ++gb) {
      if (box_used_[gb] || g_.typing.box_map[gb] != type) continue;
      const Box& gbox = g_.body.boxes()[gb];
      if (gbox.inputs.size() != fbox.inputs.size() || gbox.outputs.size() != fbox.outputs.size()) continue;
      const auto mark = trail_.size();
      bool ok = true;
      for (std::size_t k = 0; ok && k < fbox.inputs.size(); ++k) ok = bind(fbox.inputs[k], gbox.inputs[k]);
      for (std::size_t k = 0; ok && k < fbox.outputs.size(); ++k) ok = bind(fbox.outputs[k], gbox.outputs[k]);
      if (ok) {
        box_used_[gb] = true;
        if (search(depth + 1)) return true;
        box_used_[gb] = false;
      }
      undo_to(mark);
    }
    box_done_[fb] = false;
    return false;
  }

  // Wires touching no box and no leg are interchangeable within a type.
  bool finish() const {
    std::vector<std::uint32_t> free_f, free_g;
    for (std::size_t w = 0; w < f2g_.size(); ++w)
      if (f2g_[w] == -1) free_f.push_back(f_.typing.wire_map[w].value);
    for (std::size_t w = 0; w < g2f_.size(); ++w)
      if (g2f_[w] == -1) free_g.push_back(g_.typing.wire_map[w].value);
    std::sort(free_f.begin(), free_f.end());
    std::sort(free_g.begin(), free_g.end());
    return free_f == free_g;
  }

  const StringDiagram& f_;
  const StringDiagram& g_;
  std::vector<std::int64_t> f2g_, g2f_;
  std::vector<bool> box_used_, box_done_;
  std::vector<std::size_t> trail_;
};

}  // namespace

bool iso_equal(const StringDiagram& f, const StringDiagram& g) {
  if (!same_signature(f, g)) return false;
  if (f.body.wire_count() != g.body.wire_count() || f.body.box_count() != g.body.box_count()) return false;
  if (f.inputs.size() != g.inputs.size() || f.outputs.size() != g.outputs.size()) return false;
  if (f.input_types() != g.input_types() || f.output_types() != g.output_types()) return false;

  auto box_types = [](const StringDiagram& d) {
    std::vector<std::uint32_t> t;
    for (auto b : d.typing.box_map) t.push_back(b.value);
    std::sort(t.begin(), t.end());
    return t;
  };
  if (box_types(f) != box_types(g)) return false;
  if (wire_fingerprints(f) != wire_fingerprints(g)) return false;

  return IsoSearch(f, g).run();
}

}  // namespace mdsep
