#include "mdsep/diagram.hpp"

#include <functional>
#include <queue>
#include <unordered_set>

#include "mdsep/errors.hpp"
#include "mdsep/union_find.hpp"

namespace mdsep {
namespace {

// Hands out identifiers that are unique within one graph under construction.
class NameAllocator {
 public:
  std::string claim(const std::string& base) {
    if (taken_.insert(base).second) return base;
    for (std::size_t k = 1;; ++k) {
      std::string candidate = base + "." + std::to_string(k);
      if (taken_.insert(candidate).second) return candidate;
    }
  }

 private:
  std::unordered_set<std::string> taken_;
};

void require_signature(const SignaturePtr& sig) {
  if (!sig) throw Error("string diagram has no signature");
}

void require_type(const Signature& sig, WireId t) {
  if (!sig.contains(t)) throw LookupError("unknown type index " + std::to_string(t.value));
}

}  // namespace

std::vector<WireId> StringDiagram::input_types() const {
  std::vector<WireId> out;
  out.reserve(inputs.size());
  for (auto w : inputs) out.push_back(type_of(w));
  return out;
}

std::vector<WireId> StringDiagram::output_types() const {
  std::vector<WireId> out;
  out.reserve(outputs.size());
  for (auto w : outputs) out.push_back(type_of(w));
  return out;
}

bool check_acyclic(const StringDiagram& d) {
  // Kahn's algorithm on the bipartite wire/box graph; a cycle there is exactly
  // a cyclic family A_i -in-> f_i -out-> A_{i+1}.
  const std::size_t nw = d.body.wire_count();
  const std::size_t nb = d.body.box_count();
  std::vector<std::size_t> indegree(nw + nb, 0);
  std::vector<std::vector<std::size_t>> succ(nw + nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const Box& box = d.body.boxes()[b];
    for (auto w : box.inputs) {
      if (w.value >= nw) continue;
      succ[w.value].push_back(nw + b);
      ++indegree[nw + b];
    }
    for (auto w : box.outputs) {
      if (w.value >= nw) continue;
      succ[nw + b].push_back(w.value);
      ++indegree[w.value];
    }
  }
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < nw + nb; ++v)
    if (indegree[v] == 0) stack.push_back(v);
  std::size_t seen = 0;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    ++seen;
    for (auto s : succ[v])
      if (--indegree[s] == 0) stack.push_back(s);
  }
  return seen == nw + nb;
}

bool check_left_monogamous(const StringDiagram& d) {
  std::vector<std::size_t> producers(d.body.wire_count(), 0);
  auto bump = [&](WireId w) {
    if (w.value < producers.size()) ++producers[w.value];
  };
  for (auto w : d.inputs) bump(w);
  for (const auto& box : d.body.boxes())
    for (auto w : box.outputs) bump(w);
  return std::all_of(producers.begin(), producers.end(), [](std::size_t n) { return n <= 1; });
}

std::vector<std::string> validate_diagram(const StringDiagram& d) {
  std::vector<std::string> out;
  if (!d.signature) {
    out.push_back("missing signature");
    return out;
  }
  for (const auto& v : validate_morphism(d.typing, d.body, *d.signature))
    out.push_back("typing " + v.to_string());
  for (std::size_t i = 0; i < d.inputs.size(); ++i)
    if (!d.body.contains(d.inputs[i])) out.push_back("input leg position " + std::to_string(i) + " names no wire");
  for (std::size_t i = 0; i < d.outputs.size(); ++i)
    if (!d.body.contains(d.outputs[i])) out.push_back("output leg position " + std::to_string(i) + " names no wire");
  if (!out.empty()) return out;

  if (!check_acyclic(d)) out.push_back("body is not acyclic");
  if (!check_left_monogamous(d)) {
    std::vector<std::size_t> producers(d.body.wire_count(), 0);
    for (auto w : d.inputs) ++producers[w.value];
    for (const auto& box : d.body.boxes())
      for (auto w : box.outputs) ++producers[w.value];
    for (std::size_t w = 0; w < producers.size(); ++w)
      if (producers[w] > 1)
        out.push_back("not left monogamous: wire '" + d.body.wire_names()[w] + "' is produced " +
                      std::to_string(producers[w]) + " times");
  }
  return out;
}

void require_valid(const StringDiagram& d) {
  auto violations = validate_diagram(d);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

bool same_signature(const StringDiagram& a, const StringDiagram& b) {
  if (a.signature == b.signature) return true;
  if (!a.signature || !b.signature) return false;
  return *a.signature == *b.signature;
}

std::vector<BoxId> topological_box_order(const StringDiagram& d) {
  const std::size_t nb = d.body.box_count();
  std::vector<std::optional<std::uint32_t>> producer(d.body.wire_count());
  for (std::uint32_t b = 0; b < nb; ++b)
    for (auto w : d.body.boxes()[b].outputs) producer[w.value] = b;

  std::vector<std::size_t> pending(nb, 0);
  std::vector<std::vector<std::uint32_t>> succ(nb);
  for (std::uint32_t b = 0; b < nb; ++b) {
    for (auto w : d.body.boxes()[b].inputs) {
      if (auto p = producer[w.value]) {
        succ[*p].push_back(b);
        ++pending[b];
      }
    }
  }
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
  for (std::uint32_t b = 0; b < nb; ++b)
    if (pending[b] == 0) ready.push(b);
  std::vector<BoxId> order;
  order.reserve(nb);
  while (!ready.empty()) {
    auto b = ready.top();
    ready.pop();
    order.push_back(BoxId{b});
    for (auto s : succ[b])
      if (--pending[s] == 0) ready.push(s);
  }
  if (order.size() != nb) throw ModelError("diagram body is cyclic");
  return order;
}

StringDiagram compose(const StringDiagram& f, const StringDiagram& g) {
  if (!same_signature(f, g)) throw InterfaceError("compose: diagrams over different signatures");
  if (f.outputs.size() != g.inputs.size())
    throw InterfaceError("compose: " + std::to_string(f.outputs.size()) + " outputs against " +
                         std::to_string(g.inputs.size()) + " inputs");
  for (std::size_t i = 0; i < f.outputs.size(); ++i)
    if (f.type_of(f.outputs[i]) != g.type_of(g.inputs[i]))
      throw InterfaceError("compose: type mismatch at interface position " + std::to_string(i) + " ('" +
                           f.type_name(f.outputs[i]) + "' vs '" + g.type_name(g.inputs[i]) + "')");

  const std::size_t nf = f.body.wire_count();
  const std::size_t ng = g.body.wire_count();
  UnionFind classes(nf + ng);
  for (std::size_t i = 0; i < f.outputs.size(); ++i) classes.unite(f.outputs[i].value, nf + g.inputs[i].value);

  StringDiagram r;
  r.signature = f.signature;
  NameAllocator names;
  std::vector<std::optional<WireId>> class_wire(nf + ng);
  std::vector<WireId> f_map(nf), g_map(ng);

  for (std::uint32_t w = 0; w < nf; ++w) {
    auto id = r.body.add_wire(names.claim(f.body.wire_names()[w]));
    r.typing.wire_map.push_back(f.typing.wire_map[w]);
    class_wire[classes.find(w)] = id;
    f_map[w] = id;
  }
  for (std::uint32_t w = 0; w < ng; ++w) {
    auto& slot = class_wire[classes.find(nf + w)];
    if (!slot) {
      slot = r.body.add_wire(names.claim(g.body.wire_names()[w]));
      r.typing.wire_map.push_back(g.typing.wire_map[w]);
    }
    g_map[w] = *slot;
  }

  NameAllocator box_names;
  auto copy_boxes = [&](const StringDiagram& src, const std::vector<WireId>& wmap) {
    for (std::size_t b = 0; b < src.body.box_count(); ++b) {
      const Box& box = src.body.boxes()[b];
      std::vector<WireId> in, out;
      for (auto w : box.inputs) in.push_back(wmap[w.value]);
      for (auto w : box.outputs) out.push_back(wmap[w.value]);
      r.body.add_box(box_names.claim(box.name), std::move(in), std::move(out));
      r.typing.box_map.push_back(src.typing.box_map[b]);
    }
  };
  copy_boxes(f, f_map);
  copy_boxes(g, g_map);

  for (auto w : f.inputs) r.inputs.push_back(f_map[w.value]);
  for (auto w : g.outputs) r.outputs.push_back(g_map[w.value]);
  return r;
}

StringDiagram tensor(const StringDiagram& f, const StringDiagram& g) {
  if (!same_signature(f, g)) throw InterfaceError("tensor: diagrams over different signatures");
  StringDiagram r;
  r.signature = f.signature;
  NameAllocator names, box_names;
  std::vector<WireId> f_map, g_map;
  auto copy_wires = [&](const StringDiagram& src, std::vector<WireId>& wmap) {
    for (std::size_t w = 0; w < src.body.wire_count(); ++w) {
      wmap.push_back(r.body.add_wire(names.claim(src.body.wire_names()[w])));
      r.typing.wire_map.push_back(src.typing.wire_map[w]);
    }
  };
  auto copy_boxes = [&](const StringDiagram& src, const std::vector<WireId>& wmap) {
    for (std::size_t b = 0; b < src.body.box_count(); ++b) {
      const Box& box = src.body.boxes()[b];
      std::vector<WireId> in, out;
      for (auto w : box.inputs) in.push_back(wmap[w.value]);
      for (auto w : box.outputs) out.push_back(wmap[w.value]);
      r.body.add_box(box_names.claim(box.name), std::move(in), std::move(out));
      r.typing.box_map.push_back(src.typing.box_map[b]);
    }
  };
  copy_wires(f, f_map);
  copy_wires(g, g_map);
  copy_boxes(f, f_map);
  copy_boxes(g, g_map);
  for (auto w : f.inputs) r.inputs.push_back(f_map[w.value]);
  for (auto w : g.inputs) r.inputs.push_back(g_map[w.value]);
  for (auto w : f.outputs) r.outputs.push_back(f_map[w.value]);
  for (auto w : g.outputs) r.outputs.push_back(g_map[w.value]);
  return r;
}

StringDiagram empty_diagram(SignaturePtr sig) {
  require_signature(sig);
  StringDiagram d;
  d.signature = std::move(sig);
  return d;
}

StringDiagram box_diagram(SignaturePtr sig, BoxId box_type) {
  require_signature(sig);
  const Box& gen = sig->box(box_type);
  StringDiagram d;
  d.signature = sig;
  std::vector<WireId> in, out;
  for (std::size_t i = 0; i < gen.inputs.size(); ++i) {
    in.push_back(d.body.add_wire("x" + std::to_string(i)));
    d.typing.wire_map.push_back(gen.inputs[i]);
  }
  for (std::size_t j = 0; j < gen.outputs.size(); ++j) {
    out.push_back(d.body.add_wire("y" + std::to_string(j)));
    d.typing.wire_map.push_back(gen.outputs[j]);
  }
  d.inputs = in;
  d.outputs = out;
  d.body.add_box(gen.name, std::move(in), std::move(out));
  d.typing.box_map.push_back(box_type);
  return d;
}

namespace {

std::vector<WireId> bare_wires(StringDiagram& d, std::span<const WireId> types, const std::string& prefix) {
  std::vector<WireId> wires;
  for (std::size_t i = 0; i < types.size(); ++i) {
    require_type(*d.signature, types[i]);
    wires.push_back(d.body.add_wire(prefix + std::to_string(i)));
    d.typing.wire_map.push_back(types[i]);
  }
  return wires;
}

}  // namespace

StringDiagram identity_diagram(SignaturePtr sig, std::span<const WireId> types) {
  auto d = empty_diagram(std::move(sig));
  auto wires = bare_wires(d, types, "w");
  d.inputs = wires;
  d.outputs = wires;
  return d;
}

StringDiagram swap_diagram(SignaturePtr sig, std::span<const WireId> first, std::span<const WireId> second) {
  auto d = empty_diagram(std::move(sig));
  auto a = bare_wires(d, first, "s");
  auto b = bare_wires(d, second, "t");
  d.inputs = a;
  d.inputs.insert(d.inputs.end(), b.begin(), b.end());
  d.outputs = b;
  d.outputs.insert(d.outputs.end(), a.begin(), a.end());
  return d;
}

StringDiagram copy_diagram(SignaturePtr sig, std::span<const WireId> types) {
  auto d = empty_diagram(std::move(sig));
  auto wires = bare_wires(d, types, "w");
  d.inputs = wires;
  d.outputs = wires;
  d.outputs.insert(d.outputs.end(), wires.begin(), wires.end());
  return d;
}

StringDiagram del_diagram(SignaturePtr sig, std::span<const WireId> types) {
  auto d = empty_diagram(std::move(sig));
  d.inputs = bare_wires(d, types, "w");
  return d;
}

StringDiagram identity_diagram(SignaturePtr sig, WireId type) {
  return identity_diagram(std::move(sig), std::span<const WireId>(&type, 1));
}
StringDiagram swap_diagram(SignaturePtr sig, WireId first, WireId second) {
  return swap_diagram(std::move(sig), std::span<const WireId>(&first, 1), std::span<const WireId>(&second, 1));
}
StringDiagram copy_diagram(SignaturePtr sig, WireId type) {
  return copy_diagram(std::move(sig), std::span<const WireId>(&type, 1));
}
StringDiagram del_diagram(SignaturePtr sig, WireId type) {
  return del_diagram(std::move(sig), std::span<const WireId>(&type, 1));
}

StringDiagram reindex_outputs(const StringDiagram& d, std::span<const std::size_t> positions) {
  StringDiagram r = d;
  r.outputs.clear();
  for (auto p : positions) {
    if (p >= d.outputs.size()) throw InterfaceError("output position " + std::to_string(p) + " out of range");
    r.outputs.push_back(d.outputs[p]);
  }
  return r;
}

}  // namespace mdsep
