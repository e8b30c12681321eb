#include "mdsep/dsep.hpp"

#include <deque>

#include "mdsep/errors.hpp"
#include "mdsep/normalize.hpp"
#include "mdsep/union_find.hpp"

namespace mdsep {
namespace {

std::string describe(const CausalModel& phi, const WireSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += phi.body().wire_name(s[i]);
  }
  return out + "}";
}

bool reaches_any(UnionFind& uf, const WireSet& x, const WireSet& y) {
  for (auto a : x)
    for (auto b : y)
      if (uf.connected(a.value, b.value)) return true;
  return false;
}

}  // namespace

void validate_query(const CausalModel& phi, const DSepQuery& q) {
  for (const WireSet* s : {&q.x, &q.y, &q.z})
    for (auto w : *s) {
      if (!phi.body().contains(w)) throw LookupError("unknown wire index " + std::to_string(w.value));
      if (!phi.is_output(w)) throw QueryError("wire '" + phi.body().wire_name(w) + "' is not an output");
    }
  if (!disjoint(q.x, q.y) || !disjoint(q.x, q.z) || !disjoint(q.y, q.z))
    throw QueryError("query sets overlap: X=" + describe(phi, q.x) + " Y=" + describe(phi, q.y) +
                     " Z=" + describe(phi, q.z));
}

StringDiagram cut(const StringDiagram& d, const WireSet& z) {
  for (auto w : z) {
    if (!d.body.contains(w)) throw LookupError("unknown wire index " + std::to_string(w.value));
    if (std::find(d.outputs.begin(), d.outputs.end(), w) == d.outputs.end())
      throw QueryError("cannot cut wire '" + d.body.wire_name(w) + "': not an output");
  }
  Hypergraph body;
  std::vector<std::optional<WireId>> remap(d.body.wire_count());
  for (std::uint32_t w = 0; w < d.body.wire_count(); ++w)
    if (!contains(z, WireId{w})) remap[w] = body.add_wire(d.body.wire_names()[w]);
  auto keep = [&](const std::vector<WireId>& ws) {
    std::vector<WireId> r;
    for (auto w : ws)
      if (remap[w.value]) r.push_back(*remap[w.value]);
    return r;
  };
  for (const auto& box : d.body.boxes()) body.add_box(box.name, keep(box.inputs), keep(box.outputs));

  StringDiagram out;
  out.typing = HypergraphMorphism::identity(body);
  out.inputs = keep(d.inputs);
  out.outputs = keep(d.outputs);
  out.signature = std::make_shared<const Signature>(body);
  out.body = std::move(body);
  return out;
}

StringDiagram cut(const CausalModel& phi, const WireSet& z) { return cut(phi.diagram(), z); }

std::vector<std::size_t> undirected_components(const StringDiagram& d) {
  UnionFind uf(d.body.wire_count());
  for (const auto& box : d.body.boxes()) {
    std::optional<WireId> first;
    for (const auto* ports : {&box.inputs, &box.outputs})
      for (auto w : *ports) {
        if (first)
          uf.unite(first->value, w.value);
        else
          first = w;
      }
  }
  std::vector<std::size_t> label(d.body.wire_count());
  for (std::size_t w = 0; w < label.size(); ++w) label[w] = uf.find(w);
  return label;
}

bool undirected_reachable(const StringDiagram& d, WireId a, WireId b) {
  if (!d.body.contains(a) || !d.body.contains(b)) throw LookupError("unknown wire in reachability query");
  if (a == b) return true;
  auto label = undirected_components(d);
  return label[a.value] == label[b.value];
}

bool d_separated_categorical(const CausalModel& phi, const DSepQuery& q) {
  validate_query(phi, q);
  if (q.x.empty() || q.y.empty()) return true;
  const auto alive = surviving_boxes(phi, set_union(set_union(q.x, q.y), q.z));
  UnionFind uf(phi.wire_count());
  const auto& boxes = phi.body().boxes();
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    if (!alive[b]) continue;
    std::optional<WireId> first;
    for (const auto* ports : {&boxes[b].inputs, &boxes[b].outputs})
      for (auto w : *ports) {
        if (contains(q.z, w)) continue;
        if (first)
          uf.unite(first->value, w.value);
        else
          first = w;
      }
  }
  return !reaches_any(uf, q.x, q.y);
}

bool d_separated_by_construction(const CausalModel& phi, const DSepQuery& q) {
  validate_query(phi, q);
  if (q.x.empty() || q.y.empty()) return true;
  const CausalModel marginal = marginalize(phi, set_union(set_union(q.x, q.y), q.z));
  // Wire indices shift under marginalization; translate by name.
  auto translate = [&](const WireSet& s, const Hypergraph& target) {
    std::vector<WireId> r;
    for (auto w : s) r.push_back(target.wire(phi.body().wire_name(w)));
    return make_wire_set(std::move(r));
  };
  const StringDiagram c = cut(marginal, translate(q.z, marginal.body()));
  const auto label = undirected_components(c);
  const auto xs = translate(q.x, c.body);
  const auto ys = translate(q.y, c.body);
  for (auto a : xs)
    for (auto b : ys)
      if (label[a.value] == label[b.value]) return false;
  return true;
}

void Dag::add_edge(std::uint32_t from, std::uint32_t to) {
  if (std::find(children[from].begin(), children[from].end(), to) != children[from].end()) return;
  children[from].push_back(to);
  parents[to].push_back(from);
}

std::optional<std::string> dag_obstruction(const CausalModel& phi) {
  if (!phi.inputs().empty()) return "model has global inputs (first: '" + phi.body().wire_name(phi.inputs()[0]) + "')";
  if (!phi.is_pure_bloom()) {
    for (std::uint32_t w = 0; w < phi.wire_count(); ++w)
      if (!phi.is_output(WireId{w})) return "model is not a pure bloom: wire '" + phi.body().wire_name(WireId{w}) + "' is latent";
  }
  for (const auto& box : phi.body().boxes())
    if (box.outputs.size() != 1)
      return "box '" + box.name + "' has " + std::to_string(box.outputs.size()) + " outputs, expected 1";
  return std::nullopt;
}

Dag underlying_dag(const CausalModel& phi) {
  if (auto why = dag_obstruction(phi)) throw ModelError("no underlying DAG: " + *why);
  Dag g;
  g.parents.resize(phi.wire_count());
  g.children.resize(phi.wire_count());
  for (const auto& box : phi.body().boxes())
    for (auto a : box.inputs) g.add_edge(a.value, box.outputs[0].value);
  return g;
}

bool d_separated_classical(const Dag& g, const WireSet& x, const WireSet& y, const WireSet& z) {
  const std::size_t n = g.size();
  std::vector<char> observed(n, 0), ancestor_of_z(n, 0);
  for (auto w : z) observed[w.value] = 1;
  std::vector<std::uint32_t> stack;
  for (auto w : z) stack.push_back(w.value);
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (ancestor_of_z[v]) continue;
    ancestor_of_z[v] = 1;
    for (auto p : g.parents[v]) stack.push_back(p);
  }

  // State (v, up): entered v from a child; (v, down): entered from a parent.
  std::vector<char> seen(2 * n, 0), reached(n, 0);
  std::deque<std::pair<std::uint32_t, bool>> queue;
  for (auto w : x) queue.emplace_back(w.value, true);
  while (!queue.empty()) {
    auto [v, up] = queue.front();
    queue.pop_front();
    auto& s = seen[2 * v + (up ? 1 : 0)];
    if (s) continue;
    s = 1;
    if (!observed[v]) reached[v] = 1;
    if (up) {
      if (observed[v]) continue;
      for (auto p : g.parents[v]) queue.emplace_back(p, true);
      for (auto c : g.children[v]) queue.emplace_back(c, false);
    } else {
      if (!observed[v])
        for (auto c : g.children[v]) queue.emplace_back(c, false);
      if (ancestor_of_z[v])
        for (auto p : g.parents[v]) queue.emplace_back(p, true);
    }
  }
  for (auto w : y)
    if (reached[w.value]) return false;
  return true;
}

bool d_separated_classical(const CausalModel& phi, const DSepQuery& q) {
  validate_query(phi, q);
  return d_separated_classical(underlying_dag(phi), q.x, q.y, q.z);
}

EquivalenceReport equivalence_check(const CausalModel& phi, const DSepQuery& q) {
  EquivalenceReport r;
  r.classical = d_separated_classical(phi, q);
  r.categorical = d_separated_categorical(phi, q);
  return r;
}

}  // namespace mdsep
