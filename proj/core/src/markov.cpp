#include "mdsep/markov.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "mdsep/errors.hpp"
#include "mdsep/normalize.hpp"

namespace mdsep {
namespace {

template <class B>
const typename B::Factor& object_of(const Interpretation<B>& interp, const std::string& type) {
  auto it = interp.types.find(type);
  if (it == interp.types.end()) throw LookupError("interpretation has no object for type '" + type + "'");
  return it->second;
}

template <class B>
typename B::Object objects_of(const Interpretation<B>& interp, const Signature& sig, const std::vector<WireId>& types) {
  typename B::Object out;
  for (auto t : types) out.push_back(object_of(interp, sig.wire_name(t)));
  return out;
}

template <class B>
void require_interface(const CausalModel& phi, const typename B::Kernel& f) {
  if (f.domain().size() != phi.inputs().size() || f.codomain().size() != phi.outputs().size()) {
    std::ostringstream msg;
    msg << "kernel has " << f.domain().size() << " input and " << f.codomain().size()
        << " output factors, model has " << phi.inputs().size() << " and " << phi.outputs().size();
    throw InterfaceError(msg.str());
  }
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

const char* to_string(Property p) {
  switch (p) {
    case Property::global: return "global";
    case Property::local: return "local";
    case Property::compat: return "compat";
  }
  return "?";
}

std::vector<std::size_t> output_positions(const CausalModel& phi, const WireSet& s) {
  std::vector<std::size_t> out;
  out.reserve(s.size());
  for (auto w : s) {
    auto p = phi.output_position(w);
    if (!p) throw QueryError("wire '" + phi.body().wire_name(w) + "' is not an output");
    out.push_back(*p);
  }
  return out;
}

template <class B>
std::vector<std::string> check_interpretation(const StringDiagram& d, const Interpretation<B>& interp) {
  std::vector<std::string> out;
  const Signature& sig = *d.signature;
  for (std::uint32_t w = 0; w < d.body.wire_count(); ++w) {
    const auto& t = d.type_name(WireId{w});
    if (!interp.types.count(t)) out.push_back("no object for type '" + t + "'");
  }
  if (!out.empty()) return out;
  for (std::uint32_t b = 0; b < d.body.box_count(); ++b) {
    const BoxId type = d.type_of(BoxId{b});
    const Box& gen = sig.box(type);
    auto it = interp.boxes.find(gen.name);
    if (it == interp.boxes.end()) {
      out.push_back("no kernel for box type '" + gen.name + "'");
      continue;
    }
    if (!B::same_shape(it->second.domain(), objects_of(interp, sig, gen.inputs)))
      out.push_back("kernel for '" + gen.name + "' has a domain that does not match its input types");
    if (!B::same_shape(it->second.codomain(), objects_of(interp, sig, gen.outputs)))
      out.push_back("kernel for '" + gen.name + "' has a codomain that does not match its output types");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class B>
typename B::Kernel evaluate(const StringDiagram& d, const Interpretation<B>& interp) {
  if (auto problems = check_interpretation(d, interp); !problems.empty()) throw LookupError(problems.front());
  const std::size_t nw = d.body.wire_count();
  std::vector<std::size_t> reads(nw, 0), leg(nw, 0);
  for (const auto& box : d.body.boxes())
    for (auto w : box.inputs) ++reads[w.value];
  for (auto w : d.outputs) ++leg[w.value];

  typename B::Object in_obj;
  std::vector<std::string> in_names;
  for (auto w : d.inputs) {
    auto f = object_of(interp, d.type_name(w));
    f.name = d.body.wire_name(w);
    in_obj.push_back(f);
    in_names.push_back(f.name);
  }
  typename B::Kernel state = B::identity(in_obj);
  std::vector<WireId> live(d.inputs.begin(), d.inputs.end());

  auto position = [&](WireId w) -> std::size_t {
    auto it = std::find(live.begin(), live.end(), w);
    if (it == live.end()) throw ModelError("wire '" + d.body.wire_name(w) + "' is neither an input nor produced by a box");
    return static_cast<std::size_t>(it - live.begin());
  };
  auto prune = [&]() {
    std::vector<std::size_t> keep;
    std::vector<WireId> next;
    for (std::size_t k = 0; k < live.size(); ++k)
      if (reads[live[k].value] > 0 || leg[live[k].value] > 0) {
        keep.push_back(k);
        next.push_back(live[k]);
      }
    if (next.size() == live.size()) return;
    state = B::select(state, keep);
    live = std::move(next);
  };
  prune();

  for (auto b : topological_box_order(d)) {
    const Box& box = d.body.box(b);
    std::vector<std::size_t> in_pos;
    for (auto w : box.inputs) in_pos.push_back(position(w));
    state = B::extend(state, in_pos, interp.boxes.at(d.type_name(b)));
    for (auto w : box.inputs) --reads[w.value];
    for (auto w : box.outputs) live.push_back(w);
    prune();
  }

  std::vector<std::size_t> out_pos;
  std::vector<std::string> out_names;
  for (auto w : d.outputs) {
    out_pos.push_back(position(w));
    out_names.push_back(d.body.wire_name(w));
  }
  return B::rename(B::select(state, out_pos), in_names, out_names);
}

std::size_t enumerate_dsep_triples(const CausalModel& phi, const MarkovOptions& opts,
                                   const std::function<void(const DSepQuery&, bool)>& visit) {
  const WireSet outs = phi.output_set();
  for (auto w : phi.inputs())
    if (!phi.is_output(w)) return 0;  // in(phi) ⊆ Y ∪ Z cannot hold
  const std::size_t n = outs.size();
  std::vector<char> is_input(n, 0);
  for (std::size_t i = 0; i < n; ++i) is_input[i] = phi.is_input(outs[i]);

  DSepQuery q;
  auto emit = [&](const std::vector<unsigned>& role) {
    q.x.clear();
    q.y.clear();
    q.z.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (role[i] == 1) q.x.push_back(outs[i]);
      if (role[i] == 2) q.y.push_back(outs[i]);
      if (role[i] == 3) q.z.push_back(outs[i]);
    }
    visit(q, d_separated_categorical(phi, q));
  };

  std::vector<unsigned> role(n, 0);
  std::size_t count = 0;
  if (n <= opts.exhaustive_limit) {
    // Odometer over roles: 0 unused, 1 X, 2 Y, 3 Z; inputs only take 2 or 3.
    for (std::size_t i = 0; i < n; ++i) role[i] = is_input[i] ? 2 : 0;
    while (true) {
      emit(role);
      ++count;
      std::size_t i = 0;
      for (; i < n; ++i) {
        if (role[i] < 3) {
          ++role[i];
          break;
        }
        role[i] = is_input[i] ? 2 : 0;
      }
      if (i == n) break;
    }
    return count;
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<unsigned> any(0, 3), side(2, 3);
  for (; count < opts.sample_budget; ++count) {
    for (std::size_t i = 0; i < n; ++i) role[i] = is_input[i] ? side(rng) : any(rng);
    emit(role);
  }
  return count;
}

std::vector<TaggedTriple> enumerate_dsep_triples(const CausalModel& phi, const MarkovOptions& opts) {
  std::vector<TaggedTriple> out;
  enumerate_dsep_triples(phi, opts, [&](const DSepQuery& q, bool sep) { out.push_back({q, sep}); });
  return out;
}

template <class B>
MarkovReport check_global_markov(const CausalModel& phi, const typename B::Kernel& f, const MarkovOptions& opts) {
  require_interface<B>(phi, f);
  MarkovReport r;
  r.property = Property::global;
  enumerate_dsep_triples(phi, opts, [&](const DSepQuery& q, bool separated) {
    if (!separated || q.x.empty()) return;
    ++r.checked;
    const bool ok =
        B::ci(f, output_positions(phi, q.x), output_positions(phi, q.y), output_positions(phi, q.z), opts.tol);
    if (!ok) r.overall = Verdict::fails;
    if (!ok || opts.keep_passing) r.entries.push_back({q, ok, {}});
  });
  return r;
}

template <class B>
MarkovReport check_local_markov(const CausalModel& phi, const typename B::Kernel& f, const MarkovOptions& opts) {
  require_interface<B>(phi, f);
  MarkovReport r;
  r.property = Property::local;
  if (!phi.is_pure_bloom()) {
    r.overall = Verdict::unknown;
    r.reason = "model is not a pure bloom";
    return r;
  }
  const WireSet all = phi.output_set();
  for (std::uint32_t b = 0; b < phi.box_count(); ++b) {
    const BoxId id{b};
    DSepQuery q;
    q.x = make_wire_set(out_set(phi.body(), id));
    q.z = make_wire_set(in_set(phi.body(), id));
    q.y = set_difference(set_difference(all, phi.descendants(q.x)), q.z);
    ++r.checked;
    const bool ok =
        B::ci(f, output_positions(phi, q.x), output_positions(phi, q.y), output_positions(phi, q.z), opts.tol);
    if (!ok) r.overall = Verdict::fails;
    r.entries.push_back({q, ok, phi.body().box(id).name});
  }
  return r;
}

template <class B>
CompatibilityResult<B> decide_compatibility(const CausalModel& phi, const typename B::Kernel& f,
                                            const MarkovOptions& opts) {
  require_interface<B>(phi, f);
  CompatibilityResult<B> r;
  if (!phi.is_pure_bloom() || !phi.has_distinct_box_types()) {
    r.reason = !phi.is_pure_bloom() ? "not-pure-bloom" : "repeated-box-types";
    r.evidence = check_global_markov<B>(phi, f, opts);
    if (r.evidence.overall == Verdict::fails) {
      r.verdict = Verdict::fails;
      r.reason = "global Markov property fails";
    } else {
      r.verdict = Verdict::unknown;
    }
    return r;
  }

  r.evidence = check_local_markov<B>(phi, f, opts);
  if (r.evidence.overall == Verdict::fails) {
    r.verdict = Verdict::fails;
    for (const auto& e : r.evidence.entries)
      if (!e.holds) {
        r.reason = "local Markov property fails at box '" + e.label + "'";
        break;
      }
    return r;
  }

  // Peel final boxes, smallest name first.
  CausalModel current = phi;
  while (current.box_count() > 0) {
    auto finals = final_boxes(current);
    auto best = *std::min_element(finals.begin(), finals.end(), [&](BoxId a, BoxId b) {
      return current.body().box(a).name < current.body().box(b).name;
    });
    r.box_order.push_back(current.body().box(best).name);
    current = marginalize(current, set_difference(current.output_set(), make_wire_set(current.body().box(best).outputs)));
  }

  const StringDiagram& d = phi.diagram();
  Interpretation<B> interp;
  auto assign_type = [&](WireId w, typename B::Factor factor) -> bool {
    const std::string& t = d.type_name(w);
    factor.name = t;
    auto [it, fresh] = interp.types.emplace(t, factor);
    if (fresh) return true;
    return B::same_shape({it->second}, {factor});
  };
  for (std::size_t j = 0; j < phi.outputs().size(); ++j)
    if (!assign_type(phi.outputs()[j], f.codomain()[j])) {
      r.verdict = Verdict::fails;
      r.reason = "wires of type '" + d.type_name(phi.outputs()[j]) + "' carry factors of different sizes";
      return r;
    }
  for (std::size_t i = 0; i < phi.inputs().size(); ++i)
    if (!assign_type(phi.inputs()[i], f.domain()[i])) {
      r.verdict = Verdict::fails;
      r.reason = "input '" + d.body.wire_name(phi.inputs()[i]) + "' does not match the size of its type";
      return r;
    }

  for (const auto& name : r.box_order) {
    const BoxId b = d.body.box_id(name);
    const Box& box = d.body.box(b);
    const auto ins = in_set(d.body, b);
    std::vector<std::size_t> in_pos, out_pos;
    for (auto w : ins) in_pos.push_back(*phi.output_position(w));
    for (auto w : box.outputs) out_pos.push_back(*phi.output_position(w));
    typename B::Kernel k = B::factor_kernel(f, in_pos, out_pos);
    if (ins.size() != box.inputs.size()) {
      // The box reads some wire more than once; read the first copy.
      typename B::Object ports;
      for (auto w : box.inputs) ports.push_back(interp.types.at(d.type_name(w)));
      std::vector<std::size_t> first;
      for (auto w : ins)
        first.push_back(static_cast<std::size_t>(std::find(box.inputs.begin(), box.inputs.end(), w) - box.inputs.begin()));
      k = B::compose(k, B::select(B::identity(ports), first));
    }
    std::vector<std::string> dom, cod;
    for (auto w : box.inputs) dom.push_back(d.type_name(w));
    for (auto w : box.outputs) cod.push_back(d.type_name(w));
    interp.boxes.emplace(d.type_name(b), B::rename(k, dom, cod));
  }

  r.reconstruction_error = B::distance(evaluate<B>(phi, interp), f);
  if (r.reconstruction_error <= opts.tol) {
    r.verdict = Verdict::holds;
    r.witness = std::move(interp);
  } else {
    r.verdict = Verdict::fails;
    std::ostringstream msg;
    msg << "reconstruction mismatch (max error " << r.reconstruction_error << ")";
    r.reason = msg.str();
  }
  return r;
}

#define MDSEP_DEFINE_BACKEND(B)                                                                            \
  template std::vector<std::string> check_interpretation<B>(const StringDiagram&, const Interpretation<B>&); \
  template B::Kernel evaluate<B>(const StringDiagram&, const Interpretation<B>&);                           \
  template MarkovReport check_global_markov<B>(const CausalModel&, const B::Kernel&, const MarkovOptions&);  \
  template MarkovReport check_local_markov<B>(const CausalModel&, const B::Kernel&, const MarkovOptions&);   \
  template CompatibilityResult<B> decide_compatibility<B>(const CausalModel&, const B::Kernel&, const MarkovOptions&);

MDSEP_DEFINE_BACKEND(FinStochBackend)
MDSEP_DEFINE_BACKEND(GaussBackend)

}  // namespace mdsep
