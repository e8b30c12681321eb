#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mdsep/hypergraph.hpp"

namespace mdsep {

// Wires of a signature are types, boxes are box types (generators).
using Signature = Hypergraph;
using SignaturePtr = std::shared_ptr<const Signature>;

// gs-monoidal string diagram: a hypergraph typed over a signature, with an
// ordered input leg and an ordered output leg. The invariants (typing is a
// morphism, acyclicity, left monogamy) are checked by validate_diagram; the
// struct itself can hold invalid data so that malformed inputs are reportable.
//
// Copy is an output wire listed several times; discard is a wire absent from
// `outputs`. Neither is a box.
struct StringDiagram {
  SignaturePtr signature;
  Hypergraph body;
  HypergraphMorphism typing;  // body -> *signature
  std::vector<WireId> inputs;
  std::vector<WireId> outputs;

  WireId type_of(WireId w) const { return typing.wire_map.at(w.value); }
  BoxId type_of(BoxId b) const { return typing.box_map.at(b.value); }
  const std::string& type_name(WireId w) const { return signature->wire_name(type_of(w)); }
  const std::string& type_name(BoxId b) const { return signature->box(type_of(b)).name; }

  std::vector<WireId> input_types() const;
  std::vector<WireId> output_types() const;
};

std::vector<std::string> validate_diagram(const StringDiagram& d);
void require_valid(const StringDiagram& d);  // throws ValidationError

// No cyclic family of wires linked by box input -> output.
bool check_acyclic(const StringDiagram& d);
// Every wire is produced at most once: as a global input or a box output.
bool check_left_monogamous(const StringDiagram& d);

bool same_signature(const StringDiagram& a, const StringDiagram& b);

// Boxes in an order where every producer precedes its consumers. Throws
// ModelError when the body is cyclic.
std::vector<BoxId> topological_box_order(const StringDiagram& d);

// Gluing: output i of f is identified with input i of g. Identifiers on the
// f side win; g-side identifiers are renamed on collision. Not normalized.
StringDiagram compose(const StringDiagram& f, const StringDiagram& g);
StringDiagram tensor(const StringDiagram& f, const StringDiagram& g);

// Generators of the free gs-monoidal category over a signature.
StringDiagram empty_diagram(SignaturePtr sig);
StringDiagram box_diagram(SignaturePtr sig, BoxId box_type);
StringDiagram identity_diagram(SignaturePtr sig, std::span<const WireId> types);
StringDiagram swap_diagram(SignaturePtr sig, std::span<const WireId> first, std::span<const WireId> second);
StringDiagram copy_diagram(SignaturePtr sig, std::span<const WireId> types);
StringDiagram del_diagram(SignaturePtr sig, std::span<const WireId> types);

StringDiagram identity_diagram(SignaturePtr sig, WireId type);
StringDiagram swap_diagram(SignaturePtr sig, WireId first, WireId second);
StringDiagram copy_diagram(SignaturePtr sig, WireId type);
StringDiagram del_diagram(SignaturePtr sig, WireId type);

// Output leg reindexed: result outputs[i] = d.outputs[perm[i]]. Entries may
// repeat or be omitted, which expresses copy and discard on the outputs.
StringDiagram reindex_outputs(const StringDiagram& d, std::span<const std::size_t> positions);

// Equality of isomorphism classes: a typing-preserving hypergraph isomorphism
// that maps inputs[i] to inputs[i] and outputs[j] to outputs[j].
bool iso_equal(const StringDiagram& f, const StringDiagram& g);

}  // namespace mdsep
