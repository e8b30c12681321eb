#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mdsep/causal_model.hpp"
#include "mdsep/diagram.hpp"

namespace mdsep {

// Boxes all of whose output wires are discarded: absent from the output leg
// and read by no box. A box without outputs is eliminable.
std::vector<BoxId> eliminable_boxes(const StringDiagram& d);

// Picks which of the currently eliminable boxes goes next; receives the
// candidate count and returns an index below it.
using EliminationChooser = std::function<std::size_t(std::size_t candidates)>;

// Removes eliminable boxes until none remain, then deletes the output wires
// of the removed boxes. The result does not depend on the elimination order.
StringDiagram normalize(const StringDiagram& d);
StringDiagram normalize(const StringDiagram& d, const EliminationChooser& choose);

// del on the complement of `keep`, then normalize. The input leg is kept as
// is. Throws QueryError when `keep` names a wire that is not an output.
CausalModel marginalize(const CausalModel& phi, const WireSet& keep);

// Reflexive-transitive closure of A -> B, backward and forward.
WireSet ancestors(const CausalModel& phi, const WireSet& x);
WireSet descendants(const CausalModel& phi, const WireSet& x);

// Every wire that is not yet an output is appended to the output leg, in
// wire order. Existing outputs keep their positions.
CausalModel pure_bloom_version(const CausalModel& phi);

// Boxes none of whose outputs is read by another box. Requires a pure bloom.
std::vector<BoxId> final_boxes(const CausalModel& phi);

// Boxes of phi that survive in marginalize(phi, keep), without building the
// marginal. Indexed by box; shared by the d-separation fast path.
std::vector<char> surviving_boxes(const CausalModel& phi, const WireSet& keep);

}  // namespace mdsep
