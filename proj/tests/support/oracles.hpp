#pragma once

#include <vector>

#include "mdsep/diagram.hpp"
#include "mdsep/dsep.hpp"
#include "mdsep/finstoch.hpp"

namespace mdsep::testing {

// Classical d-separation by enumerating every simple path of the skeleton
// between X and Y and looking for a blocking node on each.
bool paths_d_separated(const Dag& g, const WireSet& x, const WireSet& y, const WireSet& z);

// Isomorphism by trying every wire bijection; only for small diagrams.
bool iso_bruteforce(const StringDiagram& f, const StringDiagram& g);

// Boxes whose outputs are all absent from the output leg and unread, by a
// direct scan of the port lists.
std::vector<BoxId> eliminable_by_scan(const StringDiagram& d);

// Joint state t(x, z1, z2, y) on four binary factors. True when t equals
//   r(z1, z2) f(x | z1) g(y | z2)
// for the kernels read off t itself (marginal on Z1 Z2, conditionals of X
// given Z1 and Y given Z2, uniform where undefined).
bool two_box_factorizes(const finstoch::StochKernel& t, double tol);

// For r on Z1 x Z2 (both binary), the copy-shaped state
//   t(x, z1, z2, y) = r(z1, z2) [x = z2] [y = z1].
finstoch::StochKernel copy_shaped(const finstoch::StochKernel& r);

// Searches all deterministic d: Z1 -> Z2 and d': Z2 -> Z1 for
// r(z1, z2) = s(z1) [z2 = d(z1)] and r(z1, z2) = s'(z2) [z1 = d'(z2)].
bool deterministic_pair_exists(const finstoch::StochKernel& r, double tol);

}  // namespace mdsep::testing
