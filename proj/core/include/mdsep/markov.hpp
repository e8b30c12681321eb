#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdsep/causal_model.hpp"
#include "mdsep/dsep.hpp"
#include "mdsep/finstoch.hpp"
#include "mdsep/gauss.hpp"

namespace mdsep {

// Semantic backends. Each wire type is sent to a single factor; kernels are
// tensor products of factors on both sides.
struct FinStochBackend {
  using Factor = finstoch::Factor;
  using Object = finstoch::Object;
  using Kernel = finstoch::StochKernel;
  static constexpr const char* name = "finstoch";
  static constexpr double default_tol = finstoch::kDefaultTol;

  static Kernel identity(const Object& x) { return finstoch::identity(x); }
  static Kernel compose(const Kernel& g, const Kernel& f) { return finstoch::compose(g, f); }
  static Kernel select(const Kernel& f, std::span<const std::size_t> p) { return finstoch::select(f, p); }
  static Kernel extend(const Kernel& s, std::span<const std::size_t> in, const Kernel& g) {
    return finstoch::extend(s, in, g);
  }
  static bool ci(const Kernel& f, std::span<const std::size_t> x, std::span<const std::size_t> y,
                 std::span<const std::size_t> z, double tol) {
    return finstoch::ci_kernel(f, x, y, z, tol);
  }
  static Kernel factor_kernel(const Kernel& f, std::span<const std::size_t> in, std::span<const std::size_t> out) {
    return finstoch::factor_kernel(f, in, out);
  }
  static double distance(const Kernel& a, const Kernel& b) { return finstoch::max_abs_diff(a, b); }
  static bool same_shape(const Object& a, const Object& b) { return finstoch::same_shape(a, b); }
  static Kernel rename(const Kernel& f, const std::vector<std::string>& dom, const std::vector<std::string>& cod) {
    return finstoch::rename_factors(f, dom, cod);
  }
};

struct GaussBackend {
  using Factor = gauss::Factor;
  using Object = gauss::Object;
  using Kernel = gauss::GaussKernel;
  static constexpr const char* name = "gauss";
  static constexpr double default_tol = gauss::kDefaultTol;

  static Kernel identity(const Object& x) { return gauss::identity(x); }
  static Kernel compose(const Kernel& g, const Kernel& f) { return gauss::compose(g, f); }
  static Kernel select(const Kernel& f, std::span<const std::size_t> p) { return gauss::select(f, p); }
  static Kernel extend(const Kernel& s, std::span<const std::size_t> in, const Kernel& g) {
    return gauss::extend(s, in, g);
  }
  static bool ci(const Kernel& f, std::span<const std::size_t> x, std::span<const std::size_t> y,
                 std::span<const std::size_t> z, double tol) {
    return gauss::ci_kernel(f, x, y, z, tol);
  }
  static Kernel factor_kernel(const Kernel& f, std::span<const std::size_t> in, std::span<const std::size_t> out) {
    return gauss::factor_kernel(f, in, out);
  }
  static double distance(const Kernel& a, const Kernel& b) { return gauss::max_abs_diff(a, b); }
  static bool same_shape(const Object& a, const Object& b) { return gauss::same_shape(a, b); }
  static Kernel rename(const Kernel& f, const std::vector<std::string>& dom, const std::vector<std::string>& cod) {
    return gauss::rename_factors(f, dom, cod);
  }
};

// A strict Markov functor out of the free category on a signature, given by
// its values on generators: wire type name -> factor, box type name -> kernel.
template <class B>
struct Interpretation {
  std::map<std::string, typename B::Factor> types;
  std::map<std::string, typename B::Kernel> boxes;
};

// Every box type used by `d` has a kernel whose factors match the factors of
// its port types. Returns the problems found.
template <class B>
std::vector<std::string> check_interpretation(const StringDiagram& d, const Interpretation<B>& interp);

// Topological sweep: inputs, then each box applied to the live wires, dead
// wires discarded, finally the output leg read off (repeats copy). Throws
// LookupError for a missing assignment and ModelError for a wire that is
// neither an input nor produced by a box.
template <class B>
typename B::Kernel evaluate(const StringDiagram& d, const Interpretation<B>& interp);
template <class B>
typename B::Kernel evaluate(const CausalModel& phi, const Interpretation<B>& interp) {
  return evaluate<B>(phi.diagram(), interp);
}

enum class Verdict { holds, fails, unknown };
enum class Property { global, local, compat };

const char* to_string(Verdict v);
const char* to_string(Property p);

struct MarkovOptions {
  double tol = 1e-9;
  std::size_t exhaustive_limit = 10;  // output wires
  std::size_t sample_budget = 10000;
  std::uint64_t seed = 0x6d647365;
  bool keep_passing = false;  // record passing global tests as entries too
};

struct MarkovEntry {
  DSepQuery query;
  bool holds = false;
  std::string label;  // box name for local checks
};

struct MarkovReport {
  Property property = Property::global;
  Verdict overall = Verdict::holds;
  std::vector<MarkovEntry> entries;
  std::size_t checked = 0;  // CI tests performed
  std::string reason;       // set when overall is unknown
};

// Calls `visit` on each disjoint triple of outputs with in(phi) ⊆ Y ∪ Z,
// with its categorical verdict. Exhaustive up to `exhaustive_limit` outputs,
// otherwise `sample_budget` seeded uniform samples. Returns the count.
std::size_t enumerate_dsep_triples(const CausalModel& phi, const MarkovOptions& opts,
                                   const std::function<void(const DSepQuery&, bool separated)>& visit);

struct TaggedTriple {
  DSepQuery query;
  bool separated = false;
};
std::vector<TaggedTriple> enumerate_dsep_triples(const CausalModel& phi, const MarkovOptions& opts = {});

// Codomain factors of f must line up with out(phi), domain with in(phi).
template <class B>
MarkovReport check_global_markov(const CausalModel& phi, const typename B::Kernel& f, const MarkovOptions& opts = {});

// Unknown when phi is not a pure bloom.
template <class B>
MarkovReport check_local_markov(const CausalModel& phi, const typename B::Kernel& f, const MarkovOptions& opts = {});

template <class B>
struct CompatibilityResult {
  Verdict verdict = Verdict::unknown;  // holds: compatible, fails: incompatible
  std::optional<Interpretation<B>> witness;
  MarkovReport evidence;
  std::vector<std::string> box_order;  // peeling order used for the witness
  double reconstruction_error = 0;
  std::string reason;
};

template <class B>
CompatibilityResult<B> decide_compatibility(const CausalModel& phi, const typename B::Kernel& f,
                                            const MarkovOptions& opts = {});

// Positions in the output leg; throws QueryError for a non-output.
std::vector<std::size_t> output_positions(const CausalModel& phi, const WireSet& s);

#define MDSEP_DECLARE_BACKEND(B)                                                                                  \
  extern template std::vector<std::string> check_interpretation<B>(const StringDiagram&, const Interpretation<B>&); \
  extern template B::Kernel evaluate<B>(const StringDiagram&, const Interpretation<B>&);                          \
  extern template MarkovReport check_global_markov<B>(const CausalModel&, const B::Kernel&, const MarkovOptions&); \
  extern template MarkovReport check_local_markov<B>(const CausalModel&, const B::Kernel&, const MarkovOptions&);  \
  extern template CompatibilityResult<B> decide_compatibility<B>(const CausalModel&, const B::Kernel&,            \
                                                                  const MarkovOptions&);

MDSEP_DECLARE_BACKEND(FinStochBackend)
MDSEP_DECLARE_BACKEND(GaussBackend)
#undef MDSEP_DECLARE_BACKEND

}  // namespace mdsep
