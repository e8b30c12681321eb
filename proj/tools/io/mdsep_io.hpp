#pragma once

#include <string>
#include <variant>

#include "json.hpp"

#include "mdsep/causal_model.hpp"
#include "mdsep/diagram.hpp"
#include "mdsep/errors.hpp"
#include "mdsep/markov.hpp"

namespace mdsep::io {

inline constexpr const char* kFormat = "markov-dsep/1";

// A malformed file. `where` is a JSON pointer into the document, or
// "line L, column C" for syntax errors.
class LoadError : public Error {
 public:
  LoadError(std::string where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

nlohmann::json read_json_file(const std::string& path);

// Model files. Without a "signature" member the signature is inferred: a
// wire's type defaults to its id, a box's type to its id, and box types take
// their port types from their first occurrence. Either way the signature is
// renumbered in name order. "interface" is required; its legs are optional.
StringDiagram parse_model(const nlohmann::json& doc);
StringDiagram load_model(const std::string& path);

// Canonical form: wires, boxes and signature entries sorted by id; legs keep
// their order.
nlohmann::json model_to_json(const StringDiagram& d);
std::string dump_model(const StringDiagram& d);

// Data files: a single kernel to be tested against a model.
using AnyKernel = std::variant<finstoch::StochKernel, gauss::GaussKernel>;
AnyKernel parse_kernel(const nlohmann::json& doc);
AnyKernel load_kernel(const std::string& path);
nlohmann::json kernel_to_json(const finstoch::StochKernel& k);
nlohmann::json kernel_to_json(const gauss::GaussKernel& k);

// Reorders the codomain of `k` to the output leg of `phi` by factor name.
// The domain must list the input wires in leg order. Throws LoadError.
template <class K>
K align_to_model(const K& k, const CausalModel& phi);

// Interpretation files: one object per wire type and one kernel per box type;
// kernel factors are taken from the signature.
using AnyInterpretation = std::variant<Interpretation<FinStochBackend>, Interpretation<GaussBackend>>;
AnyInterpretation parse_interpretation(const nlohmann::json& doc, const Signature& sig);
AnyInterpretation load_interpretation(const std::string& path, const Signature& sig);
nlohmann::json interpretation_to_json(const Interpretation<FinStochBackend>& interp, const Signature& sig);
nlohmann::json interpretation_to_json(const Interpretation<GaussBackend>& interp, const Signature& sig);

// Graphviz: boxes as box-shaped nodes, wires as point nodes.
std::string to_dot(const StringDiagram& d);

}  // namespace mdsep::io
