#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "mdsep/dsep.hpp"
#include "mdsep/markov.hpp"
#include "mdsep/normalize.hpp"
#include "mdsep_io.hpp"

namespace mdsep::cli {
namespace {

std::string set_string(const Hypergraph& body, const WireSet& s) {
  std::vector<std::string> names;
  for (auto w : s) names.push_back(body.wire_name(w));
  std::sort(names.begin(), names.end());
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  return out + "}";
}

std::string triple_string(const Hypergraph& body, const DSepQuery& q) {
  return set_string(body, q.x) + " _||_ " + set_string(body, q.y) + " | " + set_string(body, q.z);
}

WireSet wires_named(const CausalModel& phi, const std::vector<std::string>& names) {
  std::vector<WireId> out;
  for (const auto& n : names) {
    auto w = phi.body().find_wire(n);
    if (!w) throw LookupError("unknown wire '" + n + "'");
    out.push_back(*w);
  }
  return make_wire_set(std::move(out));
}

CausalModel load_causal_model(const std::string& path) {
  auto d = io::load_model(path);
  return CausalModel::from_diagram(std::move(d));
}

double default_tolerance() {
  if (const char* env = std::getenv("MARKOV_DSEP_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0) return v;
    throw Error(std::string("MARKOV_DSEP_TOL is not a positive number: '") + env + "'");
  }
  return 1e-9;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

struct Options {
  std::string model, data, output, property = "global", backend, witness;
  std::vector<std::string> x, y, z, keep;
  bool classical = false;
  double tol = 0;
  std::size_t budget = 10000, exhaustive = 10;
  std::uint64_t seed = MarkovOptions{}.seed;
};

int cmd_validate(const Options& o, std::ostream& out) {
  auto d = io::load_model(o.model);
  auto problems = CausalModel::violations(d);
  if (!problems.empty()) {
    out << "invalid\n";
    for (const auto& p : problems) out << "  " << p << "\n";
    return kNegative;
  }
  const CausalModel phi = CausalModel::from_diagram(std::move(d));
  out << "valid causal model: " << phi.wire_count() << " wires, " << phi.box_count() << " boxes, "
      << phi.inputs().size() << " inputs, " << phi.outputs().size() << " outputs"
      << (phi.is_pure_bloom() ? ", pure bloom" : "") << "\n";
  return kOk;
}

int cmd_dsep(const Options& o, std::ostream& out) {
  const CausalModel phi = load_causal_model(o.model);
  DSepQuery q{wires_named(phi, o.x), wires_named(phi, o.y), wires_named(phi, o.z)};
  const bool sep = d_separated_categorical(phi, q);
  out << (sep ? "separated" : "connected") << "\n";
  if (o.classical) {
    if (auto why = dag_obstruction(phi))
      out << "classical: not applicable (" << *why << ")\n";
    else
      out << "classical: " << (d_separated_classical(phi, q) ? "separated" : "connected") << "\n";
  }
  return sep ? kOk : kNegative;
}

int cmd_list_ci(const Options& o, std::ostream& out) {
  const CausalModel phi = load_causal_model(o.model);
  MarkovOptions mo;
  mo.sample_budget = o.budget;
  mo.exhaustive_limit = o.exhaustive;
  mo.seed = o.seed;
  std::vector<std::string> lines;
  const std::size_t total = enumerate_dsep_triples(phi, mo, [&](const DSepQuery& q, bool sep) {
    if (sep && !q.x.empty() && !q.y.empty()) lines.push_back(triple_string(phi.body(), q));
  });
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  for (const auto& l : lines) out << l << "\n";
  out << lines.size() << " separated triples with nonempty X and Y (" << total << " triples enumerated)\n";
  return kOk;
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::holds: return kOk;
    case Verdict::fails: return kNegative;
    case Verdict::unknown: return kUnknown;
  }
  return kError;
}

void render_report(const CausalModel& phi, const MarkovReport& r, std::ostream& out) {
  out << "checked: " << r.checked << "\n";
  if (!r.reason.empty()) out << "reason: " << r.reason << "\n";
  std::vector<std::string> lines;
  for (const auto& e : r.entries) {
    std::string line = e.label.empty() ? "" : "box " + e.label + ": ";
    line += triple_string(phi.body(), e.query) + (e.holds ? "  holds" : "  FAILS");
    lines.push_back(line);
  }
  if (r.property == Property::global) std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) out << "  " << l << "\n";
}

template <class B>
int check_with(const Options& o, const CausalModel& phi, const typename B::Kernel& raw, std::ostream& out) {
  const auto f = io::align_to_model(raw, phi);
  MarkovOptions mo;
  mo.tol = o.tol;
  mo.sample_budget = o.budget;
  mo.exhaustive_limit = o.exhaustive;
  mo.seed = o.seed;
  out << "property: " << o.property << "\nbackend: " << B::name << "\n";
  if (o.property == "global" || o.property == "local") {
    const MarkovReport r = o.property == "global" ? check_global_markov<B>(phi, f, mo) : check_local_markov<B>(phi, f, mo);
    out << "verdict: " << to_string(r.overall) << "\n";
    render_report(phi, r, out);
    return exit_for(r.overall);
  }
  const auto r = decide_compatibility<B>(phi, f, mo);
  const char* word = r.verdict == Verdict::holds ? "compatible" : r.verdict == Verdict::fails ? "incompatible" : "unknown";
  out << "verdict: " << word << "\n";
  if (!r.reason.empty()) out << "reason: " << r.reason << "\n";
  if (!r.box_order.empty()) {
    out << "box order:";
    for (const auto& b : r.box_order) out << " " << b;
    out << "\n";
  }
  if (r.verdict == Verdict::holds) out << "reconstruction error: " << std::setprecision(3) << r.reconstruction_error << "\n";
  render_report(phi, r.evidence, out);
  if (r.witness && !o.witness.empty())
    write_text(o.witness, io::interpretation_to_json(*r.witness, *phi.diagram().signature).dump(2) + "\n", out);
  return exit_for(r.verdict);
}

int cmd_check(const Options& o, std::ostream& out) {
  const CausalModel phi = load_causal_model(o.model);
  const io::AnyKernel k = io::load_kernel(o.data);
  const bool fin = std::holds_alternative<finstoch::StochKernel>(k);
  if (!o.backend.empty() && o.backend != (fin ? "finstoch" : "gauss"))
    throw Error("--backend " + o.backend + " does not match the data file kind '" + (fin ? "finstoch" : "gauss") + "'");
  if (fin) return check_with<FinStochBackend>(o, phi, std::get<finstoch::StochKernel>(k), out);
  return check_with<GaussBackend>(o, phi, std::get<gauss::GaussKernel>(k), out);
}

int cmd_normalize(const Options& o, std::ostream& out) {
  auto d = io::load_model(o.model);
  require_valid(d);
  write_text(o.output, io::dump_model(normalize(d)), out);
  return kOk;
}

int cmd_marginalize(const Options& o, std::ostream& out) {
  const CausalModel phi = load_causal_model(o.model);
  write_text(o.output, io::dump_model(marginalize(phi, wires_named(phi, o.keep)).diagram()), out);
  return kOk;
}

int cmd_purebloom(const Options& o, std::ostream& out) {
  const CausalModel phi = load_causal_model(o.model);
  write_text(o.output, io::dump_model(pure_bloom_version(phi).diagram()), out);
  return kOk;
}

int cmd_export_dot(const Options& o, std::ostream& out) {
  auto d = io::load_model(o.model);
  require_valid(d);
  write_text(o.output, io::to_dot(d), out);
  return kOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  auto d = io::load_model(o.model);
  require_valid(d);
  const auto interp = io::load_interpretation(o.data, *d.signature);
  nlohmann::json doc;
  if (const auto* fin = std::get_if<Interpretation<FinStochBackend>>(&interp))
    doc = io::kernel_to_json(evaluate<FinStochBackend>(d, *fin));
  else
    doc = io::kernel_to_json(evaluate<GaussBackend>(d, std::get<Interpretation<GaussBackend>>(interp)));
  write_text(o.output, doc.dump(2) + "\n", out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal models as string diagrams: d-separation and Markov property checks", "markov-dsep"};
  app.require_subcommand(1);
  Options o;

  auto model_arg = [&](CLI::App* sub) { sub->add_option("model", o.model, "Model file (JSON)")->required(); };
  auto output_opt = [&](CLI::App* sub) { sub->add_option("-o,--output", o.output, "Write to this file instead of stdout"); };
  auto sweep_opts = [&](CLI::App* sub) {
    sub->add_option("--budget", o.budget, "Sampled triples when there are too many outputs to enumerate")
        ->capture_default_str();
    sub->add_option("--exhaustive-limit", o.exhaustive, "Enumerate all triples up to this many outputs")
        ->capture_default_str();
    sub->add_option("--seed", o.seed, "Seed for sampled sweeps")->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "Check diagram and causal-model conditions");
  model_arg(validate);

  auto* dsep = app.add_subcommand("dsep", "Decide whether Z d-separates X from Y");
  model_arg(dsep);
  dsep->add_option("--x", o.x, "Wires in X (comma separated)")->delimiter(',');
  dsep->add_option("--y", o.y, "Wires in Y (comma separated)")->delimiter(',');
  dsep->add_option("--z", o.z, "Wires in Z (comma separated)")->delimiter(',');
  dsep->add_flag("--classical", o.classical, "Also run the DAG criterion when the model has an underlying DAG");

  auto* list_ci = app.add_subcommand("list-ci", "List the d-separated triples of a model");
  model_arg(list_ci);
  sweep_opts(list_ci);

  auto* check = app.add_subcommand("check", "Test a kernel against a model");
  model_arg(check);
  check->add_option("data", o.data, "Data file with the kernel (JSON)")->required();
  check->add_option("--property", o.property, "global, local or compat")
      ->check(CLI::IsMember({"global", "local", "compat"}))
      ->capture_default_str();
  check->add_option("--backend", o.backend, "finstoch or gauss (default: from the data file)")
      ->check(CLI::IsMember({"finstoch", "gauss"}));
  check->add_option("--tol", o.tol, "Absolute tolerance (default 1e-9 or MARKOV_DSEP_TOL)");
  check->add_option("--witness", o.witness, "With --property compat, write the reconstructed interpretation here");
  sweep_opts(check);

  auto* norm = app.add_subcommand("normalize", "Remove eliminable boxes");
  model_arg(norm);
  output_opt(norm);

  auto* marg = app.add_subcommand("marginalize", "Keep only the given outputs, then normalize");
  model_arg(marg);
  marg->add_option("--keep", o.keep, "Output wires to keep (comma separated)")->delimiter(',')->required();
  output_opt(marg);

  auto* bloom = app.add_subcommand("purebloom", "Make every wire an output");
  model_arg(bloom);
  output_opt(bloom);

  auto* dot = app.add_subcommand("export-dot", "Write the diagram as Graphviz DOT");
  model_arg(dot);
  output_opt(dot);

  auto* eval = app.add_subcommand("evaluate", "Evaluate a diagram under an interpretation");
  model_arg(eval);
  eval->add_option("interpretation", o.data, "Interpretation file (JSON)")->required();
  output_opt(eval);

  try {
    std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (o.tol <= 0) o.tol = default_tolerance();
    if (*validate) return cmd_validate(o, out);
    if (*dsep) return cmd_dsep(o, out);
    if (*list_ci) return cmd_list_ci(o, out);
    if (*check) return cmd_check(o, out);
    if (*norm) return cmd_normalize(o, out);
    if (*marg) return cmd_marginalize(o, out);
    if (*bloom) return cmd_purebloom(o, out);
    if (*dot) return cmd_export_dot(o, out);
    if (*eval) return cmd_evaluate(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace mdsep::cli
