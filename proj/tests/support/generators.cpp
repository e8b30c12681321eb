#include "generators.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "builders.hpp"
#include "mdsep/normalize.hpp"

namespace mdsep::testing {
namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace

CausalModel random_dag_model(Rng& rng, std::size_t n, double edge_prob) {
  std::vector<std::string> ids;
  std::vector<BoxSpec> boxes;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("v" + std::to_string(i));
    BoxSpec b{"b" + std::to_string(i), {}, {ids.back()}, {}};
    for (std::size_t j = 0; j < i; ++j)
      if (coin(rng, edge_prob)) b.inputs.push_back(ids[j]);
    std::shuffle(b.inputs.begin(), b.inputs.end(), rng);
    boxes.push_back(std::move(b));
  }
  auto outputs = ids;
  std::shuffle(outputs.begin(), outputs.end(), rng);
  return make_model(ids, boxes, {}, outputs);
}

CausalModel random_causal_model(Rng& rng, const ModelShape& shape) {
  std::vector<std::string> ids, outputs, inputs;
  std::vector<BoxSpec> boxes;
  const std::size_t target = uniform(rng, 1, std::max<std::size_t>(shape.max_wires, 1));
  const std::size_t nin = std::min(uniform(rng, 0, shape.max_inputs), target - 1);
  for (std::size_t i = 0; i < nin; ++i) {
    ids.push_back("i" + std::to_string(i));
    inputs.push_back(ids.back());
    if (coin(rng, shape.input_output_prob)) outputs.push_back(ids.back());
  }
  while (ids.size() < target) {
    BoxSpec b{"b" + std::to_string(boxes.size()), {}, {}, {}};
    if (!ids.empty()) {
      const std::size_t k = uniform(rng, 0, shape.max_box_inputs);
      for (std::size_t i = 0; i < k; ++i) b.inputs.push_back(ids[uniform(rng, 0, ids.size() - 1)]);
    }
    const std::size_t l = uniform(rng, 1, std::min(shape.max_box_outputs, target - ids.size()));
    for (std::size_t j = 0; j < l; ++j) {
      ids.push_back("w" + std::to_string(ids.size()));
      b.outputs.push_back(ids.back());
      if (!coin(rng, shape.latent_prob)) outputs.push_back(ids.back());
    }
    boxes.push_back(std::move(b));
  }
  std::shuffle(outputs.begin(), outputs.end(), rng);
  return CausalModel::from_diagram(normalize(make_diagram(ids, boxes, inputs, outputs)));
}

CausalModel random_pure_bloom(Rng& rng, const ModelShape& shape) {
  ModelShape s = shape;
  s.max_inputs = 0;
  s.latent_prob = 0;
  return random_causal_model(rng, s);
}

StringDiagram random_diagram(Rng& rng, std::size_t max_boxes, bool shared_types) {
  std::vector<std::string> ids, inputs, outputs;
  std::vector<BoxSpec> boxes;
  std::map<std::string, std::string> wire_types;
  const std::size_t nin = uniform(rng, 0, 2);
  for (std::size_t i = 0; i < nin; ++i) {
    ids.push_back("i" + std::to_string(i));
    inputs.push_back(ids.back());
  }
  const std::size_t nb = uniform(rng, 0, max_boxes);
  for (std::size_t n = 0; n < nb; ++n) {
    BoxSpec b{"b" + std::to_string(n), {}, {}, {}};
    if (!ids.empty()) {
      const std::size_t k = uniform(rng, 0, 2);
      for (std::size_t i = 0; i < k; ++i) b.inputs.push_back(ids[uniform(rng, 0, ids.size() - 1)]);
    }
    const std::size_t l = uniform(rng, 0, 2);
    for (std::size_t j = 0; j < l; ++j) {
      ids.push_back("w" + std::to_string(ids.size()));
      b.outputs.push_back(ids.back());
    }
    if (shared_types)
      b.type = "g" + std::to_string(b.inputs.size()) + std::to_string(b.outputs.size()) + "_" +
               std::to_string(uniform(rng, 0, 1));
    boxes.push_back(std::move(b));
  }
  for (const auto& w : ids) {
    const double u = std::uniform_real_distribution<double>(0, 1)(rng);
    const std::size_t copies = u < 0.45 ? 0 : u < 0.85 ? 1 : 2;
    for (std::size_t c = 0; c < copies; ++c) outputs.push_back(w);
    if (shared_types) wire_types[w] = "T";
  }
  std::shuffle(outputs.begin(), outputs.end(), rng);
  return make_diagram(ids, boxes, inputs, outputs, wire_types);
}

SignaturePtr small_signature() {
  auto sig = std::make_shared<Signature>();
  auto t = sig->add_wire("T");
  sig->add_box("u", {}, {t});
  sig->add_box("f", {t}, {t});
  sig->add_box("m", {t, t}, {t});
  sig->add_box("s", {t}, {t, t});
  sig->add_box("k", {t}, {});
  return sig;
}

StringDiagram random_diagram_over(Rng& rng, const SignaturePtr& sig, std::size_t inputs, std::size_t max_boxes) {
  StringDiagram d;
  d.signature = sig;
  const WireId t{0};
  auto fresh = [&] {
    auto w = d.body.add_wire("w" + std::to_string(d.body.wire_count()));
    d.typing.wire_map.push_back(t);
    return w;
  };
  for (std::size_t i = 0; i < inputs; ++i) d.inputs.push_back(fresh());
  const std::size_t nb = uniform(rng, 0, max_boxes);
  for (std::size_t n = 0; n < nb; ++n) {
    BoxId gen{static_cast<std::uint32_t>(uniform(rng, 0, sig->box_count() - 1))};
    const Box& g = sig->box(gen);
    if (!g.inputs.empty() && d.body.wire_count() == 0) gen = sig->box_id("u");
    const Box& chosen = sig->box(gen);
    std::vector<WireId> in, out;
    for (std::size_t k = 0; k < chosen.inputs.size(); ++k)
      in.push_back(WireId{static_cast<std::uint32_t>(uniform(rng, 0, d.body.wire_count() - 1))});
    for (std::size_t k = 0; k < chosen.outputs.size(); ++k) out.push_back(fresh());
    d.body.add_box("b" + std::to_string(n), in, out);
    d.typing.box_map.push_back(gen);
  }
  for (std::uint32_t w = 0; w < d.body.wire_count(); ++w) {
    const double u = std::uniform_real_distribution<double>(0, 1)(rng);
    const std::size_t copies = u < 0.4 ? 0 : u < 0.85 ? 1 : 2;
    for (std::size_t c = 0; c < copies; ++c) d.outputs.push_back(WireId{w});
  }
  std::shuffle(d.outputs.begin(), d.outputs.end(), rng);
  return d;
}

finstoch::StochKernel random_stoch(Rng& rng, const finstoch::Object& dom, const finstoch::Object& cod,
                                   double zero_prob) {
  const std::size_t rows = finstoch::cardinality(cod), cols = finstoch::cardinality(dom);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> t(rows * cols);
  for (std::size_t a = 0; a < cols; ++a) {
    double sum = 0;
    for (std::size_t y = 0; y < rows; ++y) {
      double v = coin(rng, zero_prob) ? 0.0 : e(rng);
      t[a * rows + y] = v;
      sum += v;
    }
    if (sum == 0) {
      t[a * rows + uniform(rng, 0, rows - 1)] = 1.0;
      sum = 1.0;
    }
    for (std::size_t y = 0; y < rows; ++y) t[a * rows + y] /= sum;
  }
  return finstoch::StochKernel(dom, cod, std::move(t));
}

finstoch::Object random_fin_object(Rng& rng, std::size_t factors, std::size_t max_card, const std::string& prefix) {
  finstoch::Object o;
  for (std::size_t i = 0; i < factors; ++i)
    o.push_back(finstoch::make_factor(prefix + std::to_string(i), uniform(rng, 1, max_card)));
  return o;
}

gauss::GaussKernel random_gauss(Rng& rng, const gauss::Object& dom, const gauss::Object& cod, bool full_rank) {
  const auto n = static_cast<Eigen::Index>(gauss::dimension(dom));
  const auto m = static_cast<Eigen::Index>(gauss::dimension(cod));
  std::normal_distribution<double> g(0.0, 1.0);
  auto fill = [&](Eigen::MatrixXd& mat) {
    for (Eigen::Index i = 0; i < mat.rows(); ++i)
      for (Eigen::Index j = 0; j < mat.cols(); ++j) mat(i, j) = g(rng);
  };
  Eigen::MatrixXd a(m, n);
  fill(a);
  Eigen::MatrixXd bm(m, 1);
  fill(bm);
  const auto r = full_rank ? m : static_cast<Eigen::Index>(uniform(rng, 0, static_cast<std::size_t>(m)));
  Eigen::MatrixXd l(m, r);
  fill(l);
  Eigen::MatrixXd s = l * l.transpose();
  s = 0.5 * (s + s.transpose());
  return gauss::GaussKernel(dom, cod, a, bm.col(0), s);
}

gauss::Object random_gauss_object(Rng& rng, std::size_t factors, std::size_t max_dim, const std::string& prefix) {
  gauss::Object o;
  for (std::size_t i = 0; i < factors; ++i) o.push_back({prefix + std::to_string(i), uniform(rng, 1, max_dim)});
  return o;
}

Interpretation<FinStochBackend> random_fin_interpretation(Rng& rng, const StringDiagram& d, std::size_t max_card,
                                                          double zero_prob, std::size_t max_entries) {
  const Signature& sig = *d.signature;
  std::vector<std::size_t> card(sig.wire_count());
  for (auto& c : card) c = uniform(rng, 1, max_card);
  auto entries = [&] {
    double total = 1;
    for (std::size_t w = 0; w < d.body.wire_count(); ++w) total *= static_cast<double>(card[d.typing.wire_map[w].value]);
    for (auto w : d.outputs) total *= static_cast<double>(card[d.typing.wire_map[w.value].value]);
    return total;
  };
  while (entries() > static_cast<double>(max_entries)) *std::max_element(card.begin(), card.end()) -= 1;

  Interpretation<FinStochBackend> interp;
  for (std::size_t t = 0; t < sig.wire_count(); ++t)
    interp.types.emplace(sig.wire_names()[t], finstoch::make_factor(sig.wire_names()[t], card[t]));
  for (const auto& gen : sig.boxes()) {
    finstoch::Object dom, cod;
    for (auto t : gen.inputs) dom.push_back(interp.types.at(sig.wire_name(t)));
    for (auto t : gen.outputs) cod.push_back(interp.types.at(sig.wire_name(t)));
    interp.boxes.emplace(gen.name, random_stoch(rng, dom, cod, zero_prob));
  }
  return interp;
}

Interpretation<GaussBackend> random_gauss_interpretation(Rng& rng, const StringDiagram& d, std::size_t max_dim) {
  const Signature& sig = *d.signature;
  Interpretation<GaussBackend> interp;
  for (std::size_t t = 0; t < sig.wire_count(); ++t)
    interp.types.emplace(sig.wire_names()[t], gauss::Factor{sig.wire_names()[t], uniform(rng, 1, max_dim)});
  for (const auto& gen : sig.boxes()) {
    gauss::Object dom, cod;
    for (auto t : gen.inputs) dom.push_back(interp.types.at(sig.wire_name(t)));
    for (auto t : gen.outputs) cod.push_back(interp.types.at(sig.wire_name(t)));
    interp.boxes.emplace(gen.name, random_gauss(rng, dom, cod));
  }
  return interp;
}

DSepQuery random_query(Rng& rng, const WireSet& pool) {
  DSepQuery q;
  for (auto w : pool) {
    switch (uniform(rng, 0, 3)) {
      case 1: q.x.push_back(w); break;
      case 2: q.y.push_back(w); break;
      case 3: q.z.push_back(w); break;
      default: break;
    }
  }
  return q;
}

}  // namespace mdsep::testing
