#include "mdsep_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace mdsep::io {
namespace {

using nlohmann::json;

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const json& member(const json& obj, const char* key, const std::string& ptr) {
  if (!obj.is_object()) throw LoadError(ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw LoadError(ptr, std::string("missing member '") + key + "'");
  return *it;
}

const json* optional_member(const json& obj, const char* key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& expect_array(const json& v, const std::string& ptr) {
  if (!v.is_array()) throw LoadError(ptr, "expected an array");
  return v;
}

std::string expect_string(const json& v, const std::string& ptr) {
  if (!v.is_string()) throw LoadError(ptr, "expected a string");
  return v.get<std::string>();
}

double expect_number(const json& v, const std::string& ptr) {
  if (!v.is_number()) throw LoadError(ptr, "expected a number");
  return v.get<double>();
}

std::size_t expect_count(const json& v, const std::string& ptr) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw LoadError(ptr, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::vector<std::string> string_list(const json& v, const std::string& ptr) {
  expect_array(v, ptr);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(expect_string(v[i], child(ptr, i)));
  return out;
}

void check_format(const json& doc) {
  if (!doc.is_object()) throw LoadError("", "expected a JSON object at top level");
  const auto f = expect_string(member(doc, "format", ""), "/format");
  if (f != kFormat) throw LoadError("/format", "unsupported format '" + f + "', expected '" + kFormat + "'");
}

// Signature under construction when none is given explicitly.
struct InferredBox {
  std::string name;
  std::vector<std::string> inputs, outputs;
};

SignaturePtr parse_signature(const json& sig) {
  const std::string ptr = "/signature";
  auto sigp = std::make_shared<Signature>();
  const auto& types = expect_array(member(sig, "types", ptr), child(ptr, "types"));
  for (std::size_t i = 0; i < types.size(); ++i) {
    auto name = expect_string(types[i], child(child(ptr, "types"), i));
    if (sigp->find_wire(name)) throw LoadError(child(child(ptr, "types"), i), "duplicate type '" + name + "'");
    sigp->add_wire(name);
  }
  if (const json* boxes = optional_member(sig, "boxes")) {
    const std::string bptr = child(ptr, "boxes");
    expect_array(*boxes, bptr);
    for (std::size_t i = 0; i < boxes->size(); ++i) {
      const auto& b = (*boxes)[i];
      const std::string p = child(bptr, i);
      auto name = expect_string(member(b, "name", p), child(p, "name"));
      if (sigp->find_box(name)) throw LoadError(child(p, "name"), "duplicate box type '" + name + "'");
      std::vector<WireId> ports[2];
      const char* keys[2] = {"inputs", "outputs"};
      for (int side = 0; side < 2; ++side) {
        const json* list = optional_member(b, keys[side]);
        if (!list) continue;
        auto names = string_list(*list, child(p, keys[side]));
        for (std::size_t k = 0; k < names.size(); ++k) {
          auto t = sigp->find_wire(names[k]);
          if (!t) throw LoadError(child(child(p, keys[side]), k), "unknown type '" + names[k] + "'");
          ports[side].push_back(*t);
        }
      }
      sigp->add_box(name, ports[0], ports[1]);
    }
  }
  return sigp;
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("", "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    // e.byte is an offset into the stream; recover line and column.
    std::ifstream again(path);
    std::string text((std::istreambuf_iterator<char>(again)), std::istreambuf_iterator<char>());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw LoadError(path + ":" + std::to_string(line) + ":" + std::to_string(col), "JSON syntax error");
  }
}

// Signature entries are renumbered in name order so that parsing is
// insensitive to the order of the file and dump/parse round-trips exactly.
static void sort_signature(StringDiagram& d) {
  const Signature& old = *d.signature;
  std::vector<std::string> types = old.wire_names();
  std::sort(types.begin(), types.end());
  auto sig = std::make_shared<Signature>();
  std::vector<WireId> wmap(old.wire_count());
  for (const auto& t : types) wmap[old.wire(t).value] = sig->add_wire(t);
  std::vector<const Box*> boxes;
  for (const auto& b : old.boxes()) boxes.push_back(&b);
  std::sort(boxes.begin(), boxes.end(), [](const Box* a, const Box* b) { return a->name < b->name; });
  std::vector<BoxId> bmap(old.box_count());
  for (const Box* b : boxes) {
    std::vector<WireId> in, out;
    for (auto w : b->inputs) in.push_back(wmap[w.value]);
    for (auto w : b->outputs) out.push_back(wmap[w.value]);
    bmap[old.box_id(b->name).value] = sig->add_box(b->name, std::move(in), std::move(out));
  }
  for (auto& w : d.typing.wire_map) w = wmap[w.value];
  for (auto& b : d.typing.box_map) b = bmap[b.value];
  d.signature = sig;
}

StringDiagram parse_model(const json& doc) {
  check_format(doc);
  const json* sig_json = optional_member(doc, "signature");
  std::shared_ptr<Signature> sig;
  if (sig_json) sig = std::const_pointer_cast<Signature>(parse_signature(*sig_json));

  StringDiagram d;
  const json& diagram = member(doc, "diagram", "");
  const std::string wptr = "/diagram/wires";
  const auto& wires = expect_array(member(diagram, "wires", "/diagram"), wptr);
  std::vector<std::string> wire_types;
  for (std::size_t i = 0; i < wires.size(); ++i) {
    const std::string p = child(wptr, i);
    std::string id, type;
    if (wires[i].is_string()) {
      id = type = wires[i].get<std::string>();
    } else {
      id = expect_string(member(wires[i], "id", p), child(p, "id"));
      const json* t = optional_member(wires[i], "type");
      type = t ? expect_string(*t, child(p, "type")) : id;
    }
    if (d.body.find_wire(id)) throw LoadError(p, "duplicate wire id '" + id + "'");
    d.body.add_wire(id);
    wire_types.push_back(type);
  }

  if (!sig) {
    sig = std::make_shared<Signature>();
    for (const auto& t : wire_types)
      if (!sig->find_wire(t)) sig->add_wire(t);
  }
  for (std::size_t i = 0; i < wire_types.size(); ++i) {
    auto t = sig->find_wire(wire_types[i]);
    if (!t) throw LoadError(child(child(wptr, i), "type"), "unknown type '" + wire_types[i] + "'");
    d.typing.wire_map.push_back(*t);
  }

  const bool infer = sig_json == nullptr;
  const std::string bptr = "/diagram/boxes";
  if (const json* boxes = optional_member(diagram, "boxes")) {
    expect_array(*boxes, bptr);
    for (std::size_t i = 0; i < boxes->size(); ++i) {
      const auto& b = (*boxes)[i];
      const std::string p = child(bptr, i);
      auto id = expect_string(member(b, "id", p), child(p, "id"));
      if (d.body.find_box(id)) throw LoadError(child(p, "id"), "duplicate box id '" + id + "'");
      const json* t = optional_member(b, "type");
      const std::string type = t ? expect_string(*t, child(p, "type")) : id;

      std::vector<WireId> ports[2];
      const char* keys[2] = {"inputs", "outputs"};
      for (int side = 0; side < 2; ++side) {
        const json* list = optional_member(b, keys[side]);
        if (!list) continue;
        auto names = string_list(*list, child(p, keys[side]));
        for (std::size_t k = 0; k < names.size(); ++k) {
          auto w = d.body.find_wire(names[k]);
          if (!w) throw LoadError(child(child(p, keys[side]), k), "unknown wire '" + names[k] + "'");
          ports[side].push_back(*w);
        }
      }

      auto gen = sig->find_box(type);
      if (!gen) {
        if (!infer) throw LoadError(child(p, "type"), "unknown box type '" + type + "'");
        std::vector<WireId> tp[2];
        for (int side = 0; side < 2; ++side)
          for (auto w : ports[side]) tp[side].push_back(d.typing.wire_map[w.value]);
        gen = sig->add_box(type, tp[0], tp[1]);
      }
      const Box& g = sig->box(*gen);
      const std::vector<WireId>* expected[2] = {&g.inputs, &g.outputs};
      for (int side = 0; side < 2; ++side) {
        if (ports[side].size() != expected[side]->size())
          throw LoadError(child(p, keys[side]), "box type '" + type + "' has " + std::to_string(expected[side]->size()) +
                                                    " " + keys[side] + ", got " + std::to_string(ports[side].size()));
        for (std::size_t k = 0; k < ports[side].size(); ++k) {
          const WireId have = d.typing.wire_map[ports[side][k].value];
          const WireId want = (*expected[side])[k];
          if (have != want)
            throw LoadError(child(child(p, keys[side]), k),
                            "wire '" + d.body.wire_name(ports[side][k]) + "' has type '" + sig->wire_name(have) +
                                "' but box type '" + type + "' expects '" + sig->wire_name(want) + "'");
        }
      }
      d.body.add_box(id, ports[0], ports[1]);
      d.typing.box_map.push_back(*gen);
    }
  }

  {
    const json* iface = &member(doc, "interface", "");
    const char* keys[2] = {"inputs", "outputs"};
    std::vector<WireId>* legs[2] = {&d.inputs, &d.outputs};
    for (int side = 0; side < 2; ++side) {
      const json* list = optional_member(*iface, keys[side]);
      if (!list) continue;
      const std::string p = std::string("/interface/") + keys[side];
      auto names = string_list(*list, p);
      for (std::size_t k = 0; k < names.size(); ++k) {
        auto w = d.body.find_wire(names[k]);
        if (!w) throw LoadError(child(p, k), "unknown wire '" + names[k] + "'");
        legs[side]->push_back(*w);
      }
    }
  }
  d.signature = sig;
  sort_signature(d);
  return d;
}

StringDiagram load_model(const std::string& path) { return parse_model(read_json_file(path)); }

json model_to_json(const StringDiagram& d) {
  const Signature& sig = *d.signature;
  json doc;
  doc["format"] = kFormat;

  std::vector<std::string> types = sig.wire_names();
  std::sort(types.begin(), types.end());
  json sboxes = json::array();
  std::vector<std::size_t> order(sig.box_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sig.boxes()[a].name < sig.boxes()[b].name; });
  for (auto b : order) {
    const Box& g = sig.boxes()[b];
    json in = json::array(), out = json::array();
    for (auto t : g.inputs) in.push_back(sig.wire_name(t));
    for (auto t : g.outputs) out.push_back(sig.wire_name(t));
    sboxes.push_back({{"name", g.name}, {"inputs", in}, {"outputs", out}});
  }
  doc["signature"] = {{"types", types}, {"boxes", sboxes}};

  std::vector<std::uint32_t> worder(d.body.wire_count());
  std::iota(worder.begin(), worder.end(), 0u);
  std::sort(worder.begin(), worder.end(), [&](auto a, auto b) { return d.body.wire_names()[a] < d.body.wire_names()[b]; });
  json wires = json::array();
  for (auto w : worder) wires.push_back({{"id", d.body.wire_names()[w]}, {"type", d.type_name(WireId{w})}});

  std::vector<std::uint32_t> border(d.body.box_count());
  std::iota(border.begin(), border.end(), 0u);
  std::sort(border.begin(), border.end(), [&](auto a, auto b) { return d.body.boxes()[a].name < d.body.boxes()[b].name; });
  json boxes = json::array();
  for (auto b : border) {
    const Box& box = d.body.boxes()[b];
    json in = json::array(), out = json::array();
    for (auto w : box.inputs) in.push_back(d.body.wire_name(w));
    for (auto w : box.outputs) out.push_back(d.body.wire_name(w));
    boxes.push_back({{"id", box.name}, {"type", d.type_name(BoxId{b})}, {"inputs", in}, {"outputs", out}});
  }
  doc["diagram"] = {{"wires", wires}, {"boxes", boxes}};

  json in = json::array(), out = json::array();
  for (auto w : d.inputs) in.push_back(d.body.wire_name(w));
  for (auto w : d.outputs) out.push_back(d.body.wire_name(w));
  doc["interface"] = {{"inputs", in}, {"outputs", out}};
  return doc;
}

std::string dump_model(const StringDiagram& d) { return model_to_json(d).dump(2) + "\n"; }

namespace {

finstoch::Factor parse_fin_factor(const json& v, const std::string& p, const std::string& default_name) {
  finstoch::Factor f;
  const json* name = optional_member(v, "name");
  f.name = name ? expect_string(*name, child(p, "name")) : default_name;
  if (const json* labels = optional_member(v, "labels")) {
    f.labels = string_list(*labels, child(p, "labels"));
  } else if (const json* size = optional_member(v, "size")) {
    f = finstoch::make_factor(f.name, expect_count(*size, child(p, "size")));
  } else {
    throw LoadError(p, "finite factor needs 'labels' or 'size'");
  }
  if (f.labels.empty()) throw LoadError(p, "finite factor '" + f.name + "' is empty");
  return f;
}

gauss::Factor parse_gauss_factor(const json& v, const std::string& p, const std::string& default_name) {
  gauss::Factor f;
  const json* name = optional_member(v, "name");
  f.name = name ? expect_string(*name, child(p, "name")) : default_name;
  const json* dim = optional_member(v, "dim");
  f.dim = dim ? expect_count(*dim, child(p, "dim")) : 1;
  return f;
}

template <class F, class Parse>
std::vector<F> factor_list(const json& doc, const char* key, Parse parse) {
  std::vector<F> out;
  const json* list = optional_member(doc, key);
  if (!list) return out;
  const std::string p = std::string("/") + key;
  expect_array(*list, p);
  for (std::size_t i = 0; i < list->size(); ++i) out.push_back(parse((*list)[i], child(p, i), ""));
  return out;
}

std::vector<double> parse_table(const json& v, const std::string& p, std::size_t rows, std::size_t cols) {
  expect_array(v, p);
  std::vector<double> t;
  const bool flat = cols == 1 && (v.empty() || v[0].is_number());
  if (flat) {
    for (std::size_t i = 0; i < v.size(); ++i) t.push_back(expect_number(v[i], child(p, i)));
    if (t.size() != rows) throw LoadError(p, "expected " + std::to_string(rows) + " probabilities, got " + std::to_string(t.size()));
    return t;
  }
  if (v.size() != cols) throw LoadError(p, "expected " + std::to_string(cols) + " columns (one per input value), got " + std::to_string(v.size()));
  for (std::size_t a = 0; a < cols; ++a) {
    const std::string cp = child(p, a);
    expect_array(v[a], cp);
    if (v[a].size() != rows) throw LoadError(cp, "expected " + std::to_string(rows) + " probabilities, got " + std::to_string(v[a].size()));
    for (std::size_t y = 0; y < rows; ++y) t.push_back(expect_number(v[a][y], child(cp, y)));
  }
  return t;
}

finstoch::StochKernel make_fin_kernel(finstoch::Object dom, finstoch::Object cod, const json& table, const std::string& p) {
  const std::size_t rows = finstoch::cardinality(cod), cols = finstoch::cardinality(dom);
  auto t = parse_table(table, p, rows, cols);
  try {
    return finstoch::StochKernel(std::move(dom), std::move(cod), std::move(t), 1e-9);
  } catch (const Error& e) {
    throw LoadError(p, e.what());
  }
}

Eigen::MatrixXd parse_matrix(const json* v, const std::string& p, std::size_t rows, std::size_t cols) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  if (!v) {
    if (rows * cols == 0) return m;
    throw LoadError(p, "missing " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
  }
  expect_array(*v, p);
  if (cols == 0 && v->empty()) return m;
  if (v->size() != rows) throw LoadError(p, "expected " + std::to_string(rows) + " rows, got " + std::to_string(v->size()));
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = child(p, i);
    expect_array((*v)[i], rp);
    if ((*v)[i].size() != cols) throw LoadError(rp, "expected " + std::to_string(cols) + " columns, got " + std::to_string((*v)[i].size()));
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = expect_number((*v)[i][j], child(rp, j));
  }
  return m;
}

gauss::GaussKernel make_gauss_kernel(gauss::Object dom, gauss::Object cod, const json& doc, const std::string& p) {
  const std::size_t n = gauss::dimension(dom), m = gauss::dimension(cod);
  Eigen::MatrixXd a = parse_matrix(optional_member(doc, "matrix"), child(p, "matrix"), m, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  if (const json* off = optional_member(doc, "offset")) {
    const std::string op = child(p, "offset");
    expect_array(*off, op);
    if (off->size() != m) throw LoadError(op, "expected " + std::to_string(m) + " entries, got " + std::to_string(off->size()));
    for (std::size_t i = 0; i < m; ++i) b(static_cast<Eigen::Index>(i)) = expect_number((*off)[i], child(op, i));
  }
  const json* cov = optional_member(doc, "covariance");
  Eigen::MatrixXd s = cov ? parse_matrix(cov, child(p, "covariance"), m, m)
                          : Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  try {
    return gauss::GaussKernel(std::move(dom), std::move(cod), a, b, s);
  } catch (const Error& e) {
    throw LoadError(p, e.what());
  }
}

std::string backend_kind(const json& doc) {
  const json* kind = optional_member(doc, "kind");
  if (!kind) throw LoadError("", "missing member 'kind'");
  return expect_string(*kind, "/kind");
}

json fin_factor_json(const finstoch::Factor& f) { return {{"name", f.name}, {"labels", f.labels}}; }
json gauss_factor_json(const gauss::Factor& f) { return {{"name", f.name}, {"dim", f.dim}}; }

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

json fin_table_json(const finstoch::StochKernel& k) {
  json cols = json::array();
  for (std::size_t a = 0; a < k.cols(); ++a) {
    json col = json::array();
    for (std::size_t y = 0; y < k.rows(); ++y) col.push_back(k(y, a));
    cols.push_back(col);
  }
  return cols;
}

json gauss_moments_json(const gauss::GaussKernel& k) {
  json out;
  out["matrix"] = matrix_json(k.a());
  json b = json::array();
  for (Eigen::Index i = 0; i < k.b().size(); ++i) b.push_back(k.b()(i));
  out["offset"] = b;
  out["covariance"] = matrix_json(k.s());
  return out;
}

}  // namespace

AnyKernel parse_kernel(const json& doc) {
  check_format(doc);
  const std::string kind = backend_kind(doc);
  if (kind == "finstoch") {
    auto dom = factor_list<finstoch::Factor>(doc, "inputs", parse_fin_factor);
    auto cod = factor_list<finstoch::Factor>(doc, "outputs", parse_fin_factor);
    return make_fin_kernel(std::move(dom), std::move(cod), member(doc, "table", ""), "/table");
  }
  if (kind == "gauss") {
    auto dom = factor_list<gauss::Factor>(doc, "inputs", parse_gauss_factor);
    auto cod = factor_list<gauss::Factor>(doc, "outputs", parse_gauss_factor);
    return make_gauss_kernel(std::move(dom), std::move(cod), doc, "");
  }
  throw LoadError("/kind", "unknown data kind '" + kind + "', expected 'finstoch' or 'gauss'");
}

AnyKernel load_kernel(const std::string& path) { return parse_kernel(read_json_file(path)); }

json kernel_to_json(const finstoch::StochKernel& k) {
  json doc{{"format", kFormat}, {"kind", "finstoch"}};
  json in = json::array(), out = json::array();
  for (const auto& f : k.domain()) in.push_back(fin_factor_json(f));
  for (const auto& f : k.codomain()) out.push_back(fin_factor_json(f));
  doc["inputs"] = in;
  doc["outputs"] = out;
  doc["table"] = fin_table_json(k);
  return doc;
}

json kernel_to_json(const gauss::GaussKernel& k) {
  json doc{{"format", kFormat}, {"kind", "gauss"}};
  json in = json::array(), out = json::array();
  for (const auto& f : k.domain()) in.push_back(gauss_factor_json(f));
  for (const auto& f : k.codomain()) out.push_back(gauss_factor_json(f));
  doc["inputs"] = in;
  doc["outputs"] = out;
  doc.update(gauss_moments_json(k));
  return doc;
}

template <class K>
K align_to_model(const K& k, const CausalModel& phi) {
  auto names = [](const auto& obj) {
    std::vector<std::string> out;
    for (const auto& f : obj) out.push_back(f.name);
    return out;
  };
  auto join = [](std::vector<std::string> v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return "[" + s + "]";
  };
  std::vector<std::string> ins, outs;
  for (auto w : phi.inputs()) ins.push_back(phi.body().wire_name(w));
  for (auto w : phi.outputs()) outs.push_back(phi.body().wire_name(w));
  if (names(k.domain()) != ins)
    throw LoadError("/inputs", "data inputs " + join(names(k.domain())) + " do not match model inputs " + join(ins));
  const auto have = names(k.codomain());
  std::vector<std::size_t> positions;
  for (const auto& w : outs) {
    auto it = std::find(have.begin(), have.end(), w);
    if (it == have.end() || have.size() != outs.size())
      throw LoadError("/outputs", "data outputs " + join(have) + " do not match model outputs " + join(outs));
    positions.push_back(static_cast<std::size_t>(it - have.begin()));
  }
  if constexpr (std::is_same_v<K, finstoch::StochKernel>)
    return finstoch::select(k, positions);
  else
    return gauss::select(k, positions);
}

template finstoch::StochKernel align_to_model(const finstoch::StochKernel&, const CausalModel&);
template gauss::GaussKernel align_to_model(const gauss::GaussKernel&, const CausalModel&);

AnyInterpretation parse_interpretation(const json& doc, const Signature& sig) {
  check_format(doc);
  const std::string kind = backend_kind(doc);
  if (kind != "interpretation") throw LoadError("/kind", "expected kind 'interpretation', got '" + kind + "'");
  const std::string backend = expect_string(member(doc, "backend", ""), "/backend");
  const json& types = member(doc, "types", "");
  if (!types.is_object()) throw LoadError("/types", "expected an object keyed by type name");
  const json& boxes = member(doc, "boxes", "");
  if (!boxes.is_object()) throw LoadError("/boxes", "expected an object keyed by box type name");

  auto build = [&](auto backend_tag, auto parse_factor, auto make_kernel) -> AnyInterpretation {
    using B = decltype(backend_tag);
    Interpretation<B> interp;
    for (auto it = types.begin(); it != types.end(); ++it) {
      const std::string p = "/types/" + it.key();
      if (!sig.find_wire(it.key())) throw LoadError(p, "type '" + it.key() + "' is not in the signature");
      interp.types.emplace(it.key(), parse_factor(it.value(), p, it.key()));
    }
    for (auto it = boxes.begin(); it != boxes.end(); ++it) {
      const std::string p = "/boxes/" + it.key();
      auto gen = sig.find_box(it.key());
      if (!gen) throw LoadError(p, "box type '" + it.key() + "' is not in the signature");
      typename B::Object dom, cod;
      for (auto t : sig.box(*gen).inputs) {
        auto f = interp.types.find(sig.wire_name(t));
        if (f == interp.types.end()) throw LoadError(p, "no object given for type '" + sig.wire_name(t) + "'");
        dom.push_back(f->second);
      }
      for (auto t : sig.box(*gen).outputs) {
        auto f = interp.types.find(sig.wire_name(t));
        if (f == interp.types.end()) throw LoadError(p, "no object given for type '" + sig.wire_name(t) + "'");
        cod.push_back(f->second);
      }
      interp.boxes.emplace(it.key(), make_kernel(std::move(dom), std::move(cod), it.value(), p));
    }
    return interp;
  };

  if (backend == "finstoch")
    return build(FinStochBackend{}, parse_fin_factor, [](auto dom, auto cod, const json& v, const std::string& p) {
      return make_fin_kernel(std::move(dom), std::move(cod), member(v, "table", p), child(p, "table"));
    });
  if (backend == "gauss")
    return build(GaussBackend{}, parse_gauss_factor, [](auto dom, auto cod, const json& v, const std::string& p) {
      return make_gauss_kernel(std::move(dom), std::move(cod), v, p);
    });
  throw LoadError("/backend", "unknown backend '" + backend + "'");
}

AnyInterpretation load_interpretation(const std::string& path, const Signature& sig) {
  return parse_interpretation(read_json_file(path), sig);
}

json interpretation_to_json(const Interpretation<FinStochBackend>& interp, const Signature& sig) {
  json doc{{"format", kFormat}, {"kind", "interpretation"}, {"backend", "finstoch"}};
  json types = json::object(), boxes = json::object();
  for (const auto& [name, f] : interp.types) types[name] = {{"labels", f.labels}};
  for (const auto& [name, k] : interp.boxes)
    if (sig.find_box(name)) boxes[name] = {{"table", fin_table_json(k)}};
  doc["types"] = types;
  doc["boxes"] = boxes;
  return doc;
}

json interpretation_to_json(const Interpretation<GaussBackend>& interp, const Signature& sig) {
  json doc{{"format", kFormat}, {"kind", "interpretation"}, {"backend", "gauss"}};
  json types = json::object(), boxes = json::object();
  for (const auto& [name, f] : interp.types) types[name] = {{"dim", f.dim}};
  for (const auto& [name, k] : interp.boxes)
    if (sig.find_box(name)) boxes[name] = gauss_moments_json(k);
  doc["types"] = types;
  doc["boxes"] = boxes;
  return doc;
}

std::string to_dot(const StringDiagram& d) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::vector<std::vector<std::string>> legs(d.body.wire_count());
  for (std::size_t i = 0; i < d.inputs.size(); ++i) legs[d.inputs[i].value].push_back("in " + std::to_string(i));
  for (std::size_t j = 0; j < d.outputs.size(); ++j) legs[d.outputs[j].value].push_back("out " + std::to_string(j));

  std::ostringstream os;
  os << "digraph diagram {\n  rankdir=BT;\n";
  std::vector<std::uint32_t> worder(d.body.wire_count());
  std::iota(worder.begin(), worder.end(), 0u);
  std::sort(worder.begin(), worder.end(), [&](auto a, auto b) { return d.body.wire_names()[a] < d.body.wire_names()[b]; });
  for (auto w : worder) {
    std::string label = d.body.wire_names()[w];
    if (d.type_name(WireId{w}) != label) label += " : " + d.type_name(WireId{w});
    for (const auto& l : legs[w]) label += " [" + l + "]";
    os << "  " << quote("w:" + d.body.wire_names()[w]) << " [shape=point, xlabel=" << quote(label) << "];\n";
  }
  std::vector<std::uint32_t> border(d.body.box_count());
  std::iota(border.begin(), border.end(), 0u);
  std::sort(border.begin(), border.end(), [&](auto a, auto b) { return d.body.boxes()[a].name < d.body.boxes()[b].name; });
  for (auto b : border) {
    const Box& box = d.body.boxes()[b];
    std::string label = box.name;
    if (d.type_name(BoxId{b}) != label) label += " : " + d.type_name(BoxId{b});
    os << "  " << quote("b:" + box.name) << " [shape=box, label=" << quote(label) << "];\n";
  }
  for (auto b : border) {
    const Box& box = d.body.boxes()[b];
    for (std::size_t k = 0; k < box.inputs.size(); ++k)
      os << "  " << quote("w:" + d.body.wire_name(box.inputs[k])) << " -> " << quote("b:" + box.name)
         << " [headlabel=" << k << ", arrowhead=none];\n";
    for (std::size_t k = 0; k < box.outputs.size(); ++k)
      os << "  " << quote("b:" + box.name) << " -> " << quote("w:" + d.body.wire_name(box.outputs[k]))
         << " [taillabel=" << k << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace mdsep::io
