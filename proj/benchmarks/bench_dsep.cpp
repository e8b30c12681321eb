#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "mdsep/dsep.hpp"
#include "mdsep/normalize.hpp"

using namespace mdsep;

namespace {

// Layered DAG model: wire i reads up to three earlier wires.
CausalModel dag_model(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto sig = std::make_shared<Signature>();
  StringDiagram d;
  d.signature = sig;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string name = "v" + std::to_string(i);
    const WireId t = sig->add_wire(name);
    std::vector<WireId> ins, ins_t;
    for (int k = 0; k < 3 && i > 0; ++k) {
      const auto j = static_cast<std::uint32_t>(rng() % i);
      if (std::find(ins.begin(), ins.end(), WireId{j}) != ins.end()) continue;
      ins.push_back(WireId{j});
      ins_t.push_back(d.typing.wire_map[j]);
    }
    const WireId w = d.body.add_wire(name);
    d.typing.wire_map.push_back(t);
    d.typing.box_map.push_back(sig->add_box("b" + std::to_string(i), ins_t, {t}));
    d.body.add_box("b" + std::to_string(i), ins, {w});
    d.outputs.push_back(w);
  }
  return CausalModel::from_diagram(std::move(d));
}

DSepQuery spread_query(const CausalModel& phi) {
  DSepQuery q;
  const auto n = static_cast<std::uint32_t>(phi.wire_count());
  q.x = {WireId{0}};
  q.y = {WireId{n - 1}};
  for (std::uint32_t i = 1; i + 1 < n; i += 3) q.z.push_back(WireId{i});
  return q;
}

void BM_Categorical(benchmark::State& state) {
  const auto phi = dag_model(static_cast<std::size_t>(state.range(0)), 1);
  const auto q = spread_query(phi);
  for (auto _ : state) benchmark::DoNotOptimize(d_separated_categorical(phi, q));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Categorical)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_Classical(benchmark::State& state) {
  const auto phi = dag_model(static_cast<std::size_t>(state.range(0)), 1);
  const auto dag = underlying_dag(phi);
  const auto q = spread_query(phi);
  for (auto _ : state) benchmark::DoNotOptimize(d_separated_classical(dag, q.x, q.y, q.z));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Classical)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_Normalize(benchmark::State& state) {
  auto phi = dag_model(static_cast<std::size_t>(state.range(0)), 2);
  // Keep only the first wire observed so most boxes become eliminable.
  StringDiagram d = phi.diagram();
  d.outputs = {d.outputs.front()};
  for (auto _ : state) benchmark::DoNotOptimize(normalize(d));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Normalize)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

}  // namespace
