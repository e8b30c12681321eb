#include <benchmark/benchmark.h>

#include <random>

#include "mdsep/finstoch.hpp"
#include "mdsep/gauss.hpp"

using namespace mdsep;

namespace {

finstoch::StochKernel random_state(std::size_t factors, std::size_t card, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  finstoch::Object o;
  for (std::size_t i = 0; i < factors; ++i) o.push_back(finstoch::make_factor("F" + std::to_string(i), card));
  std::vector<double> t(finstoch::cardinality(o));
  double sum = 0;
  for (auto& v : t) sum += (v = e(rng));
  for (auto& v : t) v /= sum;
  return finstoch::StochKernel({}, o, std::move(t));
}

void BM_FinStochCi(benchmark::State& state) {
  const auto f = random_state(static_cast<std::size_t>(state.range(0)), 3, 1);
  const std::vector<std::size_t> x{0}, y{1}, z{2};
  for (auto _ : state) benchmark::DoNotOptimize(finstoch::ci_state(f, x, y, z));
}
BENCHMARK(BM_FinStochCi)->DenseRange(3, 8);

void BM_FinStochConditional(benchmark::State& state) {
  const auto f = random_state(static_cast<std::size_t>(state.range(0)), 3, 2);
  const std::vector<std::size_t> x{0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(finstoch::conditional(f, x));
}
BENCHMARK(BM_FinStochConditional)->DenseRange(3, 8);

void BM_GaussCompose(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  gauss::Object o{{"G", static_cast<std::size_t>(n)}};
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n), l = Eigen::MatrixXd::Random(n, n);
  gauss::GaussKernel f(o, o, a, Eigen::VectorXd::Zero(n), l * l.transpose());
  for (auto _ : state) benchmark::DoNotOptimize(gauss::compose(f, f));
}
BENCHMARK(BM_GaussCompose)->RangeMultiplier(2)->Range(2, 64);

void BM_GaussCi(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  gauss::Object o;
  for (int i = 0; i < 3; ++i) o.push_back({"G" + std::to_string(i), static_cast<std::size_t>(n)});
  Eigen::MatrixXd l = Eigen::MatrixXd::Random(3 * n, 3 * n);
  gauss::GaussKernel f({}, o, Eigen::MatrixXd(3 * n, 0), Eigen::VectorXd::Zero(3 * n), l * l.transpose());
  const std::vector<std::size_t> x{0}, y{1}, z{2};
  for (auto _ : state) benchmark::DoNotOptimize(gauss::ci_state(f, x, y, z));
}
BENCHMARK(BM_GaussCi)->RangeMultiplier(2)->Range(1, 32);

}  // namespace
