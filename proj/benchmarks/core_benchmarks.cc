#include <benchmark/benchmark.h>

#include "nclust/cross_validation.hpp"
#include "nclust/features.hpp"
#include "nclust/oracle.hpp"
#include "nclust/path_recovery.hpp"
#include "nclust/pythia.hpp"
#include "nclust/random.hpp"

namespace {

using namespace nclust;

SignedGraph bench_graph(NodeId n, double p, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xbe9cULL));
  std::vector<SignedEdge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v) {
      if (u == v) continue;
      if (rng.bernoulli(p))
        edges.push_back({u, v, rng.bernoulli(0.3) ? Sign{-1} : Sign{1}});
    }
  return SignedGraph(n, std::move(edges));
}

void BM_OracleQueryStream(benchmark::State& state) {
  // Disjoint pairs, wrapping; fresh on the first lap, cached after.
  constexpr NodeId kUniverse = 1 << 20;
  NoisyOracle oracle(GroundTruth::balanced(kUniverse), {0.2, 1});
  NodeId u = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.query(u, u + 1));
    u = (u + 2) & (kUniverse - 1);
  }
}
BENCHMARK(BM_OracleQueryStream);

void BM_OracleCachedQuery(benchmark::State& state) {
  NoisyOracle oracle(GroundTruth::balanced(64), {0.2, 1});
  oracle.query(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(oracle.query(1, 2));
}
BENCHMARK(BM_OracleCachedQuery);

void BM_SampleQueryGraph(benchmark::State& state) {
  const NodeId n = static_cast<NodeId>(state.range(0));
  for (auto _ : state) {
    NoisyOracle oracle(GroundTruth::balanced(n), {0.1, 7});
    benchmark::DoNotOptimize(sample_query_graph(oracle, n, 0.1));
  }
}
BENCHMARK(BM_SampleQueryGraph)->Arg(500)->Arg(2000);

void BM_TriadCounts(benchmark::State& state) {
  const SignedGraph g = bench_graph(400, 0.05, 3);
  std::size_t i = 0;
  for (auto _ : state) {
    const SignedEdge& e = g.edges()[i++ % g.edges().size()];
    benchmark::DoNotOptimize(triad_counts(g, e.src, e.dst));
  }
}
BENCHMARK(BM_TriadCounts);

void BM_GreedyDisjointPaths(benchmark::State& state) {
  const SignedGraph g = bench_graph(400, 0.05, 4);
  const std::size_t length = static_cast<std::size_t>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) {
    const SignedEdge& e = g.edges()[i++ % g.edges().size()];
    benchmark::DoNotOptimize(greedy_disjoint_paths(g, e.src, e.dst, length));
  }
}
BENCHMARK(BM_GreedyDisjointPaths)->Arg(3)->Arg(4);

void BM_FeatureVector(benchmark::State& state) {
  const SignedGraph g = bench_graph(400, 0.05, 5);
  std::size_t i = 0;
  for (auto _ : state) {
    const SignedEdge& e = g.edges()[i++ % g.edges().size()];
    benchmark::DoNotOptimize(feature_vector(g, e.src, e.dst));
  }
}
BENCHMARK(BM_FeatureVector);

void BM_RecoverPythia(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const PythiaConfig config = PythiaConfig::from_formula(n, 0.6);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    NoisyOracle oracle(GroundTruth::random_balanced(n, seed), {0.2, seed});
    benchmark::DoNotOptimize(recover_pythia(oracle, n, config));
    ++seed;
  }
}
BENCHMARK(BM_RecoverPythia)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_BuildGadget(benchmark::State& state) {
  NoisyOracle oracle(GroundTruth::random_balanced(1000, 2), {0.1, 2});
  const PathConfig config = PathConfig::from_formula(1000, 0.8);
  const QueryGraph qg = sample_query_graph(oracle, 1000, config.p);
  NodeId v = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_gadget(qg, 0, v, config));
    v = v % 999 + 1;
  }
}
BENCHMARK(BM_BuildGadget);

void BM_RecoverPaths(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const PathConfig config = PathConfig::from_formula(n, 0.8);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    NoisyOracle oracle(GroundTruth::random_balanced(n, seed), {0.1, seed});
    benchmark::DoNotOptimize(recover_paths(oracle, n, config));
    ++seed;
  }
}
BENCHMARK(BM_RecoverPaths)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_TrainLogistic(benchmark::State& state) {
  Rng rng(derive_seed(8, 0x10ULL));
  std::vector<LabeledRow> rows(2000);
  for (auto& r : rows) {
    r.label = rng.bernoulli(0.5) ? Sign{1} : Sign{-1};
    for (double& v : r.x) v = rng.next_double() + (r.label == 1 ? 0.05 : 0.0);
  }
  const FeatureMask mask = FeatureMask::parse("All");
  for (auto _ : state) benchmark::DoNotOptimize(train_logistic(rows, mask, {}));
}
BENCHMARK(BM_TrainLogistic)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
