#include <benchmark/benchmark.h>

#include "ksv/cp.hpp"
#include "ksv/kernels.hpp"
#include "ksv/random.hpp"

namespace {

struct Fixture {
  ksv::CPMap phi;
  std::vector<ksv::CMatrix> choi_blocks;
  int n = 0;
};

Fixture make(int block, int module_dim) {
  const ksv::AlgebraShape a({block});
  ksv::Rng rng(7);
  std::vector<ksv::CMatrix> metrics{rng.positive_definite(module_dim)};
  const ksv::HilbertModule e = ksv::rect_module(ksv::AlgebraShape({1}), {module_dim}, metrics);
  Fixture f{ksv::random_cp(a, e, 11), {}, block};
  for (int k = 0; k < block * block; ++k) f.choi_blocks.push_back(f.phi.images[k]);
  return f;
}

void BM_KsgnsPairing(benchmark::State& state, ksv::Exec exec) {
  const Fixture f = make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto& e = f.phi.module.data();
  for (auto _ : state) benchmark::DoNotOptimize(ksv::kernels::ksgns_pairing(f.phi.algebra, e.pairing, f.phi.images, exec));
}

void BM_TensorPairing(benchmark::State& state, ksv::Exec exec) {
  const Fixture f = make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto& e = f.phi.module.data();
  for (auto _ : state) benchmark::DoNotOptimize(ksv::kernels::tensor_pairing(e.pairing, e.pairing, e.action, exec));
}

void BM_Choi(benchmark::State& state, ksv::Exec exec) {
  const Fixture f = make(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(ksv::kernels::choi_matrix(f.choi_blocks, f.n, exec));
}

}  // namespace

BENCHMARK_CAPTURE(BM_KsgnsPairing, serial, ksv::Exec::Serial)->Args({2, 8})->Args({3, 12})->Args({3, 24});
BENCHMARK_CAPTURE(BM_KsgnsPairing, parallel, ksv::Exec::Parallel)->Args({2, 8})->Args({3, 12})->Args({3, 24});
BENCHMARK_CAPTURE(BM_TensorPairing, serial, ksv::Exec::Serial)->Args({2, 16})->Args({2, 32});
BENCHMARK_CAPTURE(BM_TensorPairing, parallel, ksv::Exec::Parallel)->Args({2, 16})->Args({2, 32});
BENCHMARK_CAPTURE(BM_Choi, serial, ksv::Exec::Serial)->Args({3, 12})->Args({3, 24});
BENCHMARK_CAPTURE(BM_Choi, parallel, ksv::Exec::Parallel)->Args({3, 12})->Args({3, 24});

BENCHMARK_MAIN();
