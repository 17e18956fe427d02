// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "ozmac/encoder.hpp"
#include "ozmac/macsim.hpp"
#include "ozmac/profiler.hpp"

namespace {

using namespace ozmac;

std::vector<Operand> random_operands(std::size_t n, int bits, Role role, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> d(min_value(bits, Signedness::TwosComplement),
                                                max_value(bits, Signedness::TwosComplement));
  std::vector<Operand> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(validate_operand(d(rng), bits, Signedness::TwosComplement, role));
  }
  return out;
}

void BM_OzEncode(benchmark::State& state) {
  const auto ops = random_operands(4096, static_cast<int>(state.range(0)), Role::Weight, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oz_encode(ops[i++ & 4095]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OzEncode)->Arg(4)->Arg(8)->Arg(16);

template <MacUnit Unit>
void BM_Compute(benchmark::State& state) {
  const PrecisionConfig cfg(8, 8);
  const auto w = random_operands(4096, 8, Role::Weight, 2);
  const auto a = random_operands(4096, 8, Role::Activation, 3);
  const auto zero = AccumulatorState::zero(cfg);
  std::size_t i = 0;
  for (auto _ : state) {
    const std::size_t k = i++ & 4095;
    if constexpr (Unit == MacUnit::OzMac) {
      benchmark::DoNotOptimize(ozmac_compute(w[k], a[k], zero, cfg));
    } else {
      benchmark::DoNotOptimize(bmac_compute(w[k], a[k], zero, cfg));
    }
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Compute<MacUnit::OzMac>)->Name("BM_OzMacCompute8x8");
BENCHMARK(BM_Compute<MacUnit::BMac>)->Name("BM_BMacCompute8x8");

void BM_DotProduct(benchmark::State& state) {
  const PrecisionConfig cfg(8, 8);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto w = random_operands(n, 8, Role::Weight, 4);
  const auto a = random_operands(n, 8, Role::Activation, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dot_product(w, a, cfg, MacUnit::OzMac));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_DotProduct)->Arg(64)->Arg(4096);

void BM_BitSparsity(benchmark::State& state) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::int64_t> d(-128, 127);
  TensorFile t;
  t.dtype_bits = 8;
  t.signedness = Signedness::TwosComplement;
  t.dims = {static_cast<std::uint64_t>(state.range(0))};
  for (std::int64_t i = 0; i < state.range(0); ++i) t.values.push_back(d(rng));
  const std::vector<TensorFile> files{t};
  for (auto _ : state) {
    benchmark::DoNotOptimize(bit_sparsity(files, "layer"));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BitSparsity)->Arg(1 << 16)->Arg(1 << 20);

}  // namespace

BENCHMARK_MAIN();
