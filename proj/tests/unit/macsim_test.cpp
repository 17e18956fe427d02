// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ozmac/error.hpp"
#include "ozmac/macsim.hpp"

namespace ozmac {
namespace {

using testing::naive_popcount;

Operand w_op(std::int64_t v, int bits, Signedness s = Signedness::TwosComplement) {
  return validate_operand(v, bits, s, Role::Weight);
}
Operand a_op(std::int64_t v, int bits, Signedness s = Signedness::TwosComplement) {
  return validate_operand(v, bits, s, Role::Activation);
}

std::int64_t replay(const MacTrace& t, std::int64_t acc_in) {
  std::int64_t acc = acc_in;
  for (const auto& e : t.events) {
    acc += e.addend;
    EXPECT_EQ(acc, e.accumulator_after);
  }
  return acc;
}

TEST(OzMacCompute, ShiftAddExample) {
  const PrecisionConfig cfg(4, 4);
  const auto t = ozmac_compute(w_op(5, 4), a_op(3, 4), AccumulatorState::zero(cfg), cfg);
  EXPECT_EQ(t.result, 15);
  EXPECT_EQ(t.cycles, 2);
  ASSERT_EQ(t.events.size(), 2u);
  EXPECT_EQ(t.events[0], (MacEvent{0, 2, 12, 12}));
  EXPECT_EQ(t.events[1], (MacEvent{1, 0, 3, 15}));
}

TEST(OzMacCompute, ZeroWeightSkipsEntirely) {
  const PrecisionConfig cfg(8, 8);
  const auto t = ozmac_compute(w_op(0, 8), a_op(-77, 8), AccumulatorState(7, cfg.accumulator_width()), cfg);
  EXPECT_EQ(t.result, 7);
  EXPECT_EQ(t.cycles, 0);
  EXPECT_TRUE(t.events.empty());
}

TEST(OzMacCompute, NegativeWeight) {
  const PrecisionConfig cfg(4, 4);
  const auto t = ozmac_compute(w_op(-5, 4), a_op(3, 4), AccumulatorState::zero(cfg), cfg);
  EXPECT_EQ(t.result, -5 * 3);
  EXPECT_EQ(t.cycles, 2);
}

TEST(OzMacCompute, MixedPrecisionEncodesNarrowSide) {
  const PrecisionConfig cfg(4, 8, Signedness::Unsigned);
  const auto t = ozmac_compute(w_op(3, 4, Signedness::Unsigned), a_op(200, 8, Signedness::Unsigned),
                               AccumulatorState::zero(cfg), cfg);
  EXPECT_EQ(t.result, 3 * 200);
  EXPECT_EQ(t.cycles, 2);
}

TEST(OzMacCompute, WideWeightEncodesActivation) {
  const PrecisionConfig cfg(16, 8);
  const auto t = ozmac_compute(w_op(0x7FFF, 16), a_op(0b0100'0001, 8), AccumulatorState::zero(cfg), cfg);
  EXPECT_EQ(t.result, 0x7FFF * 0b0100'0001);
  EXPECT_EQ(t.cycles, 2);
  EXPECT_EQ(t.events[0].term_position, 6);
}

TEST(OzMacCompute, RejectsOperandsThatDoNotMatchConfig) {
  const PrecisionConfig cfg(8, 8);
  try {
    ozmac_compute(w_op(1, 4), a_op(1, 8), AccumulatorState::zero(cfg), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigMismatch);
  }
  try {
    bmac_compute(w_op(1, 8, Signedness::Unsigned), a_op(1, 8), AccumulatorState::zero(cfg), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigMismatch);
  }
}

TEST(OzMacCompute, AccumulatorOverflowIsRaised) {
  const PrecisionConfig cfg(8, 8);
  const std::int64_t top = (std::int64_t{1} << 31) - 1;
  for (auto unit : {MacUnit::OzMac, MacUnit::BMac}) {
    const auto acc = AccumulatorState(top - 10, cfg.accumulator_width());
    try {
      unit == MacUnit::OzMac ? ozmac_compute(w_op(100, 8), a_op(100, 8), acc, cfg)
                             : bmac_compute(w_op(100, 8), a_op(100, 8), acc, cfg);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::AccumulatorOverflow);
    }
  }
}

TEST(BMacCompute, Examples) {
  const PrecisionConfig cfg(8, 8);
  const auto zero = AccumulatorState::zero(cfg);
  auto t = bmac_compute(w_op(5, 8), a_op(3, 8), zero, cfg);
  EXPECT_EQ(t.result, 15);
  EXPECT_EQ(t.cycles, 1);
  ASSERT_EQ(t.events.size(), 1u);
  t = bmac_compute(w_op(-128, 8), a_op(127, 8), zero, cfg);
  EXPECT_EQ(t.result, -128 * 127);
  EXPECT_EQ(t.cycles, 1);
  t = bmac_compute(w_op(0, 8), a_op(0, 8), zero, cfg);
  EXPECT_EQ(t.result, 0);
  EXPECT_EQ(t.cycles, 1);
}

TEST(MacEquivalence, Exhaustive4x4And8x8) {
  for (int bits : {4, 8}) {
    const PrecisionConfig cfg(bits, bits);
    const auto acc = AccumulatorState::zero(cfg);
    for (auto w = min_value(bits, cfg.signedness()); w <= max_value(bits, cfg.signedness()); ++w) {
      const auto wo = w_op(w, bits);
      for (auto a = min_value(bits, cfg.signedness()); a <= max_value(bits, cfg.signedness()); ++a) {
        const auto ao = a_op(a, bits);
        const auto oz = ozmac_compute(wo, ao, acc, cfg);
        const auto b = bmac_compute(wo, ao, acc, cfg);
        ASSERT_EQ(oz.result, w * a);
        ASSERT_EQ(b.result, w * a);
        ASSERT_EQ(oz.cycles, naive_popcount(w));
        ASSERT_EQ(static_cast<std::int64_t>(oz.events.size()), oz.cycles);
        ASSERT_EQ(b.cycles, 1);
      }
    }
  }
}

TEST(MacEquivalence, Sampled16x16WithCorners) {
  const PrecisionConfig cfg(16, 16);
  const auto acc = AccumulatorState::zero(cfg);
  auto check = [&](std::int64_t w, std::int64_t a) {
    const auto oz = ozmac_compute(w_op(w, 16), a_op(a, 16), acc, cfg);
    const auto b = bmac_compute(w_op(w, 16), a_op(a, 16), acc, cfg);
    ASSERT_EQ(oz.result, w * a);
    ASSERT_EQ(b.result, w * a);
    ASSERT_EQ(oz.cycles, naive_popcount(w));
  };
  for (std::int64_t w : {-32768, 32767}) {
    for (std::int64_t a : {-32768, 32767}) check(w, a);
  }
  std::mt19937_64 rng(1616);
  std::uniform_int_distribution<std::int64_t> dist(-32768, 32767);
  for (int i = 0; i < 1'000'000; ++i) check(dist(rng), dist(rng));
}

TEST(MacTrace, EventsReplayToResult) {
  std::mt19937_64 rng(3);
  for (const auto& cfg : {PrecisionConfig(4, 8), PrecisionConfig(8, 8), PrecisionConfig(8, 16),
                          PrecisionConfig(16, 8), PrecisionConfig(16, 16)}) {
    std::uniform_int_distribution<std::int64_t> wd(min_value(cfg.weight_bits(), cfg.signedness()),
                                                   max_value(cfg.weight_bits(), cfg.signedness()));
    std::uniform_int_distribution<std::int64_t> ad(min_value(cfg.activation_bits(), cfg.signedness()),
                                                   max_value(cfg.activation_bits(), cfg.signedness()));
    for (int i = 0; i < 2000; ++i) {
      const auto acc_in = static_cast<std::int64_t>(rng() % 20001) - 10000;
      const auto acc = AccumulatorState(acc_in, cfg.accumulator_width());
      const auto w = wd(rng);
      const auto a = ad(rng);
      const auto t = ozmac_compute(w_op(w, cfg.weight_bits()), a_op(a, cfg.activation_bits()), acc, cfg);
      ASSERT_EQ(replay(t, acc_in), t.result);
      ASSERT_EQ(t.result, acc_in + w * a);
      for (const auto& e : t.events) {
        const auto shifted = cfg.encoded_side() == Role::Weight ? a : w;
        const auto encoded = cfg.encoded_side() == Role::Weight ? w : a;
        ASSERT_EQ(e.addend, (encoded < 0 ? -1 : 1) * shifted * (std::int64_t{1} << e.term_position));
      }
    }
  }
}

TEST(MacTrace, MixedPrecisionCyclesDependOnNarrowOperandOnly) {
  // 4x8: weight encoded. 16x8: activation encoded.
  const PrecisionConfig narrow_w(4, 8);
  const PrecisionConfig narrow_a(16, 8);
  for (std::int64_t a = -128; a <= 127; ++a) {
    for (std::int64_t w = -8; w <= 7; ++w) {
      ASSERT_EQ(ozmac_compute(w_op(w, 4), a_op(a, 8), AccumulatorState::zero(narrow_w), narrow_w).cycles,
                naive_popcount(w));
    }
    for (std::int64_t w : {-32768, -1, 0, 1, 12345, 32767}) {
      ASSERT_EQ(ozmac_compute(w_op(w, 16), a_op(a, 8), AccumulatorState::zero(narrow_a), narrow_a).cycles,
                naive_popcount(a));
    }
  }
}

TEST(OzMacUnit, IdleTicksDoNothing) {
  const PrecisionConfig cfg(8, 8);
  OzMacUnit unit(cfg, AccumulatorState::zero(cfg));
  EXPECT_FALSE(unit.busy());
  EXPECT_FALSE(unit.tick().has_value());
  unit.load(w_op(3, 8), a_op(10, 8));
  EXPECT_TRUE(unit.busy());
  EXPECT_TRUE(unit.tick().has_value());
  EXPECT_TRUE(unit.tick().has_value());
  EXPECT_FALSE(unit.busy());
  EXPECT_FALSE(unit.tick().has_value());
  EXPECT_EQ(unit.cycles(), 2);
  EXPECT_EQ(unit.accumulator().value(), 30);
}

TEST(DotProduct, Examples) {
  const PrecisionConfig cfg(8, 8);
  const std::vector<Operand> w{w_op(1, 8), w_op(2, 8)};
  const std::vector<Operand> a{a_op(3, 8), a_op(4, 8)};
  auto r = dot_product(w, a, cfg, MacUnit::OzMac);
  EXPECT_EQ(r.result, 11);
  EXPECT_EQ(r.total_cycles, naive_popcount(1) + naive_popcount(2));

  const std::vector<Operand> zw(3, w_op(0, 8));
  const std::vector<Operand> na(3, a_op(9, 8));
  r = dot_product(zw, na, cfg, MacUnit::OzMac);
  EXPECT_EQ(r.result, 0);
  EXPECT_EQ(r.total_cycles, 0);

  r = dot_product(w, a, cfg, MacUnit::BMac);
  EXPECT_EQ(r.result, 11);
  EXPECT_EQ(r.total_cycles, 2);
}

TEST(DotProduct, Errors) {
  const PrecisionConfig cfg(8, 8);
  const std::vector<Operand> one{w_op(1, 8)};
  const std::vector<Operand> two{a_op(1, 8), a_op(2, 8)};
  try {
    dot_product(one, two, cfg, MacUnit::OzMac);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
  try {
    dot_product({}, {}, cfg, MacUnit::BMac);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
}

TEST(DotProduct, CollectsTraces) {
  const PrecisionConfig cfg(8, 8);
  const std::vector<Operand> w{w_op(5, 8), w_op(-3, 8), w_op(0, 8)};
  const std::vector<Operand> a{a_op(7, 8), a_op(2, 8), a_op(100, 8)};
  std::vector<MacTrace> traces;
  const auto r = dot_product(w, a, cfg, MacUnit::OzMac, &traces);
  ASSERT_EQ(traces.size(), 3u);
  EXPECT_EQ(traces[0].result, 35);
  EXPECT_EQ(traces[1].result, 29);
  EXPECT_EQ(traces[2].result, 29);
  EXPECT_EQ(r.result, 29);
  EXPECT_EQ(r.total_cycles, 4);
}

TEST(AverageCycles, Examples) {
  std::vector<Operand> two_bits;
  for (std::int64_t v : {3, 5, 6, 9, 10, 12, -3, -96}) two_bits.push_back(w_op(v, 8));
  EXPECT_DOUBLE_EQ(average_cycles(two_bits), 2.0);

  const std::vector<Operand> zeros(10, w_op(0, 8));
  EXPECT_DOUBLE_EQ(average_cycles(zeros), 0.0);

  // 1000 values carrying 2334 set bits in total.
  const auto ops = testing::synthetic_int8(1000, 2334).operands();
  EXPECT_NEAR(average_cycles(ops), 2.334, 1e-12);

  try {
    average_cycles({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
}

TEST(TraceDump, GoldenJsonLines) {
  const PrecisionConfig cfg(4, 4);
  const auto t = ozmac_compute(w_op(5, 4), a_op(3, 4), AccumulatorState::zero(cfg), cfg);
  std::ostringstream out;
  write_trace_jsonl(out, t);
  EXPECT_EQ(out.str(),
            "{\"cycle_index\":0,\"position\":2,\"addend\":12,\"accumulator_after\":12}\n"
            "{\"cycle_index\":1,\"position\":0,\"addend\":3,\"accumulator_after\":15}\n");
  std::ostringstream shifted;
  write_trace_jsonl(shifted, t, 10);
  EXPECT_NE(shifted.str().find("\"cycle_index\":11"), std::string::npos);
}

}  // namespace
}  // namespace ozmac
