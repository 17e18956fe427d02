// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "ozmac/error.hpp"
#include "ozmac/macsim.hpp"
#include "ozmac/profiler.hpp"

namespace ozmac {
namespace {

using testing::make_tensor;
using testing::synthetic_int8;

SparsityReport one(const TensorFile& t, std::string name = "t") {
  return bit_sparsity(std::span(&t, 1), std::move(name));
}

void check_report_invariants(const SparsityReport& r) {
  std::uint64_t n = 0;
  std::uint64_t ones = 0;
  for (std::size_t k = 0; k < r.histogram.size(); ++k) {
    n += r.histogram[k];
    ones += k * r.histogram[k];
  }
  EXPECT_EQ(n, r.count);
  EXPECT_NEAR(r.avg_ones, static_cast<double>(ones) / static_cast<double>(n), 1e-12);
  EXPECT_NEAR(r.bit_sparsity_pct, 100.0 * (1.0 - r.avg_ones / r.dtype_bits), 1e-9);
  EXPECT_NEAR(r.bit_sparsity_pct + 100.0 * r.avg_ones / r.dtype_bits, 100.0, 1e-9);
}

TEST(BitSparsity, AllThrees) {
  const auto r = one(make_tensor(8, Signedness::TwosComplement, {4}, {3, 3, 3, 3}));
  EXPECT_DOUBLE_EQ(r.avg_ones, 2.0);
  EXPECT_DOUBLE_EQ(r.bit_sparsity_pct, 75.0);
  check_report_invariants(r);
}

TEST(BitSparsity, PublishedMobileNetV2Average) {
  const auto r = one(synthetic_int8(1000, 2334));
  EXPECT_NEAR(r.avg_ones, 2.334, 1e-12);
  // 100 * (1 - 2.334 / 8) = 70.825
  EXPECT_NEAR(r.bit_sparsity_pct, 70.825, 1e-9);
  check_report_invariants(r);
}

TEST(BitSparsity, AllZero) {
  const auto r = one(make_tensor(8, Signedness::TwosComplement, {2, 2}, {0, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(r.avg_ones, 0.0);
  EXPECT_DOUBLE_EQ(r.bit_sparsity_pct, 100.0);
  EXPECT_EQ(r.histogram[0], 4u);
}

TEST(BitSparsity, PopcountIsOnMagnitude) {
  // -1 is 0xFF in storage but costs one OzMAC cycle.
  const auto r = one(make_tensor(8, Signedness::TwosComplement, {2}, {-1, -128}));
  EXPECT_DOUBLE_EQ(r.avg_ones, 1.0);
  EXPECT_EQ(r.histogram[1], 2u);
}

TEST(BitSparsity, Errors) {
  try {
    bit_sparsity({}, "none");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
  const std::vector<TensorFile> mixed{make_tensor(8, Signedness::TwosComplement, {1}, {1}),
                                      make_tensor(4, Signedness::TwosComplement, {1}, {1})};
  try {
    bit_sparsity(mixed, "mixed");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MixedDtype);
  }
}

TEST(BitSparsity, AgreesWithAverageCycles) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = synthetic_int8(500 + trial, 500 + rng() % 2500, static_cast<std::uint32_t>(trial));
    EXPECT_DOUBLE_EQ(one(t).avg_ones, average_cycles(t.operands()));
  }
}

TEST(ModelReport, CountWeightedAggregate) {
  // 100 values with 2 bits each, 300 values with 3 bits each.
  const std::vector<SparsityReport> layers{one(synthetic_int8(100, 200), "a"),
                                           one(synthetic_int8(300, 900), "b")};
  const auto m = model_report(layers);
  ASSERT_EQ(m.layers.size(), 2u);
  EXPECT_DOUBLE_EQ(m.aggregate.avg_ones, 2.75);
  EXPECT_EQ(m.aggregate.count, 400u);
  EXPECT_EQ(m.aggregate.name, kAggregateName);
  check_report_invariants(m.aggregate);
}

TEST(ModelReport, SingleLayerAggregateEqualsLayer) {
  const std::vector<SparsityReport> layers{one(synthetic_int8(64, 150), "only")};
  const auto m = model_report(layers);
  EXPECT_EQ(m.aggregate.histogram, layers[0].histogram);
  EXPECT_DOUBLE_EQ(m.aggregate.avg_ones, layers[0].avg_ones);
}

TEST(ModelReport, EmptyLayerListIsAnError) {
  try {
    model_report(std::span<const SparsityReport>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
}

TEST(ModelReport, PermutationAndSplitInvariant) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<TensorFile> tensors;
    for (int l = 0; l < 5; ++l) {
      const std::uint64_t n = 10 + rng() % 200;
      tensors.push_back(synthetic_int8(n, rng() % (4 * n), static_cast<std::uint32_t>(rng())));
    }
    std::vector<SparsityReport> layers;
    for (const auto& t : tensors) layers.push_back(one(t));
    const auto base = model_report(layers).aggregate;

    std::shuffle(layers.begin(), layers.end(), rng);
    const auto shuffled = model_report(layers).aggregate;
    EXPECT_EQ(shuffled.histogram, base.histogram);
    EXPECT_DOUBLE_EQ(shuffled.avg_ones, base.avg_ones);

    // Split the first tensor in two at a random point.
    const auto& first = tensors[0];
    const auto cut = static_cast<std::ptrdiff_t>(rng() % first.values.size());
    std::vector<SparsityReport> split;
    split.push_back(one(make_tensor(8, first.signedness, {static_cast<std::uint64_t>(cut) + 1},
                                    {first.values.begin(), first.values.begin() + cut + 1})));
    if (cut + 1 < static_cast<std::ptrdiff_t>(first.values.size())) {
      split.push_back(one(make_tensor(8, first.signedness,
                                      {first.values.size() - static_cast<std::uint64_t>(cut) - 1},
                                      {first.values.begin() + cut + 1, first.values.end()})));
    }
    for (std::size_t i = 1; i < tensors.size(); ++i) split.push_back(one(tensors[i]));
    EXPECT_EQ(model_report(split).aggregate.histogram, base.histogram);
  }
}

TEST(ModelReport, LoadErrorsCarryLayerName) {
  testing::TempDir dir("profiler");
  save_tensor(dir / "good.oztd", synthetic_int8(10, 20));
  {
    std::ofstream bad(dir / "bad.oztd", std::ios::binary);
    bad << "XXXXnot a tensor";
  }
  const std::vector<std::pair<std::string, std::filesystem::path>> files{
      {"conv1", dir / "good.oztd"}, {"conv2", dir / "bad.oztd"}};
  try {
    model_report(files);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadMagic);
    EXPECT_NE(std::string(e.what()).find("conv2"), std::string::npos);
  }
}

TEST(LayerFiles, SortedOztdOnly) {
  testing::TempDir dir("layers");
  save_tensor(dir / "b.oztd", synthetic_int8(4, 4));
  save_tensor(dir / "a.oztd", synthetic_int8(4, 4));
  std::ofstream(dir / "notes.txt") << "ignored";
  const auto files = layer_files_in(dir.path());
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].first, "a");
  EXPECT_EQ(files[1].first, "b");
}

TEST(Manifest, VerifiesExporterOutput) {
  testing::TempDir dir("manifest");
  TensorFile conv = synthetic_int8(24, 48);
  conv.dims = {2, 3, 2, 2};
  save_tensor(dir / "features.0.oztd", conv);
  save_tensor(dir / "classifier.oztd", synthetic_int8(10, 25));

  nlohmann::json j = {
      {"model_name", "MobileNetV2"},
      {"dtype_bits", 8},
      {"layers",
       {{{"layer_name", "features.0"}, {"file_name", "features.0.oztd"}, {"dims", {2, 3, 2, 2}},
         {"element_count", 24}, {"scale", 0.01}, {"zero_point", 0}},
        {{"layer_name", "classifier"}, {"file_name", "classifier.oztd"}, {"dims", {10}},
         {"element_count", 10}}}}};
  std::ofstream(dir / "manifest.json") << j.dump(2);

  const auto m = load_manifest(dir / "manifest.json");
  EXPECT_EQ(m.model_name, "MobileNetV2");
  const auto files = verify_manifest(m, dir.path());
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0].first, "features.0");

  j["layers"][1]["element_count"] = 11;
  std::ofstream(dir / "manifest.json") << j.dump(2);
  try {
    verify_manifest(load_manifest(dir / "manifest.json"), dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadManifest);
  }

  std::ofstream(dir / "manifest.json") << R"({"model_name": "x", "layers": []})";
  try {
    load_manifest(dir / "manifest.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadManifest);
  }
}

}  // namespace
}  // namespace ozmac
