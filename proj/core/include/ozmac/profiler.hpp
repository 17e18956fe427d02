// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ozmac/oztd.hpp"

namespace ozmac {

/// Bit-sparsity statistics over a set of weight values. Popcounts are taken
/// on |value|, the same quantity OzMAC spends cycles on.
struct SparsityReport {
  std::string name;
  int dtype_bits = 8;
  std::uint64_t count = 0;
  std::uint64_t total_ones = 0;
  double avg_ones = 0.0;
  double bit_sparsity_pct = 0.0;
  std::vector<std::uint64_t> histogram;  // index k: values with k set bits
};

/// Builds a report from a popcount histogram (histogram.size() == bits + 1).
SparsityReport report_from_histogram(std::string name, int dtype_bits,
                                     std::vector<std::uint64_t> histogram);

/// Report over the union of all values. Throws EmptyInput, MixedDtype.
SparsityReport bit_sparsity(std::span<const TensorFile> tensors, std::string name);

struct ModelReport {
  std::vector<SparsityReport> layers;
  SparsityReport aggregate;  // element-count weighted
};

inline constexpr const char* kAggregateName = "aggregate";

/// Per-layer reports plus the count-weighted aggregate row.
ModelReport model_report(std::span<const SparsityReport> layers);

/// Loads each (name, path) and reports it. Load errors are rethrown with
/// the layer name prepended to the message.
ModelReport model_report(
    std::span<const std::pair<std::string, std::filesystem::path>> layer_files);

/// `*.oztd` files in `dir` sorted by filename, named by their stem.
std::vector<std::pair<std::string, std::filesystem::path>> layer_files_in(
    const std::filesystem::path& dir);

/// Export manifest written next to the OZTD files by the weight exporter.
struct ManifestLayer {
  std::string layer_name;
  std::string file_name;
  std::vector<std::uint64_t> dims;
  std::uint64_t element_count = 0;
};

struct ExportManifest {
  std::string model_name;
  int dtype_bits = 8;
  std::vector<ManifestLayer> layers;
};

/// Reads `manifest.json`. Throws Error{BadManifest} on schema violations.
ExportManifest load_manifest(const std::filesystem::path& path);

/// Checks that every listed file exists, parses, and matches its declared
/// dims, element count and dtype. Returns (layer_name, path) pairs in
/// manifest order. Throws Error{BadManifest} or the load error.
std::vector<std::pair<std::string, std::filesystem::path>> verify_manifest(
    const ExportManifest& manifest, const std::filesystem::path& dir);

}  // namespace ozmac
