// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ozmac/profiler.hpp"

#include <algorithm>
#include <bit>
#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ozmac/error.hpp"

namespace ozmac {
namespace {

std::uint32_t magnitude(std::int64_t v) {
  return static_cast<std::uint32_t>(v < 0 ? -v : v);
}

void finish(SparsityReport& r) {
  r.count = 0;
  r.total_ones = 0;
  for (std::size_t k = 0; k < r.histogram.size(); ++k) {
    r.count += r.histogram[k];
    r.total_ones += k * r.histogram[k];
  }
  if (r.count == 0) throw Error(ErrorCode::EmptyInput, fmt::format("EmptyInput: '{}' has no values", r.name));
  const double total_bits = static_cast<double>(r.count) * r.dtype_bits;
  r.avg_ones = static_cast<double>(r.total_ones) / static_cast<double>(r.count);
  r.bit_sparsity_pct = 100.0 * (total_bits - static_cast<double>(r.total_ones)) / total_bits;
}

}  // namespace

SparsityReport report_from_histogram(std::string name, int dtype_bits,
                                     std::vector<std::uint64_t> histogram) {
  if (!is_supported_width(dtype_bits)) {
    throw Error(ErrorCode::UnsupportedWidth, fmt::format("dtype_bits {} unsupported", dtype_bits));
  }
  // A magnitude of 2^(bits-1) has one set bit, so bits + 1 buckets suffice.
  if (histogram.size() != static_cast<std::size_t>(dtype_bits) + 1) {
    throw Error(ErrorCode::DimMismatch,
                fmt::format("histogram has {} buckets, expected {}", histogram.size(),
                            dtype_bits + 1));
  }
  SparsityReport r;
  r.name = std::move(name);
  r.dtype_bits = dtype_bits;
  r.histogram = std::move(histogram);
  finish(r);
  return r;
}

SparsityReport bit_sparsity(std::span<const TensorFile> tensors, std::string name) {
  if (tensors.empty()) throw Error(ErrorCode::EmptyInput, "EmptyInput: no tensors");
  const int bits = tensors.front().dtype_bits;
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(bits) + 1, 0);
  for (const auto& t : tensors) {
    if (t.dtype_bits != bits) {
      throw Error(ErrorCode::MixedDtype,
                  fmt::format("MixedDtype: {}-bit and {}-bit tensors in '{}'", bits,
                              t.dtype_bits, name));
    }
    for (auto v : t.values) ++hist[static_cast<std::size_t>(std::popcount(magnitude(v)))];
  }
  return report_from_histogram(std::move(name), bits, std::move(hist));
}

ModelReport model_report(std::span<const SparsityReport> layers) {
  if (layers.empty()) throw Error(ErrorCode::EmptyInput, "EmptyInput: no layers");
  const int bits = layers.front().dtype_bits;
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(bits) + 1, 0);
  for (const auto& l : layers) {
    if (l.dtype_bits != bits) {
      throw Error(ErrorCode::MixedDtype,
                  fmt::format("MixedDtype: layer '{}' is {}-bit, expected {}-bit", l.name,
                              l.dtype_bits, bits));
    }
    for (std::size_t k = 0; k < hist.size(); ++k) hist[k] += l.histogram[k];
  }
  ModelReport out;
  out.layers.assign(layers.begin(), layers.end());
  out.aggregate = report_from_histogram(kAggregateName, bits, std::move(hist));
  return out;
}

ModelReport model_report(
    std::span<const std::pair<std::string, std::filesystem::path>> layer_files) {
  if (layer_files.empty()) throw Error(ErrorCode::EmptyInput, "EmptyInput: no layer files");
  std::vector<SparsityReport> layers;
  layers.reserve(layer_files.size());
  for (const auto& [name, path] : layer_files) {
    try {
      const TensorFile t = load_tensor(path);
      layers.push_back(bit_sparsity(std::span(&t, 1), name));
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("layer '{}': {}", name, e.what()));
    }
  }
  return model_report(layers);
}

std::vector<std::pair<std::string, std::filesystem::path>> layer_files_in(
    const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::Io, fmt::format("'{}' is not a directory", dir.string()));
  }
  std::vector<std::pair<std::string, std::filesystem::path>> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".oztd") {
      out.emplace_back(entry.path().stem().string(), entry.path());
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second.filename() < b.second.filename();
  });
  return out;
}

ExportManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()));
  ExportManifest m;
  try {
    const auto j = nlohmann::json::parse(in);
    m.model_name = j.at("model_name").get<std::string>();
    m.dtype_bits = j.at("dtype_bits").get<int>();
    for (const auto& l : j.at("layers")) {
      ManifestLayer layer;
      layer.layer_name = l.at("layer_name").get<std::string>();
      layer.file_name = l.at("file_name").get<std::string>();
      layer.dims = l.at("dims").get<std::vector<std::uint64_t>>();
      layer.element_count = l.at("element_count").get<std::uint64_t>();
      m.layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadManifest,
                fmt::format("BadManifest: '{}': {}", path.string(), e.what()));
  }
  if (m.dtype_bits != 8) {
    throw Error(ErrorCode::BadManifest,
                fmt::format("BadManifest: dtype_bits {} (exports are 8-bit)", m.dtype_bits));
  }
  if (m.layers.empty()) throw Error(ErrorCode::BadManifest, "BadManifest: no layers");
  return m;
}

std::vector<std::pair<std::string, std::filesystem::path>> verify_manifest(
    const ExportManifest& manifest, const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::filesystem::path>> out;
  for (const auto& layer : manifest.layers) {
    const auto path = dir / layer.file_name;
    TensorFile t;
    try {
      t = load_tensor(path);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("layer '{}': {}", layer.layer_name, e.what()));
    }
    if (t.dims != layer.dims || t.element_count() != layer.element_count ||
        t.dtype_bits != manifest.dtype_bits) {
      throw Error(ErrorCode::BadManifest,
                  fmt::format("BadManifest: '{}' does not match its manifest entry",
                              layer.file_name));
    }
    out.emplace_back(layer.layer_name, path);
  }
  return out;
}

}  // namespace ozmac
