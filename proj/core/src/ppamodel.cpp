// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ozmac/ppamodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ozmac/error.hpp"

namespace ozmac {
namespace detail {
extern const std::string_view kEmbeddedCalibrationJson;
}  // namespace detail

namespace {

constexpr double kFreqEpsilon = 1e-9;

bool same_freq(double a, double b) { return std::abs(a - b) < kFreqEpsilon; }

std::string freq_label(double ghz) { return fmt::format("{:g} GHz", ghz); }

PpaRecord record_from_json(const nlohmann::json& j) {
  PpaRecord r;
  r.unit = parse_mac_unit(j.at("unit").get<std::string>());
  r.weight_bits = j.at("weight_bits").get<int>();
  r.activation_bits = j.at("activation_bits").get<int>();
  r.freq_ghz = j.at("freq_ghz").get<double>();
  if (const auto& area = j.at("area_um2"); !area.is_null()) r.area_um2 = area.get<double>();
  r.power_mw = j.at("power_mw").get<double>();
  r.latency_ns = j.at("latency_ns").get<double>();
  r.energy_pj = j.at("energy_pj").get<double>();
  r.provenance = j.at("provenance").get<std::string>();
  return r;
}

void validate_record(const PpaRecord& r, std::size_t index) {
  auto fail = [index](std::string_view why) {
    throw Error(ErrorCode::BadCalibration,
                fmt::format("BadCalibration: record {}: {}", index, why));
  };
  if (!is_supported_width(r.weight_bits) || !is_supported_width(r.activation_bits)) {
    fail("widths must be 4, 8 or 16");
  }
  if (!(r.freq_ghz > 0.0)) fail("freq_ghz must be positive");
  if (!(r.latency_ns > 0.0)) fail("latency_ns must be positive");
  if (!(r.power_mw >= 0.0) || !(r.energy_pj >= 0.0)) fail("power and energy must be >= 0");
  if (r.area_um2 && !(*r.area_um2 >= 0.0)) fail("area_um2 must be >= 0");
}

}  // namespace

double PpaRecord::energy_consistency_error() const noexcept {
  return std::abs(energy_pj - power_mw * latency_ns) / energy_pj;
}

CalibrationTable::CalibrationTable(std::vector<PpaRecord> records)
    : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    validate_record(records_[i], i);
    for (std::size_t k = 0; k < i; ++k) {
      const auto& a = records_[k];
      const auto& b = records_[i];
      if (a.unit == b.unit && a.weight_bits == b.weight_bits &&
          a.activation_bits == b.activation_bits && same_freq(a.freq_ghz, b.freq_ghz)) {
        throw Error(ErrorCode::BadCalibration,
                    fmt::format("BadCalibration: records {} and {} describe the same design point",
                                k, i));
      }
    }
  }
}

const CalibrationTable& CalibrationTable::embedded() {
  static const CalibrationTable table = from_json(detail::kEmbeddedCalibrationJson);
  return table;
}

CalibrationTable CalibrationTable::from_json(std::string_view text) {
  std::vector<PpaRecord> records;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_array()) {
      throw Error(ErrorCode::BadCalibration, "BadCalibration: expected a JSON array");
    }
    for (const auto& item : j) records.push_back(record_from_json(item));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadCalibration, fmt::format("BadCalibration: {}", e.what()));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BadCalibration) throw;
    throw Error(ErrorCode::BadCalibration, fmt::format("BadCalibration: {}", e.what()));
  }
  return CalibrationTable(std::move(records));
}

CalibrationTable CalibrationTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string CalibrationTable::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records_) {
    nlohmann::ordered_json j;
    j["unit"] = to_string(r.unit);
    j["weight_bits"] = r.weight_bits;
    j["activation_bits"] = r.activation_bits;
    j["freq_ghz"] = r.freq_ghz;
    j["area_um2"] = r.area_um2 ? nlohmann::ordered_json(*r.area_um2) : nlohmann::ordered_json();
    j["power_mw"] = r.power_mw;
    j["latency_ns"] = r.latency_ns;
    j["energy_pj"] = r.energy_pj;
    j["provenance"] = r.provenance;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

const PpaRecord* CalibrationTable::find(MacUnit unit, int weight_bits, int activation_bits,
                                        double freq_ghz) const noexcept {
  for (const auto& r : records_) {
    if (r.unit == unit && r.weight_bits == weight_bits &&
        r.activation_bits == activation_bits && same_freq(r.freq_ghz, freq_ghz)) {
      return &r;
    }
  }
  return nullptr;
}

const PpaRecord& CalibrationTable::require(MacUnit unit, int weight_bits,
                                           int activation_bits, double freq_ghz) const {
  if (const auto* r = find(unit, weight_bits, activation_bits, freq_ghz)) return *r;
  throw Error(ErrorCode::MissingRecord,
              fmt::format("MissingRecord: no {} {}x{} record at {}", to_string(unit),
                          weight_bits, activation_bits, freq_label(freq_ghz)));
}

std::vector<PrecisionConfig> CalibrationTable::configs_at(double freq_ghz) const {
  std::vector<std::pair<int, int>> found;
  for (const auto& r : records_) {
    if (r.unit != MacUnit::BMac || !same_freq(r.freq_ghz, freq_ghz)) continue;
    if (find(MacUnit::OzMac, r.weight_bits, r.activation_bits, freq_ghz)) {
      found.emplace_back(r.weight_bits, r.activation_bits);
    }
  }
  std::sort(found.begin(), found.end());
  std::vector<PrecisionConfig> out;
  for (auto [w, a] : found) out.emplace_back(w, a);
  return out;
}

double energy_per_mac(double power_mw, double cycles, double period_ns) {
  if (power_mw < 0.0 || cycles < 0.0 || period_ns < 0.0) {
    throw Error(ErrorCode::NegativeInput,
                fmt::format("NegativeInput: energy_per_mac({}, {}, {})", power_mw, cycles,
                            period_ns));
  }
  return power_mw * cycles * period_ns;
}

double crossover_sparsity(double p_bmac_mw, double p_ozmac_mw, int bits) {
  if (!(p_ozmac_mw > 0.0) || bits <= 0) {
    throw Error(ErrorCode::NonPositivePower,
                fmt::format("NonPositivePower: ozmac power {} mW, {} bits", p_ozmac_mw, bits));
  }
  const double s = 1.0 - (p_bmac_mw / p_ozmac_mw) / bits;
  return std::clamp(s, 0.0, 1.0);
}

std::vector<double> sparsity_grid(double step) {
  if (!(step > 0.0) || step > 1.0) {
    throw Error(ErrorCode::OutOfRange, fmt::format("sparsity step {} not in (0, 1]", step));
  }
  const auto n = static_cast<int>(std::llround(1.0 / step));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) / n);
  return grid;
}

std::vector<EnergyPoint> energy_vs_sparsity(const CalibrationTable& calib,
                                            const PrecisionConfig& cfg, double freq_ghz,
                                            std::span<const double> grid) {
  const auto* b = calib.find(MacUnit::BMac, cfg.weight_bits(), cfg.activation_bits(), freq_ghz);
  const auto* o = calib.find(MacUnit::OzMac, cfg.weight_bits(), cfg.activation_bits(), freq_ghz);
  if (!b || !o) {
    throw Error(ErrorCode::UnknownConfig,
                fmt::format("UnknownConfig: no calibration for {} at {}", cfg.label(),
                            freq_label(freq_ghz)));
  }
  const double period = 1.0 / freq_ghz;
  const double bits = cfg.encoded_bits();
  const double e_bmac = energy_per_mac(b->power_mw, 1.0, period);
  std::vector<EnergyPoint> out;
  out.reserve(grid.size());
  for (double s : grid) {
    if (s < 0.0 || s > 1.0) {
      throw Error(ErrorCode::OutOfRange, fmt::format("sparsity {} outside [0, 1]", s));
    }
    out.push_back({s, energy_per_mac(o->power_mw, bits * (1.0 - s), period), e_bmac});
  }
  return out;
}

PpaRecord scale_frequency(const PpaRecord& record, double new_freq_ghz) {
  if (!(new_freq_ghz > 0.0)) {
    throw Error(ErrorCode::NonPositiveFrequency,
                fmt::format("NonPositiveFrequency: {} GHz", new_freq_ghz));
  }
  if (same_freq(new_freq_ghz, record.freq_ghz)) return record;
  const double ratio = new_freq_ghz / record.freq_ghz;
  PpaRecord out = record;
  out.freq_ghz = new_freq_ghz;
  out.power_mw = record.power_mw * ratio;
  out.latency_ns = record.latency_ns / ratio;
  out.provenance = fmt::format("{}; re-clocked {} -> {}", record.provenance,
                               freq_label(record.freq_ghz), freq_label(new_freq_ghz));
  return out;
}

double iso_latency_frequency(double avg_cycles, double target_latency_ns) {
  if (!(avg_cycles > 0.0) || !(target_latency_ns > 0.0)) {
    throw Error(ErrorCode::NonPositiveInput,
                fmt::format("NonPositiveInput: avg_cycles {}, target latency {} ns", avg_cycles,
                            target_latency_ns));
  }
  return avg_cycles / target_latency_ns;
}

double improvement_pct(double baseline, double candidate) {
  if (!(baseline > 0.0)) {
    throw Error(ErrorCode::NonPositiveBaseline,
                fmt::format("NonPositiveBaseline: baseline {}", baseline));
  }
  return 100.0 * (baseline - candidate) / baseline;
}

PpaRecord with_avg_cycles(const PpaRecord& record, double avg_cycles, std::string_view source) {
  if (avg_cycles < 0.0) {
    throw Error(ErrorCode::NegativeInput, fmt::format("NegativeInput: avg_cycles {}", avg_cycles));
  }
  PpaRecord out = record;
  out.latency_ns = avg_cycles * record.period_ns();
  out.energy_pj = energy_per_mac(record.power_mw, avg_cycles, record.period_ns());
  out.provenance = fmt::format("{}; avg cycles {:.3f} from {}", record.provenance, avg_cycles,
                               source);
  return out;
}

PpaComparison compare(const PpaRecord& bmac, const PpaRecord& ozmac) {
  PpaComparison c;
  c.config = PrecisionConfig(bmac.weight_bits, bmac.activation_bits);
  c.bmac = bmac;
  c.ozmac = ozmac;
  if (bmac.area_um2 && ozmac.area_um2) {
    c.area_improvement_pct = improvement_pct(*bmac.area_um2, *ozmac.area_um2);
  }
  c.power_improvement_pct = improvement_pct(bmac.power_mw, ozmac.power_mw);
  c.energy_improvement_pct = improvement_pct(bmac.energy_pj, ozmac.energy_pj);
  c.latency_ratio = ozmac.latency_ns / bmac.latency_ns;
  return c;
}

PpaComparison compare_at(const CalibrationTable& calib, const PrecisionConfig& cfg,
                         double freq_ghz, std::optional<double> scale_from_ghz) {
  const int w = cfg.weight_bits();
  const int a = cfg.activation_bits();
  const auto* b = calib.find(MacUnit::BMac, w, a, freq_ghz);
  const auto* o = calib.find(MacUnit::OzMac, w, a, freq_ghz);
  if (b && o) return compare(*b, *o);
  if (scale_from_ghz) {
    return compare(scale_frequency(calib.require(MacUnit::BMac, w, a, *scale_from_ghz), freq_ghz),
                   scale_frequency(calib.require(MacUnit::OzMac, w, a, *scale_from_ghz), freq_ghz));
  }
  return compare(calib.require(MacUnit::BMac, w, a, freq_ghz),
                 calib.require(MacUnit::OzMac, w, a, freq_ghz));
}

std::vector<PpaComparison> precision_sweep(const CalibrationTable& calib, double freq_ghz) {
  const auto configs = calib.configs_at(freq_ghz);
  if (configs.empty()) {
    throw Error(ErrorCode::MissingRecord,
                fmt::format("MissingRecord: no complete bMAC/OzMAC pair at {}",
                            freq_label(freq_ghz)));
  }
  std::vector<PpaComparison> out;
  out.reserve(configs.size());
  for (const auto& cfg : configs) out.push_back(compare_at(calib, cfg, freq_ghz));
  return out;
}

IsoLatencyRow iso_latency(const CalibrationTable& calib, const PrecisionConfig& cfg,
                          double base_freq_ghz) {
  const auto& b = calib.require(MacUnit::BMac, cfg.weight_bits(), cfg.activation_bits(),
                                base_freq_ghz);
  const auto& o = calib.require(MacUnit::OzMac, cfg.weight_bits(), cfg.activation_bits(),
                                base_freq_ghz);
  IsoLatencyRow row;
  row.config = cfg;
  row.bmac = b;
  row.ozmac = scale_frequency(o, iso_latency_frequency(o.avg_cycles(), b.latency_ns));
  row.power_improvement_pct = improvement_pct(b.power_mw, row.ozmac.power_mw);
  row.energy_improvement_pct = improvement_pct(b.energy_pj, row.ozmac.energy_pj);
  return row;
}

}  // namespace ozmac
