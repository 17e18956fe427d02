// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ozmac/encoder.hpp"
#include "ozmac/error.hpp"
#include "ozmac/macsim.hpp"
#include "ozmac/oztd.hpp"
#include "ozmac/ppamodel.hpp"
#include "ozmac/profiler.hpp"
#include "table.hpp"

namespace ozmac::cli {
namespace {

// Fixed decimal places per quantity.
constexpr int kAreaDp = 3;
constexpr int kPowerDp = 3;
constexpr int kLatencyDp = 3;
constexpr int kEnergyDp = 3;
constexpr int kFreqDp = 3;
constexpr int kCyclesDp = 3;
constexpr int kImprovementDp = 1;
constexpr int kAvgOnesDp = 3;
constexpr int kSparsityPctDp = 2;
constexpr int kCurveEnergyDp = 4;

struct GlobalOptions {
  std::string format;
  std::string out_path;
  std::string calib_path;
};

struct EncodeOptions {
  int bits = 8;
  std::int64_t value = 0;
  bool is_unsigned = false;
};

struct SimulateOptions {
  std::string weights;
  std::string activations;
  std::string unit = "ozmac";
  std::string trace_path;
};

struct ProfileOptions {
  std::vector<std::string> inputs;
  std::string manifest;
};

struct PpaTableOptions {
  std::string config;
  std::optional<double> freq;
  std::optional<double> scale_from;
  std::optional<double> avg_cycles;
  std::string profile_dir;
};

struct PpaCurveOptions {
  std::string config = "8x8";
  double freq = 0.5;
  double step = 0.01;
};

struct PpaIsoOptions {
  std::string config;
  double base_freq = 0.5;
};

Cell fixed(double v, int dp) { return Fixed{v, dp}; }
Cell opt_fixed(const std::optional<double>& v, int dp) {
  return v ? Cell{Fixed{*v, dp}} : Cell{std::monostate{}};
}
Cell integer(std::int64_t v) { return v; }
Cell text(std::string s) { return s; }

std::string binary_digits(std::uint32_t mask, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if (mask & (std::uint32_t{1} << i)) s[static_cast<std::size_t>(width - 1 - i)] = '1';
  }
  return s;
}

std::vector<double> calibrated_frequencies(const CalibrationTable& calib) {
  std::vector<double> freqs;
  for (const auto& r : calib.records()) {
    const bool seen = std::any_of(freqs.begin(), freqs.end(),
                                  [&](double f) { return std::abs(f - r.freq_ghz) < 1e-9; });
    if (!seen && !calib.configs_at(r.freq_ghz).empty()) freqs.push_back(r.freq_ghz);
  }
  std::sort(freqs.begin(), freqs.end());
  return freqs;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err, bool out_is_terminal)
      : out_(out), err_(err), out_is_terminal_(out_is_terminal) {}

  int run(std::span<const std::string> args);

 private:
  Format output_format() const;
  std::ostream& sink();
  void emit(const Table& t);
  const CalibrationTable& calibration();

  void cmd_encode();
  void cmd_simulate();
  void cmd_profile();
  void cmd_ppa_table();
  void cmd_ppa_curve();
  void cmd_ppa_iso();

  std::ostream& out_;
  std::ostream& err_;
  bool out_is_terminal_;
  std::optional<std::ofstream> file_out_;
  std::optional<CalibrationTable> calib_;

  GlobalOptions global_;
  EncodeOptions encode_;
  SimulateOptions simulate_;
  ProfileOptions profile_;
  PpaTableOptions ppa_table_;
  PpaCurveOptions ppa_curve_;
  PpaIsoOptions ppa_iso_;
};

Format Runner::output_format() const {
  if (global_.format == "csv") return Format::Csv;
  if (global_.format == "json") return Format::Json;
  if (global_.format == "table") return Format::Text;
  return out_is_terminal_ && global_.out_path.empty() ? Format::Text : Format::Csv;
}

std::ostream& Runner::sink() {
  if (global_.out_path.empty()) return out_;
  if (!file_out_) {
    file_out_.emplace(global_.out_path, std::ios::binary | std::ios::trunc);
    if (!*file_out_) {
      throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", global_.out_path));
    }
  }
  return *file_out_;
}

void Runner::emit(const Table& t) { t.write(sink(), output_format()); }

const CalibrationTable& Runner::calibration() {
  if (!calib_) {
    calib_ = global_.calib_path.empty() ? CalibrationTable::embedded()
                                        : CalibrationTable::load(global_.calib_path);
  }
  return *calib_;
}

int Runner::run(std::span<const std::string> args) {
  CLI::App app{"OzMAC zero-skipping MAC simulator, bit-sparsity profiler and PPA model",
               "ozmac"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", global_.format, "Output format (default: table on a terminal, csv otherwise)")
      ->check(CLI::IsMember({"csv", "json", "table"}));
  app.add_option("--out", global_.out_path, "Write output to PATH instead of stdout");
  app.add_option("--calib", global_.calib_path,
                 "Calibration JSON (default: embedded TSMC N5 calibration)");

  auto* encode = app.add_subcommand("encode", "Oz-encode one operand");
  encode->add_option("--bits", encode_.bits, "Operand width (4, 8, 16)")->required();
  encode->add_option("--value", encode_.value, "Operand value")->required();
  encode->add_flag("--unsigned", encode_.is_unsigned, "Interpret the value as unsigned");
  encode->callback([this] { cmd_encode(); });

  auto* simulate = app.add_subcommand("simulate", "Dot product of two OZTD tensors on one MAC unit");
  simulate->add_option("--weights", simulate_.weights, "Weights OZTD file")->required();
  simulate->add_option("--activations", simulate_.activations, "Activations OZTD file")->required();
  simulate->add_option("--unit", simulate_.unit, "MAC unit")
      ->check(CLI::IsMember({"ozmac", "bmac"}));
  simulate->add_option("--trace", simulate_.trace_path, "Write a JSON-lines event trace to PATH");
  simulate->callback([this] { cmd_simulate(); });

  auto* profile = app.add_subcommand("profile", "Bit-sparsity report over OZTD weight files");
  profile->add_option("inputs", profile_.inputs, "OZTD files and/or directories of *.oztd");
  profile->add_option("--manifest", profile_.manifest, "Exporter manifest.json to verify and profile");
  profile->callback([this] { cmd_profile(); });

  auto* ppa = app.add_subcommand("ppa", "Analytical power/performance/area/energy model");
  ppa->require_subcommand(1);

  auto* table = ppa->add_subcommand("table", "bMAC vs OzMAC comparison rows");
  table->add_option("--config", ppa_table_.config, "Precision WxA (default: all calibrated)");
  table->add_option("--freq", ppa_table_.freq, "Clock in GHz (default: every calibrated frequency)");
  table->add_option("--scale-from", ppa_table_.scale_from,
                    "Re-clock from this calibrated frequency when --freq has no record");
  table->add_option("--avg-cycles", ppa_table_.avg_cycles, "Override OzMAC mean cycles per MAC");
  table->add_option("--profile", ppa_table_.profile_dir,
                    "Take OzMAC mean cycles from the bit-sparsity profile of a directory");
  table->callback([this] { cmd_ppa_table(); });

  auto* curve = ppa->add_subcommand("curve", "Energy per MAC vs bit sparsity");
  curve->add_option("--config", ppa_curve_.config, "Precision WxA");
  curve->add_option("--freq", ppa_curve_.freq, "Clock in GHz");
  curve->add_option("--step", ppa_curve_.step, "Sparsity grid step");
  curve->callback([this] { cmd_ppa_curve(); });

  auto* iso = ppa->add_subcommand("iso", "OzMAC re-clocked to bMAC latency");
  iso->add_option("--config", ppa_iso_.config, "Precision WxA (default: all with <=8-bit encoding)");
  iso->add_option("--base-freq", ppa_iso_.base_freq, "bMAC clock in GHz");
  iso->callback([this] { cmd_ppa_iso(); });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_, err_);
    return code == 0 ? kExitOk : kExitInputError;
  } catch (const Error& e) {
    err_ << "error: " << e.what() << '\n';
    const bool missing = e.code() == ErrorCode::MissingRecord || e.code() == ErrorCode::UnknownConfig;
    return missing ? kExitMissingCalibration : kExitInputError;
  }
  if (file_out_) file_out_->flush();
  return kExitOk;
}

void Runner::cmd_encode() {
  const auto sign = encode_.is_unsigned ? Signedness::Unsigned : Signedness::TwosComplement;
  const auto op = validate_operand(encode_.value, encode_.bits, sign);
  const auto stream = oz_encode(op);

  if (output_format() == Format::Text) {
    std::string terms;
    for (const auto& t : stream.terms) {
      if (!terms.empty()) terms += ',';
      terms += binary_digits(t.mask, stream.source_bits);
    }
    auto line = fmt::format("({} cycles{})", stream.terms.size(),
                            stream.negative ? ", negative" : "");
    if (!terms.empty()) line = terms + " " + line;
    sink() << line << '\n';
    return;
  }
  Table t(encode_columns());
  for (std::size_t i = 0; i < stream.terms.size(); ++i) {
    const auto& term = stream.terms[i];
    t.add_row({integer(static_cast<std::int64_t>(i)), integer(term.position),
               text(binary_digits(term.mask, stream.source_bits)),
               text(stream.negative ? "-" : "+")});
  }
  emit(t);
}

void Runner::cmd_simulate() {
  const TensorFile w = load_tensor(simulate_.weights);
  const TensorFile a = load_tensor(simulate_.activations);
  if (w.signedness != a.signedness) {
    throw Error(ErrorCode::ConfigMismatch, "weights and activations differ in signedness");
  }
  const PrecisionConfig cfg(w.dtype_bits, a.dtype_bits, w.signedness);
  const auto weights = w.operands(Role::Weight);
  const auto activations = a.operands(Role::Activation);
  const MacUnit unit = parse_mac_unit(simulate_.unit);

  std::vector<MacTrace> traces;
  const auto res = dot_product(weights, activations, cfg, unit,
                               simulate_.trace_path.empty() ? nullptr : &traces);
  if (!simulate_.trace_path.empty()) {
    std::ofstream trace_out(simulate_.trace_path, std::ios::binary | std::ios::trunc);
    if (!trace_out) {
      throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", simulate_.trace_path));
    }
    std::int64_t offset = 0;
    for (const auto& t : traces) {
      write_trace_jsonl(trace_out, t, offset);
      offset += t.cycles;
    }
  }

  Table t(simulate_columns());
  t.add_row({text(std::string(to_string(unit))), text(cfg.label()),
             integer(static_cast<std::int64_t>(weights.size())), integer(res.result),
             integer(res.total_cycles),
             fixed(static_cast<double>(res.total_cycles) / static_cast<double>(weights.size()),
                   kCyclesDp)});
  emit(t);
}

void Runner::cmd_profile() {
  std::vector<std::pair<std::string, std::filesystem::path>> files;
  if (!profile_.manifest.empty()) {
    const std::filesystem::path manifest_path(profile_.manifest);
    const auto manifest = load_manifest(manifest_path);
    files = verify_manifest(manifest, manifest_path.parent_path());
  }
  for (const auto& input : profile_.inputs) {
    const std::filesystem::path p(input);
    if (std::filesystem::is_directory(p)) {
      auto in_dir = layer_files_in(p);
      files.insert(files.end(), in_dir.begin(), in_dir.end());
    } else {
      files.emplace_back(p.stem().string(), p);
    }
  }
  const auto report = model_report(files);

  Table t(profile_columns());
  auto add = [&t](const SparsityReport& r) {
    t.add_row({text(r.name), integer(static_cast<std::int64_t>(r.count)),
               fixed(r.avg_ones, kAvgOnesDp), fixed(r.bit_sparsity_pct, kSparsityPctDp)});
  };
  for (const auto& layer : report.layers) add(layer);
  add(report.aggregate);
  emit(t);
}

void Runner::cmd_ppa_table() {
  const auto& calib = calibration();
  std::optional<double> cycles = ppa_table_.avg_cycles;
  std::string cycles_source = "--avg-cycles";
  if (!ppa_table_.profile_dir.empty()) {
    const auto files = layer_files_in(ppa_table_.profile_dir);
    cycles = model_report(files).aggregate.avg_ones;
    cycles_source = fmt::format("bit-sparsity profile of {}", ppa_table_.profile_dir);
  }

  std::vector<PpaComparison> rows;
  const std::vector<double> freqs =
      ppa_table_.freq ? std::vector<double>{*ppa_table_.freq} : calibrated_frequencies(calib);
  for (double f : freqs) {
    if (!ppa_table_.config.empty()) {
      rows.push_back(compare_at(calib, PrecisionConfig::parse(ppa_table_.config), f,
                                ppa_table_.scale_from));
      continue;
    }
    if (ppa_table_.scale_from && calib.configs_at(f).empty()) {
      for (const auto& cfg : calib.configs_at(*ppa_table_.scale_from)) {
        rows.push_back(compare_at(calib, cfg, f, ppa_table_.scale_from));
      }
    } else {
      auto sweep = precision_sweep(calib, f);
      rows.insert(rows.end(), sweep.begin(), sweep.end());
    }
  }
  if (cycles) {
    for (auto& row : rows) row = compare(row.bmac, with_avg_cycles(row.ozmac, *cycles, cycles_source));
  }

  Table t(ppa_table_columns());
  for (const auto& c : rows) {
    t.add_row({text(c.config.label()), integer(c.bits_product()), fixed(c.bmac.freq_ghz, kFreqDp),
               opt_fixed(c.bmac.area_um2, kAreaDp), opt_fixed(c.ozmac.area_um2, kAreaDp),
               opt_fixed(c.area_improvement_pct, kImprovementDp),
               fixed(c.bmac.power_mw, kPowerDp), fixed(c.ozmac.power_mw, kPowerDp),
               fixed(c.power_improvement_pct, kImprovementDp),
               fixed(c.bmac.latency_ns, kLatencyDp), fixed(c.ozmac.latency_ns, kLatencyDp),
               fixed(c.ozmac.avg_cycles(), kCyclesDp),
               fixed(c.bmac.energy_pj, kEnergyDp), fixed(c.ozmac.energy_pj, kEnergyDp),
               fixed(c.energy_improvement_pct, kImprovementDp)});
  }
  emit(t);
}

void Runner::cmd_ppa_curve() {
  const auto& calib = calibration();
  const auto cfg = PrecisionConfig::parse(ppa_curve_.config);
  const auto grid = sparsity_grid(ppa_curve_.step);
  const auto points = energy_vs_sparsity(calib, cfg, ppa_curve_.freq, grid);
  const double cross = crossover_sparsity(
      calib.require(MacUnit::BMac, cfg.weight_bits(), cfg.activation_bits(), ppa_curve_.freq).power_mw,
      calib.require(MacUnit::OzMac, cfg.weight_bits(), cfg.activation_bits(), ppa_curve_.freq).power_mw,
      cfg.encoded_bits());

  std::size_t nearest = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (std::abs(points[i].sparsity - cross) < std::abs(points[nearest].sparsity - cross)) nearest = i;
  }
  const int sparsity_dp =
      std::max(2, static_cast<int>(std::ceil(-std::log10(ppa_curve_.step) - 1e-9)));

  Table t(ppa_curve_columns());
  for (std::size_t i = 0; i < points.size(); ++i) {
    t.add_row({fixed(points[i].sparsity, sparsity_dp), fixed(points[i].e_ozmac_pj, kCurveEnergyDp),
               fixed(points[i].e_bmac_pj, kCurveEnergyDp), integer(i == nearest ? 1 : 0)});
  }
  emit(t);
}

void Runner::cmd_ppa_iso() {
  const auto& calib = calibration();
  std::vector<PrecisionConfig> configs;
  if (!ppa_iso_.config.empty()) {
    configs.push_back(PrecisionConfig::parse(ppa_iso_.config));
  } else {
    for (const auto& cfg : calib.configs_at(ppa_iso_.base_freq)) {
      if (cfg.encoded_bits() <= 8) configs.push_back(cfg);
    }
    if (configs.empty()) {
      throw Error(ErrorCode::MissingRecord,
                  fmt::format("MissingRecord: no calibrated pairs at {} GHz", ppa_iso_.base_freq));
    }
  }

  Table t(ppa_iso_columns());
  for (const auto& cfg : configs) {
    const auto row = iso_latency(calib, cfg, ppa_iso_.base_freq);
    t.add_row({text(cfg.label()), fixed(row.bmac.freq_ghz, kFreqDp), fixed(row.bmac.power_mw, kPowerDp),
               fixed(row.bmac.latency_ns, kLatencyDp), fixed(row.bmac.energy_pj, kEnergyDp),
               fixed(row.ozmac.freq_ghz, kFreqDp), fixed(row.ozmac.avg_cycles(), kCyclesDp),
               fixed(row.ozmac.power_mw, kPowerDp), fixed(row.ozmac.latency_ns, kLatencyDp),
               fixed(row.ozmac.energy_pj, kEnergyDp),
               fixed(row.power_improvement_pct, kImprovementDp),
               fixed(row.energy_improvement_pct, kImprovementDp)});
  }
  emit(t);
}

}  // namespace

const std::vector<std::string>& encode_columns() {
  static const std::vector<std::string> c{"cycle", "position", "mask", "sign"};
  return c;
}

const std::vector<std::string>& simulate_columns() {
  static const std::vector<std::string> c{"unit", "config", "pairs", "result", "total_cycles",
                                          "avg_cycles_per_mac"};
  return c;
}

const std::vector<std::string>& profile_columns() {
  static const std::vector<std::string> c{"name", "count", "avg_ones", "sparsity_pct"};
  return c;
}

const std::vector<std::string>& ppa_table_columns() {
  static const std::vector<std::string> c{
      "config",          "bits_product",     "freq_ghz",         "bmac_area_um2",
      "ozmac_area_um2",  "area_impr_pct",    "bmac_power_mw",    "ozmac_power_mw",
      "power_impr_pct",  "bmac_latency_ns",  "ozmac_latency_ns", "ozmac_avg_cycles",
      "bmac_energy_pj",  "ozmac_energy_pj",  "energy_impr_pct"};
  return c;
}

const std::vector<std::string>& ppa_curve_columns() {
  static const std::vector<std::string> c{"sparsity", "e_ozmac_pj", "e_bmac_pj", "crossover"};
  return c;
}

const std::vector<std::string>& ppa_iso_columns() {
  static const std::vector<std::string> c{
      "config",          "bmac_freq_ghz",   "bmac_power_mw",    "bmac_latency_ns",
      "bmac_energy_pj",  "ozmac_freq_ghz",  "ozmac_avg_cycles", "ozmac_power_mw",
      "ozmac_latency_ns", "ozmac_energy_pj", "power_impr_pct",  "energy_impr_pct"};
  return c;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err,
        bool out_is_terminal) {
  Runner runner(out, err, out_is_terminal);
  return runner.run(args);
}

}  // namespace ozmac::cli
