// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ozmac/macsim.hpp"

#include <bit>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ozmac/error.hpp"

namespace ozmac {
namespace {

void check_operand(const Operand& op, Role role, const PrecisionConfig& cfg) {
  const int want = cfg.bits_of(role);
  if (op.bits() != want || op.signedness() != cfg.signedness()) {
    throw Error(ErrorCode::ConfigMismatch,
                fmt::format("{} operand is {}-bit {}, config {} expects {}-bit {}",
                            to_string(role), op.bits(), to_string(op.signedness()),
                            cfg.label(), want, to_string(cfg.signedness())));
  }
}

}  // namespace

OzMacUnit::OzMacUnit(PrecisionConfig cfg, AccumulatorState acc)
    : cfg_(cfg), acc_(acc) {}

void OzMacUnit::load(const Operand& weight, const Operand& activation) {
  check_operand(weight, Role::Weight, cfg_);
  check_operand(activation, Role::Activation, cfg_);
  const bool encode_weight = cfg_.encoded_side() == Role::Weight;
  const Operand& encoded = encode_weight ? weight : activation;
  const Operand& shifted = encode_weight ? activation : weight;
  encoder_.load(encoded);
  shifted_operand_ = shifted.value();
}

std::optional<MacEvent> OzMacUnit::tick() {
  const auto term = encoder_.step();
  if (!term) return std::nullopt;
  // One-hot shifter: the mask selects a left shift of `position`.
  std::int64_t addend = shifted_operand_ * static_cast<std::int64_t>(term->mask);
  if (encoder_.negative()) addend = -addend;
  acc_ = acc_.add(addend);
  return MacEvent{cycles_++, term->position, addend, acc_.value()};
}

MacTrace ozmac_compute(const Operand& weight, const Operand& activation,
                       const AccumulatorState& acc_in, const PrecisionConfig& cfg) {
  OzMacUnit unit(cfg, acc_in);
  unit.load(weight, activation);
  MacTrace trace;
  trace.config = cfg;
  trace.events.reserve(static_cast<std::size_t>(cfg.encoded_bits()));
  while (unit.busy()) trace.events.push_back(*unit.tick());
  trace.cycles = unit.cycles();
  trace.result = unit.accumulator().value();
  return trace;
}

MacTrace bmac_compute(const Operand& weight, const Operand& activation,
                      const AccumulatorState& acc_in, const PrecisionConfig& cfg) {
  check_operand(weight, Role::Weight, cfg);
  check_operand(activation, Role::Activation, cfg);
  const std::int64_t product = weight.value() * activation.value();
  const AccumulatorState acc = acc_in.add(product);
  MacTrace trace;
  trace.config = cfg;
  trace.cycles = 1;
  trace.result = acc.value();
  trace.events.push_back({0, -1, product, acc.value()});
  return trace;
}

DotProductResult dot_product(std::span<const Operand> weights,
                             std::span<const Operand> activations,
                             const PrecisionConfig& cfg, MacUnit unit,
                             std::vector<MacTrace>* traces) {
  if (weights.size() != activations.size()) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("LengthMismatch: {} weights vs {} activations",
                            weights.size(), activations.size()));
  }
  if (weights.empty()) throw Error(ErrorCode::EmptyInput, "EmptyInput: empty dot product");

  auto acc = AccumulatorState::zero(cfg);
  DotProductResult out;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    MacTrace t = unit == MacUnit::OzMac ? ozmac_compute(weights[i], activations[i], acc, cfg)
                                        : bmac_compute(weights[i], activations[i], acc, cfg);
    acc = AccumulatorState(t.result, acc.width());
    out.total_cycles += t.cycles;
    if (traces) traces->push_back(std::move(t));
  }
  out.result = acc.value();
  return out;
}

double average_cycles(std::span<const Operand> weights) {
  if (weights.empty()) throw Error(ErrorCode::EmptyInput, "EmptyInput: no weights");
  std::uint64_t total = 0;
  for (const auto& w : weights) total += static_cast<std::uint64_t>(cycle_count(w));
  return static_cast<double>(total) / static_cast<double>(weights.size());
}

void write_trace_jsonl(std::ostream& out, const MacTrace& trace, std::int64_t cycle_offset) {
  for (const auto& e : trace.events) {
    nlohmann::ordered_json line;
    line["cycle_index"] = e.cycle_index + cycle_offset;
    line["position"] = e.term_position;
    line["addend"] = e.addend;
    line["accumulator_after"] = e.accumulator_after;
    out << line.dump() << '\n';
  }
}

}  // namespace ozmac
