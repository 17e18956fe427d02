// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ozmac/encoder.hpp"

#include <bit>

namespace ozmac {

EncodedStream oz_encode(const Operand& op) {
  EncodedStream stream;
  stream.negative = op.negative();
  stream.source_bits = op.bits();
  std::uint32_t rest = op.magnitude();
  stream.terms.reserve(static_cast<std::size_t>(std::popcount(rest)));
  while (rest != 0) {
    const int position = std::bit_width(rest) - 1;
    const std::uint32_t mask = std::uint32_t{1} << position;
    stream.terms.push_back({mask, position});
    rest &= ~mask;
  }
  return stream;
}

std::int64_t oz_decode(const EncodedStream& stream) {
  std::int64_t sum = 0;
  for (const auto& term : stream.terms) sum += std::int64_t{1} << term.position;
  return stream.negative ? -sum : sum;
}

int cycle_count(const Operand& op) noexcept { return std::popcount(op.magnitude()); }

std::optional<int> OzEncoderFsm::highest_set(std::uint32_t bits) noexcept {
  if (bits == 0) return std::nullopt;
  return std::bit_width(bits) - 1;
}

void OzEncoderFsm::load(const Operand& op) noexcept {
  remaining_ = op.magnitude();
  negative_ = op.negative();
  current_ = highest_set(remaining_);
  next_ = current_ ? highest_set(remaining_ & ~(std::uint32_t{1} << *current_))
                   : std::nullopt;
}

std::optional<OneHotTerm> OzEncoderFsm::step() noexcept {
  if (!current_) return std::nullopt;
  const int position = *current_;
  const OneHotTerm term{std::uint32_t{1} << position, position};
  remaining_ &= ~term.mask;
  current_ = next_;
  next_ = current_ ? highest_set(remaining_ & ~(std::uint32_t{1} << *current_))
                   : std::nullopt;
  return term;
}

}  // namespace ozmac
