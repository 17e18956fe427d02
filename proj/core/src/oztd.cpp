// Copyright 2026 The ozmac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ozmac/oztd.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include <fmt/format.h>

#include "ozmac/error.hpp"

namespace ozmac {
namespace {

constexpr std::array<char, 4> kMagic{'O', 'Z', 'T', 'D'};
constexpr std::size_t kFixedHeader = 12;

std::size_t element_bytes(int dtype_bits) { return (static_cast<std::size_t>(dtype_bits) + 7) / 8; }

class Reader {
 public:
  explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }

  template <typename T>
  T read_le(const char* what) {
    if (remaining() < sizeof(T)) {
      throw Error(ErrorCode::MalformedHeader,
                  fmt::format("truncated OZTD header while reading {}", what));
    }
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<T>(std::to_integer<std::uint8_t>(bytes_[pos_ + i]))
                          << (8 * i));
    }
    pos_ += sizeof(T);
    return v;
  }

  std::span<const std::byte> take(std::size_t n) {
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

std::int64_t decode_element(std::span<const std::byte> raw, int dtype_bits, Signedness s) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    bits |= std::uint64_t{std::to_integer<std::uint8_t>(raw[i])} << (8 * i);
  }
  if (dtype_bits == 4 && (bits & 0xF0u) != 0) {
    throw Error(ErrorCode::ValueOutOfRange,
                fmt::format("ValueOutOfRange: 4-bit element byte 0x{:02x} has a nonzero high nibble",
                            bits));
  }
  if (s == Signedness::TwosComplement && (bits >> (dtype_bits - 1)) & 1u) {
    return static_cast<std::int64_t>(bits) - (std::int64_t{1} << dtype_bits);
  }
  return static_cast<std::int64_t>(bits);
}

void check_values(const TensorFile& t) {
  if (!is_supported_width(t.dtype_bits)) {
    throw Error(ErrorCode::MalformedHeader,
                fmt::format("dtype_bits {} is not one of 4, 8, 16", t.dtype_bits));
  }
  if (t.values.size() != t.element_count()) {
    throw Error(ErrorCode::DimMismatch,
                fmt::format("DimMismatch: dims describe {} elements, tensor holds {}",
                            t.element_count(), t.values.size()));
  }
  const auto lo = min_value(t.dtype_bits, t.signedness);
  const auto hi = max_value(t.dtype_bits, t.signedness);
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    if (t.values[i] < lo || t.values[i] > hi) {
      throw Error(ErrorCode::ValueOutOfRange,
                  fmt::format("ValueOutOfRange: element {} = {} outside [{}, {}]", i,
                              t.values[i], lo, hi));
    }
  }
}

}  // namespace

std::uint64_t TensorFile::element_count() const noexcept {
  if (dims.empty()) return 0;
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

std::vector<Operand> TensorFile::operands(Role role) const {
  std::vector<Operand> out;
  out.reserve(values.size());
  for (auto v : values) out.push_back(validate_operand(v, dtype_bits, signedness, role));
  return out;
}

TensorFile parse_tensor(std::span<const std::byte> bytes) {
  Reader in(bytes);
  if (in.remaining() < kMagic.size() ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorCode::BadMagic, "BadMagic: not an OZTD file");
  }
  in.take(kMagic.size());
  if (in.remaining() < kFixedHeader - kMagic.size()) {
    throw Error(ErrorCode::MalformedHeader, "truncated OZTD header");
  }

  const auto version = in.read_le<std::uint16_t>("version");
  if (version != kOztdVersion) {
    throw Error(ErrorCode::UnsupportedVersion,
                fmt::format("UnsupportedVersion: OZTD version {} (expected {})", version,
                            kOztdVersion));
  }

  TensorFile t;
  t.dtype_bits = in.read_le<std::uint8_t>("dtype_bits");
  if (!is_supported_width(t.dtype_bits)) {
    throw Error(ErrorCode::MalformedHeader,
                fmt::format("dtype_bits {} is not one of 4, 8, 16", t.dtype_bits));
  }
  const auto sign_byte = in.read_le<std::uint8_t>("signedness");
  if (sign_byte > 1) {
    throw Error(ErrorCode::MalformedHeader,
                fmt::format("signedness byte {} is not 0 or 1", sign_byte));
  }
  t.signedness = sign_byte == 0 ? Signedness::Unsigned : Signedness::TwosComplement;

  const auto ndim = in.read_le<std::uint32_t>("ndim");
  if (ndim == 0) throw Error(ErrorCode::DimMismatch, "DimMismatch: ndim is zero");
  if (in.remaining() / sizeof(std::uint64_t) < ndim) {
    throw Error(ErrorCode::MalformedHeader,
                fmt::format("truncated OZTD header: {} dims declared", ndim));
  }
  t.dims.reserve(ndim);
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    const auto d = in.read_le<std::uint64_t>("dims");
    if (d == 0) throw Error(ErrorCode::DimMismatch, fmt::format("DimMismatch: dim {} is zero", i));
    if (count > std::numeric_limits<std::uint64_t>::max() / d) {
      throw Error(ErrorCode::DimMismatch, "DimMismatch: element count overflows");
    }
    count *= d;
    t.dims.push_back(d);
  }

  const std::size_t width = element_bytes(t.dtype_bits);
  if (in.remaining() % width != 0 || in.remaining() / width != count) {
    throw Error(ErrorCode::DimMismatch,
                fmt::format("DimMismatch: header declares {} elements, payload holds {} bytes",
                            count, in.remaining()));
  }
  t.values.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    t.values.push_back(decode_element(in.take(width), t.dtype_bits, t.signedness));
  }
  return t;
}

std::vector<std::byte> serialize_tensor(const TensorFile& tensor) {
  if (tensor.dims.empty()) throw Error(ErrorCode::DimMismatch, "DimMismatch: ndim is zero");
  check_values(tensor);

  std::vector<std::byte> out;
  const std::size_t width = element_bytes(tensor.dtype_bits);
  out.reserve(kFixedHeader + 8 * tensor.dims.size() + width * tensor.values.size());
  auto put = [&out](std::uint64_t v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
  };
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  put(kOztdVersion, 2);
  put(static_cast<std::uint64_t>(tensor.dtype_bits), 1);
  put(tensor.signedness == Signedness::Unsigned ? 0 : 1, 1);
  put(tensor.dims.size(), 4);
  for (auto d : tensor.dims) put(d, 8);
  const std::uint64_t mask = (std::uint64_t{1} << tensor.dtype_bits) - 1;
  for (auto v : tensor.values) put(static_cast<std::uint64_t>(v) & mask, width);
  return out;
}

TensorFile load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()));
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, fmt::format("error reading '{}'", path.string()));
  return parse_tensor(std::as_bytes(std::span(raw)));
}

void save_tensor(const std::filesystem::path& path, const TensorFile& tensor) {
  const auto bytes = serialize_tensor(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", path.string()));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, fmt::format("error writing '{}'", path.string()));
}

}  // namespace ozmac
