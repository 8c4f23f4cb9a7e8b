#pragma once

// Canonical byte encoding shared by every signed, hashed or persisted object.
//
//   u8/u16/u32/u64  fixed width, big-endian
//   bytes, string   u32 length prefix followed by the raw bytes (UTF-8 for strings)
//   bigint          bytes of the minimal big-endian magnitude (zero encodes as length 0)
//   fixed arrays    raw, no prefix (their length is implied by the field type)
//   lists           u32 element count followed by the elements
//
// Fields are always written in declaration order. A Reader must consume the
// whole buffer; trailing bytes are an error.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ssikyc/error.hpp"

namespace ssikyc {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

enum class CodecErrc { Truncated, TrailingBytes, BadTag, BadValue, BadHex, BadBase32 };
std::string_view to_string(CodecErrc code);
using CodecError = CodedError<CodecErrc>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

class Writer {
 public:
  Writer& u8(std::uint8_t v);
  Writer& u16(std::uint16_t v);
  Writer& u32(std::uint32_t v);
  Writer& u64(std::uint64_t v);
  Writer& boolean(bool v) { return u8(v ? 1 : 0); }
  Writer& bytes(ByteView v);
  Writer& str(std::string_view v) { return bytes(as_bytes(v)); }
  Writer& bigint(const mpz_class& v);
  Writer& raw(ByteView v);
  template <std::size_t N>
  Writer& fixed(const std::array<std::uint8_t, N>& v) {
    return raw(ByteView(v.data(), N));
  }
  Writer& count(std::size_t n);

  const Bytes& data() const& { return buf_; }
  Bytes take() && { return std::move(buf_); }

 private:
  Bytes buf_;
};

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  bool boolean();
  Bytes bytes();
  std::string str();
  mpz_class bigint();
  ByteView raw(std::size_t n);
  template <std::size_t N>
  std::array<std::uint8_t, N> fixed() {
    std::array<std::uint8_t, N> out{};
    auto v = raw(N);
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  }
  // List length, bounded by the remaining input so a corrupt count cannot
  // trigger a huge allocation.
  std::size_t count();

  bool done() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }
  void expect_done() const;

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

Bytes bigint_to_bytes(const mpz_class& v);
mpz_class bigint_from_bytes(ByteView b);

std::string to_hex(ByteView b);
Bytes from_hex(std::string_view hex);

// RFC 4648 base32, lowercase alphabet, no padding.
std::string to_base32(ByteView b);

}  // namespace ssikyc
