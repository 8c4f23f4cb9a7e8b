#include "ssikyc/codec.hpp"

#include <algorithm>

namespace ssikyc {

std::string_view to_string(CodecErrc code) {
  switch (code) {
    case CodecErrc::Truncated: return "Truncated";
    case CodecErrc::TrailingBytes: return "TrailingBytes";
    case CodecErrc::BadTag: return "BadTag";
    case CodecErrc::BadValue: return "BadValue";
    case CodecErrc::BadHex: return "BadHex";
    case CodecErrc::BadBase32: return "BadBase32";
  }
  return "Unknown";
}

Writer& Writer::u8(std::uint8_t v) {
  buf_.push_back(v);
  return *this;
}

Writer& Writer::u16(std::uint16_t v) {
  buf_.push_back(static_cast<std::uint8_t>(v >> 8));
  buf_.push_back(static_cast<std::uint8_t>(v));
  return *this;
}

Writer& Writer::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

Writer& Writer::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

Writer& Writer::bytes(ByteView v) {
  u32(static_cast<std::uint32_t>(v.size()));
  return raw(v);
}

Writer& Writer::bigint(const mpz_class& v) { return bytes(bigint_to_bytes(v)); }

Writer& Writer::raw(ByteView v) {
  buf_.insert(buf_.end(), v.begin(), v.end());
  return *this;
}

Writer& Writer::count(std::size_t n) { return u32(static_cast<std::uint32_t>(n)); }

ByteView Reader::raw(std::size_t n) {
  if (remaining() < n) throw CodecError(CodecErrc::Truncated, "need " + std::to_string(n) + " bytes");
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t Reader::u8() { return raw(1)[0]; }

std::uint16_t Reader::u16() {
  auto b = raw(2);
  return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
}

std::uint32_t Reader::u32() {
  auto b = raw(4);
  std::uint32_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

std::uint64_t Reader::u64() {
  auto b = raw(8);
  std::uint64_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

bool Reader::boolean() {
  auto v = u8();
  if (v > 1) throw CodecError(CodecErrc::BadValue, "boolean out of range");
  return v == 1;
}

Bytes Reader::bytes() {
  auto n = u32();
  auto v = raw(n);
  return Bytes(v.begin(), v.end());
}

std::string Reader::str() {
  auto n = u32();
  auto v = raw(n);
  return std::string(v.begin(), v.end());
}

mpz_class Reader::bigint() {
  auto b = bytes();
  if (!b.empty() && b[0] == 0) throw CodecError(CodecErrc::BadValue, "non-minimal integer");
  return bigint_from_bytes(b);
}

std::size_t Reader::count() {
  auto n = u32();
  if (n > remaining()) throw CodecError(CodecErrc::Truncated, "list count exceeds input");
  return n;
}

void Reader::expect_done() const {
  if (!done()) throw CodecError(CodecErrc::TrailingBytes, std::to_string(remaining()) + " bytes left");
}

Bytes bigint_to_bytes(const mpz_class& v) {
  if (v == 0) return {};
  std::size_t n = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  Bytes out(n);
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(written);
  return out;
}

mpz_class bigint_from_bytes(ByteView b) {
  mpz_class v;
  if (!b.empty()) mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
  return v;
}

std::string to_hex(ByteView b) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(b.size() * 2);
  for (auto x : b) {
    out.push_back(kDigits[x >> 4]);
    out.push_back(kDigits[x & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw CodecError(CodecErrc::BadHex, "odd length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw CodecError(CodecErrc::BadHex, std::string("invalid digit '") + c + "'");
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  return out;
}

std::string to_base32(ByteView b) {
  static constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz234567";
  std::string out;
  std::uint32_t buffer = 0;
  int bits = 0;
  for (auto x : b) {
    buffer = (buffer << 8) | x;
    bits += 8;
    while (bits >= 5) {
      out.push_back(kAlphabet[(buffer >> (bits - 5)) & 31]);
      bits -= 5;
    }
  }
  if (bits > 0) out.push_back(kAlphabet[(buffer << (5 - bits)) & 31]);
  return out;
}

}  // namespace ssikyc
