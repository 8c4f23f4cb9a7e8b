#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ssikyc/codec.hpp"
#include "ssikyc/crypto/group.hpp"
#include "ssikyc/crypto/hash.hpp"

namespace ssikyc::crypto {

// Fiat-Shamir transcript: an ordered list of labeled byte strings. The
// challenge is a pure function of everything absorbed so far.
class Transcript {
 public:
  Transcript() = default;
  explicit Transcript(std::string_view domain) { absorb("domain", as_bytes(domain)); }

  Transcript& absorb(std::string_view label, ByteView data);
  Transcript& absorb(std::string_view label, std::string_view text) {
    return absorb(label, as_bytes(text));
  }
  Transcript& absorb_int(std::string_view label, const mpz_class& v) {
    return absorb(label, bigint_to_bytes(v));
  }

  // Full-width (256-bit) challenge. Exponentiation uses it mod q; the
  // comparison during verification uses the full value.
  mpz_class challenge() const;

  const std::vector<std::pair<std::string, Bytes>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, Bytes>> entries_;
};

// A challenge is usable only if it is non-zero in Z_q; a zero challenge
// would make the response independent of the witness.
inline bool usable_challenge(const GroupParams& params, const mpz_class& c) {
  return c > 0 && c % params.q != 0;
}

}  // namespace ssikyc::crypto
