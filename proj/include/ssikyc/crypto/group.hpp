#pragma once

#include <string>
#include <string_view>

#include <gmpxx.h>

#include "ssikyc/codec.hpp"

namespace ssikyc::crypto {

enum class Profile { Test, Default };

std::string_view to_string(Profile p);
Profile profile_from_string(std::string_view s);

// Prime-order subgroup of Z_p^*. All exponents live in Z_q.
//
// Test:    p = 23, q = 11, g = 2, h = 3. Small enough for exhaustive checks.
// Default: the 2048-bit MODP safe prime of RFC 3526 (p = 2q + 1), g = 2, and
//          h = hash_to_subgroup("ssikyc/pedersen-h") so that log_g(h) is unknown.
struct GroupParams {
  Profile profile = Profile::Test;
  mpz_class p;
  mpz_class q;
  mpz_class g;
  mpz_class h;

  static const GroupParams& test();
  static const GroupParams& standard();
  static const GroupParams& for_profile(Profile p);

  // Full structural check, including primality of p and q. Slow for Default.
  bool valid() const;

  bool in_subgroup(const mpz_class& x) const;
  bool is_scalar(const mpz_class& x) const { return x >= 0 && x < q; }

  // Fixed-width encoding of group elements and scalars.
  std::size_t element_bytes() const;
};

mpz_class powm(const mpz_class& base, const mpz_class& exp, const mpz_class& mod);

// Deterministic map of a tag into the order-q subgroup: expand the tag to
// |p| + 128 bits with counter-mode hashing, reduce mod p, raise to (p-1)/q.
// Retries with the next counter block whenever the result is 1.
mpz_class hash_to_subgroup(const GroupParams& params, std::string_view tag);

}  // namespace ssikyc::crypto
