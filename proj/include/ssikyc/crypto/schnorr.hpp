#pragma once

#include <gmpxx.h>

#include "ssikyc/codec.hpp"
#include "ssikyc/crypto/group.hpp"
#include "ssikyc/crypto/rng.hpp"

namespace ssikyc::crypto {

struct KeyPair {
  mpz_class sk;
  mpz_class pk;

  bool operator==(const KeyPair&) const = default;
};

// Schnorr signature (c, s): c = H(pk, R, m) with R = g^s * pk^c.
struct Signature {
  mpz_class c;
  mpz_class s;

  bool operator==(const Signature&) const = default;
  void encode(Writer& w) const { w.bigint(c).bigint(s); }
  static Signature decode(Reader& r) {
    Signature sig;
    sig.c = r.bigint();
    sig.s = r.bigint();
    return sig;
  }
};

KeyPair keygen(const GroupParams& params, Rng& rng);
KeyPair keypair_from_secret(const GroupParams& params, const mpz_class& sk);

Signature sign(const GroupParams& params, const KeyPair& key, ByteView message, Rng& rng);
bool verify(const GroupParams& params, const mpz_class& pk, ByteView message,
            const Signature& sig);

// Hashed Diffie-Hellman: 32-byte key from their_pk^my_sk.
std::array<std::uint8_t, 32> agree(const GroupParams& params, const mpz_class& my_sk,
                                   const mpz_class& their_pk);

}  // namespace ssikyc::crypto
