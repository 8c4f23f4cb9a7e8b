#include "ssikyc/crypto/schnorr.hpp"

#include <stdexcept>

#include "ssikyc/crypto/hash.hpp"

namespace ssikyc::crypto {

namespace {

mpz_class signature_challenge(const mpz_class& pk, const mpz_class& commitment, ByteView message) {
  Writer w;
  w.bigint(pk).bigint(commitment).bytes(message);
  return digest_to_int(tagged_hash("ssikyc/schnorr", w.data()));
}

}  // namespace

KeyPair keygen(const GroupParams& params, Rng& rng) {
  return keypair_from_secret(params, rng.nonzero_below(params.q));
}

KeyPair keypair_from_secret(const GroupParams& params, const mpz_class& sk) {
  if (sk <= 0 || sk >= params.q) throw std::out_of_range("secret key outside [1, q-1]");
  return {sk, powm(params.g, sk, params.p)};
}

Signature sign(const GroupParams& params, const KeyPair& key, ByteView message, Rng& rng) {
  for (;;) {
    mpz_class k = rng.nonzero_below(params.q);
    mpz_class commitment = powm(params.g, k, params.p);
    mpz_class c = signature_challenge(key.pk, commitment, message);
    if (c % params.q == 0) continue;
    mpz_class s = (k - (c % params.q) * key.sk) % params.q;
    if (s < 0) s += params.q;
    return {c, s};
  }
}

bool verify(const GroupParams& params, const mpz_class& pk, ByteView message,
            const Signature& sig) {
  if (!params.in_subgroup(pk) || !params.is_scalar(sig.s)) return false;
  if (sig.c <= 0 || mpz_sizeinbase(sig.c.get_mpz_t(), 2) > 256) return false;
  if (sig.c % params.q == 0) return false;
  mpz_class commitment =
      powm(params.g, sig.s, params.p) * powm(pk, sig.c % params.q, params.p) % params.p;
  return signature_challenge(pk, commitment, message) == sig.c;
}

std::array<std::uint8_t, 32> agree(const GroupParams& params, const mpz_class& my_sk,
                                   const mpz_class& their_pk) {
  if (!params.in_subgroup(their_pk)) throw std::invalid_argument("peer key not in subgroup");
  return tagged_hash("ssikyc/dh", bigint_to_bytes(powm(their_pk, my_sk, params.p)));
}

}  // namespace ssikyc::crypto
