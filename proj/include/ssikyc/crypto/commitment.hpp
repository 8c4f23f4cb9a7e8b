#pragma once

#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ssikyc/codec.hpp"
#include "ssikyc/crypto/group.hpp"
#include "ssikyc/crypto/hash.hpp"
#include "ssikyc/crypto/rng.hpp"
#include "ssikyc/crypto/transcript.hpp"
#include "ssikyc/error.hpp"

namespace ssikyc::crypto {

enum class CryptoErrc { OutOfRange, NotInSubgroup, BadLength };
std::string_view to_string(CryptoErrc code);
using CryptoError = CodedError<CryptoErrc>;

// C = g^m * h^r mod p.
struct PedersenCommitment {
  mpz_class value;

  bool operator==(const PedersenCommitment&) const = default;
};

PedersenCommitment pedersen_commit(const GroupParams& params, const mpz_class& m,
                                   const mpz_class& r);

struct SaltedHashCommitment {
  Digest digest{};
  Salt salt{};
};

// digest = SHA-256(str(name) || str(value) || bytes(salt)) with the codec's
// u32 length prefixes.
Digest hash_commit_digest(std::string_view name, std::string_view value, const Salt& salt);

inline SaltedHashCommitment hash_commit(std::string_view name, std::string_view value,
                                        const Salt& salt) {
  return {hash_commit_digest(name, value, salt), salt};
}

struct SigmaProof {
  std::vector<mpz_class> commitments;
  mpz_class challenge;
  std::vector<mpz_class> responses;

  bool operator==(const SigmaProof&) const = default;
  void encode(Writer& w) const;
  static SigmaProof decode(Reader& r);
};

// Knowledge of (m, r) with C = g^m h^r.
SigmaProof prove_opening(const GroupParams& params, const PedersenCommitment& c,
                         const mpz_class& m, const mpz_class& r, const Transcript& transcript,
                         Rng& rng);
bool verify_opening(const GroupParams& params, const PedersenCommitment& c,
                    const SigmaProof& proof, const Transcript& transcript);

// C1 = g^m h^r1 and C2 = g^m h^r2 hide the same m.
SigmaProof prove_equal(const GroupParams& params, const PedersenCommitment& c1,
                       const PedersenCommitment& c2, const mpz_class& m, const mpz_class& r1,
                       const mpz_class& r2, const Transcript& transcript, Rng& rng);
bool verify_equal(const GroupParams& params, const PedersenCommitment& c1,
                  const PedersenCommitment& c2, const SigmaProof& proof,
                  const Transcript& transcript);

}  // namespace ssikyc::crypto
