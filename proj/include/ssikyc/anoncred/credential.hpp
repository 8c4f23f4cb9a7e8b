#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ssikyc/clock.hpp"
#include "ssikyc/codec.hpp"
#include "ssikyc/crypto/commitment.hpp"
#include "ssikyc/crypto/schnorr.hpp"

namespace ssikyc::anoncred {

struct RevocationCoords {
  std::string registry_id;
  std::uint32_t index = 0;

  bool operator==(const RevocationCoords&) const = default;
};

// Issuer-signed credential. Attribute values never appear here, only their
// salted-hash commitments in schema order, so the credential itself can be
// shown without disclosing anything.
struct VerifiableCredential {
  std::string cred_def_id;
  std::string schema_id;
  std::vector<crypto::Digest> attribute_commitments;
  crypto::PedersenCommitment link_secret_commitment;
  std::optional<RevocationCoords> revocation;
  Tick expiration = 0;
  crypto::Signature issuer_signature;

  // canonical(every field above except the signature)
  Bytes signed_message() const;

  bool operator==(const VerifiableCredential&) const = default;
  void encode(Writer& w) const;
  static VerifiableCredential decode(Reader& r);
};

// Holder-side companion: the openings of every commitment in the credential.
struct HeldCredential {
  VerifiableCredential vc;
  std::vector<std::string> attr_names;
  std::vector<std::string> values;
  std::vector<crypto::Salt> salts;
  mpz_class blinding;  // r in link_secret_commitment = g^ls h^r

  const std::string* value(std::string_view attr) const;

  bool operator==(const HeldCredential&) const = default;
  void encode(Writer& w) const;
  static HeldCredential decode(Reader& r);
};

}  // namespace ssikyc::anoncred
