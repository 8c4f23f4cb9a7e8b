#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ssikyc/codec.hpp"
#include "ssikyc/crypto/schnorr.hpp"

namespace ssikyc::connect {

// did:sim:<ledger_id>:<idstring> (public, resolvable through the ledger named in it)
// did:peer:<idstring>            (pairwise, never written to any ledger)
// idstring = base32(SHA-256(initial public key)).
struct Did {
  enum class Kind { Public, Peer };

  Kind kind = Kind::Peer;
  std::string ledger_id;
  std::string idstring;

  bool is_public() const { return kind == Kind::Public; }
  std::string str() const;

  static std::optional<Did> parse(std::string_view text);
  static Did public_for_key(std::string_view ledger_id, const mpz_class& pk);
  static Did peer_for_key(const mpz_class& pk);

  auto operator<=>(const Did&) const = default;
};

std::string idstring_for_key(const mpz_class& pk);
bool valid_ledger_id(std::string_view id);

struct VerificationKey {
  std::string key_id;
  mpz_class pk;

  bool operator==(const VerificationKey&) const = default;
};

struct ServiceEndpoint {
  std::string label;
  std::string address;

  bool operator==(const ServiceEndpoint&) const = default;
};

// Certification of one of the document's keys by a third party (stand-in
// for a qualified trust-service certificate on the bank's key).
struct KeyAttestation {
  std::string key_id;
  std::string attester_did;
  crypto::Signature signature;

  bool operator==(const KeyAttestation&) const = default;
};

struct DidDocument {
  Did did;
  std::vector<VerificationKey> verification_keys;
  std::vector<ServiceEndpoint> service_endpoints;
  std::vector<KeyAttestation> attestations;

  const VerificationKey* key(std::string_view key_id) const;
  const ServiceEndpoint* endpoint(std::string_view label) const;

  bool operator==(const DidDocument&) const = default;

  void encode(Writer& w) const;
  static DidDocument decode(Reader& r);
};

// Bytes an attester signs to certify (did, key_id, pk).
Bytes attestation_message(const Did& did, const VerificationKey& key);

}  // namespace ssikyc::connect
