#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ssikyc/anoncred/credential.hpp"
#include "ssikyc/clock.hpp"
#include "ssikyc/codec.hpp"
#include "ssikyc/connect/connection.hpp"
#include "ssikyc/connect/did.hpp"
#include "ssikyc/crypto/group.hpp"
#include "ssikyc/crypto/rng.hpp"
#include "ssikyc/crypto/schnorr.hpp"

namespace ssikyc::ledger {
class Ledger;
}

namespace ssikyc::connect {

struct OwnedDid {
  Did did;
  std::string key_id;

  bool operator==(const OwnedDid&) const = default;
};

// Credential offer accepted but not yet issued: what the holder expects.
struct PendingIssuance {
  std::string cred_def_id;
  std::map<std::string, std::string> preview;
  mpz_class blinding;

  bool operator==(const PendingIssuance&) const = default;
};

struct DisclosureRecord {
  Tick tick = 0;
  std::string verifier;
  std::string nonce_hex;
  std::vector<std::string> revealed;

  bool operator==(const DisclosureRecord&) const = default;
};

// Edge wallet: the only place private keys, the link secret and attribute
// values live. Everything here round-trips through encode/decode, which is
// also the plaintext of an encrypted backup.
class Wallet {
 public:
  Wallet(std::string owner, crypto::Profile profile) : owner_(std::move(owner)), profile_(profile) {}

  const std::string& owner() const { return owner_; }
  crypto::Profile profile() const { return profile_; }
  const crypto::GroupParams& params() const { return crypto::GroupParams::for_profile(profile_); }

  std::string add_key(const crypto::KeyPair& key);
  const crypto::KeyPair& key(const std::string& key_id) const;
  const std::map<std::string, crypto::KeyPair>& keys() const { return keys_; }

  void add_did(const OwnedDid& d) { dids_.push_back(d); }
  void set_did_key(const Did& did, const std::string& key_id);
  const std::vector<OwnedDid>& dids() const { return dids_; }
  const OwnedDid* find_did(const std::string& did) const;
  std::optional<OwnedDid> public_did() const;

  // Creates the link secret on first call; later calls keep the existing one.
  const mpz_class& ensure_link_secret(crypto::Rng& rng);
  bool has_link_secret() const { return link_secret_.has_value(); }
  const mpz_class& link_secret() const;

  void store_credential(anoncred::HeldCredential cred) { credentials_.push_back(std::move(cred)); }
  const std::vector<anoncred::HeldCredential>& credentials() const { return credentials_; }

  std::map<std::string, PendingIssuance>& pending_issuance() { return pending_issuance_; }
  const std::map<std::string, PendingIssuance>& pending_issuance() const { return pending_issuance_; }
  std::map<std::string, std::string>& pending_invitations() { return pending_invitations_; }

  Connection& connection(const std::string& id);
  const Connection& connection(const std::string& id) const;
  void store_connection(const Connection& c) { connections_[c.id()] = c; }
  const std::map<std::string, Connection>& connections() const { return connections_; }

  void log_disclosure(DisclosureRecord r) { disclosures_.push_back(std::move(r)); }
  const std::vector<DisclosureRecord>& disclosures() const { return disclosures_; }

  bool operator==(const Wallet&) const = default;
  Bytes to_bytes() const;
  static Wallet from_bytes(ByteView b);

 private:
  std::string owner_;
  crypto::Profile profile_;
  std::uint32_t next_key_ = 1;
  std::map<std::string, crypto::KeyPair> keys_;
  std::vector<OwnedDid> dids_;
  std::optional<mpz_class> link_secret_;
  std::vector<anoncred::HeldCredential> credentials_;
  std::map<std::string, PendingIssuance> pending_issuance_;
  std::map<std::string, std::string> pending_invitations_;  // nonce hex -> key id
  std::map<std::string, Connection> connections_;
  std::vector<DisclosureRecord> disclosures_;
};

// Registers a fresh key's DID document on `ledger` and records the DID in the wallet.
Did create_public_did(Wallet& wallet, ledger::Ledger& ledger,
                      const std::vector<ServiceEndpoint>& endpoints, crypto::Rng& rng);
// Rotates the signing key of an existing public DID (new document, same DID).
void rotate_public_did_key(Wallet& wallet, ledger::Ledger& ledger, const Did& did, crypto::Rng& rng);
// Attester (e.g. a trust-service provider) certifies one key of a subject's DID document.
KeyAttestation attest_key(const Wallet& attester, const DidDocument& subject, const std::string& key_id,
                          crypto::Rng& rng);
// Publishes a new version of the subject's document carrying the attestation.
void publish_attestation(Wallet& subject, ledger::Ledger& ledger, const Did& did,
                         const KeyAttestation& attestation, crypto::Rng& rng);
// Pairwise DID: wallet-only, never touches a ledger.
Did create_peer_did(Wallet& wallet, crypto::Rng& rng);

// Encrypted backup file layout (all integers big-endian):
//   magic        8 bytes  "SSIKYCWB"
//   version      u16      1
//   kdf id       u8       1 = PBKDF2-HMAC-SHA256
//   iterations   u32      10000 (DEFAULT) / 10 (TEST)
//   salt         16 bytes
//   nonce        12 bytes ChaCha20-Poly1305 nonce
//   key check    8 bytes  first 8 bytes of SHA-256("ssikyc/wallet-key-check" || key)
//   length       u32      ciphertext length
//   ciphertext   wallet canonical bytes || 16-byte tag; AD = every header byte above
inline constexpr std::uint32_t kDefaultKdfIterations = 10000;
inline constexpr std::uint32_t kTestKdfIterations = 10;

Bytes export_wallet(const Wallet& wallet, std::string_view passphrase, crypto::Rng& rng);
Bytes export_wallet(const Wallet& wallet, std::string_view passphrase, crypto::Rng& rng,
                    std::uint32_t iterations);
// Throws WrongPassphrase or CorruptBackup; never returns a partial wallet.
Wallet import_wallet(ByteView backup, std::string_view passphrase);

}  // namespace ssikyc::connect
