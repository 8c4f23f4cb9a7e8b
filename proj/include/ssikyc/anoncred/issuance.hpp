#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ssikyc/anoncred/credential.hpp"
#include "ssikyc/anoncred/errors.hpp"
#include "ssikyc/anoncred/objects.hpp"
#include "ssikyc/clock.hpp"
#include "ssikyc/codec.hpp"
#include "ssikyc/connect/wallet.hpp"
#include "ssikyc/crypto/commitment.hpp"
#include "ssikyc/crypto/rng.hpp"
#include "ssikyc/ledger/ledger.hpp"

namespace ssikyc::anoncred {

using Nonce = std::array<std::uint8_t, 16>;

// Attribute preview in schema order.
using AttributeValues = std::vector<std::pair<std::string, std::string>>;

struct CredentialOffer {
  std::string cred_def_id;
  AttributeValues preview;
  Tick expiration = 0;
  std::optional<std::string> registry_id;
  Nonce nonce{};

  bool operator==(const CredentialOffer&) const = default;
  void encode(Writer& w) const;
  static CredentialOffer decode(Reader& r);
};

// The holder's blinded link secret g^ls h^r, with a proof of knowledge of its
// opening bound to the offer nonce.
struct CredentialRequest {
  Nonce offer_nonce{};
  crypto::PedersenCommitment blinded_link_secret;
  Nonce request_nonce{};
  crypto::SigmaProof proof;

  bool operator==(const CredentialRequest&) const = default;
  void encode(Writer& w) const;
  static CredentialRequest decode(Reader& r);
};

// What the issuer sends back: the credential plus the openings of its
// attribute commitments (values and salts).
struct CredentialIssue {
  Nonce offer_nonce{};
  VerifiableCredential vc;
  std::vector<std::string> values;
  std::vector<crypto::Salt> salts;

  bool operator==(const CredentialIssue&) const = default;
  void encode(Writer& w) const;
  static CredentialIssue decode(Reader& r);
};

// Issuer-side bookkeeping for one credential definition.
struct IssuerBook {
  CredentialDefinition def;
  Schema schema;
  std::uint32_t capacity = 0;
  std::uint32_t next_index = 0;
  std::set<std::uint32_t> issued;
  std::map<std::string, CredentialOffer> live_offers;  // nonce hex -> offer
};

// An organisation acting as issuer: its wallet (public DID and signing key)
// and the state of every credential definition it published.
class Issuer {
 public:
  explicit Issuer(connect::Wallet& wallet);

  connect::Wallet& wallet() { return *wallet_; }
  const connect::Wallet& wallet() const { return *wallet_; }
  const connect::OwnedDid& did() const { return did_; }

  IssuerBook& book(const std::string& cred_def_id);
  const IssuerBook& book(const std::string& cred_def_id) const;
  bool has_book(const std::string& cred_def_id) const { return books_.count(cred_def_id) != 0; }
  IssuerBook& add_book(IssuerBook b);
  IssuerBook* book_for_registry(const std::string& registry_id);
  std::map<std::string, IssuerBook>& books() { return books_; }
  const std::map<std::string, IssuerBook>& books() const { return books_; }

 private:
  connect::Wallet* wallet_;
  connect::OwnedDid did_;
  std::map<std::string, IssuerBook> books_;
};

Schema register_schema(Issuer& issuer, ledger::Ledger& ledger, const std::string& name,
                       const std::string& version, const std::vector<std::string>& attr_names,
                       crypto::Rng& rng);
// Registry id is <issuer did>/revreg/<tag> when revocation is supported; the
// registry itself is created by create_revocation_registry.
CredentialDefinition register_cred_def(Issuer& issuer, ledger::Ledger& ledger, const Schema& schema,
                                       const std::string& tag, bool revocation_supported,
                                       crypto::Rng& rng);
ledger::RevocationRegistry create_revocation_registry(Issuer& issuer, ledger::Ledger& ledger,
                                                      const std::string& cred_def_id,
                                                      std::uint32_t capacity, crypto::Rng& rng);

CredentialOffer create_offer(Issuer& issuer, const std::string& cred_def_id,
                             const std::map<std::string, std::string>& values, Tick expiration,
                             crypto::Rng& rng);

// Holder: blinds the link secret with fresh randomness and remembers the offer.
CredentialRequest accept_offer(connect::Wallet& wallet, const CredentialOffer& offer, crypto::Rng& rng);

// Consumes the live offer, assigns the next revocation index and signs.
CredentialIssue issue(Issuer& issuer, const CredentialRequest& request, crypto::Rng& rng);

// Holder-side validation of a received credential against the ledger and the
// pending offer; stores it on success, throws InvalidCredential otherwise.
const HeldCredential& store_issued(connect::Wallet& wallet, const CredentialIssue& issued,
                                   const ledger::Resolver& resolver);

// Issuer signature check against the key the credential definition names in
// the issuer's current DID document. Ledger lookup failures propagate.
bool issuer_signature_valid(const VerifiableCredential& vc, const CredentialDefinition& def,
                            const ledger::Resolver& resolver);

// Appends a registry update with `index` revoked; returns the new state.
ledger::RevocationRegistry revoke(Issuer& issuer, ledger::Ledger& ledger, const std::string& registry_id,
                                  std::uint32_t index, crypto::Rng& rng);

}  // namespace ssikyc::anoncred
