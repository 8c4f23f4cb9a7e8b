#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ssikyc/anoncred/issuance.hpp"
#include "ssikyc/clock.hpp"
#include "ssikyc/codec.hpp"
#include "ssikyc/connect/wallet.hpp"
#include "ssikyc/crypto/commitment.hpp"
#include "ssikyc/crypto/rng.hpp"
#include "ssikyc/crypto/schnorr.hpp"
#include "ssikyc/ledger/ledger.hpp"

namespace ssikyc::anoncred {

// One requested attribute. Empty restriction lists accept any issuer.
struct AttributeRequest {
  std::string name;
  std::vector<std::string> schema_ids;
  std::vector<std::string> cred_def_ids;

  bool accepts(std::string_view schema_id, std::string_view cred_def_id) const;

  bool operator==(const AttributeRequest&) const = default;
};

struct ProofRequest {
  std::vector<AttributeRequest> attributes;
  Nonce nonce{};
  std::optional<Tick> non_revoked_as_of;
  // Accept any registry version in effect during [as_of - window, as_of].
  Tick freshness_window = 0;

  bool operator==(const ProofRequest&) const = default;
  void encode(Writer& w) const;
  static ProofRequest decode(Reader& r);
};

struct RevealedAttribute {
  std::string name;
  std::string value;
  crypto::Salt salt{};

  bool operator==(const RevealedAttribute&) const = default;
};

struct RevocationClaim {
  std::string registry_id;
  std::uint32_t index = 0;
  std::optional<std::uint64_t> version_claimed;

  bool operator==(const RevocationClaim&) const = default;
};

// A credential as shown to a verifier: everything the issuer signed, plus the
// openings of the revealed attributes only.
struct PresentedCredential {
  std::string cred_def_id;
  std::string schema_id;
  std::vector<crypto::Digest> attribute_commitments;
  crypto::Signature issuer_signature;
  Tick expiration = 0;
  std::optional<RevocationClaim> revocation;
  std::vector<RevealedAttribute> revealed;
  crypto::PedersenCommitment link_secret_commitment;

  // The credential as the issuer signed it.
  VerifiableCredential credential() const;

  bool operator==(const PresentedCredential&) const = default;
  void encode(Writer& w) const;
  static PresentedCredential decode(Reader& r);
};

// assignment[i] is the index of the credential answering request item i.
// `opening` proves knowledge of the first link-secret commitment; equalities[i]
// links credential i to credential i+1.
struct VerifiablePresentation {
  std::vector<PresentedCredential> credentials;
  std::vector<std::uint32_t> assignment;
  crypto::SigmaProof opening;
  std::vector<crypto::SigmaProof> equalities;

  bool operator==(const VerifiablePresentation&) const = default;
  void encode(Writer& w) const;
  static VerifiablePresentation decode(Reader& r);
  Bytes to_bytes() const;
  static VerifiablePresentation from_bytes(ByteView b);
};

// Transcript for the link-secret proofs: the request nonce first, then the
// request and every presented credential without its proofs.
crypto::Transcript presentation_transcript(const ProofRequest& request,
                                           const std::vector<PresentedCredential>& credentials,
                                           const std::vector<std::uint32_t>& assignment);

struct PresentationOptions {
  std::string verifier_label;
  Tick now = 0;
  // Present even if the registry shows the credential revoked.
  bool ignore_revocation = false;
  // Claim this registry version instead of the one in effect at the requested tick.
  std::optional<std::uint64_t> claim_version;
};

// Smallest set of wallet credentials covering every request item (ties broken
// by lowest wallet indices); assignment[i] is a wallet credential index.
// Empty if some item cannot be covered.
std::optional<std::vector<std::size_t>> match_credentials(const connect::Wallet& wallet,
                                                          const ProofRequest& request,
                                                          const std::vector<bool>& usable);

VerifiablePresentation create_presentation(connect::Wallet& wallet, const ProofRequest& request,
                                           const ledger::Resolver& resolver, crypto::Rng& rng,
                                           const PresentationOptions& options = {});

// Holder side of a request the wallet can only partly answer: presents the
// satisfiable items and names the rest.
struct PartialPresentation {
  ProofRequest answered;  // same nonce, satisfiable items only
  std::optional<VerifiablePresentation> vp;
  std::vector<std::string> missing;
};
PartialPresentation create_partial_presentation(connect::Wallet& wallet, const ProofRequest& request,
                                                const ledger::Resolver& resolver, crypto::Rng& rng,
                                                const PresentationOptions& options = {});

enum class VerifyReason {
  MalformedPresentation,
  UnknownIssuer,
  SignatureInvalid,
  CommitmentMismatch,
  MissingAttribute,
  RestrictionViolated,
  TranscriptMismatch,
  LinkSecretMismatch,
  MissingRevocationClaim,
  StaleRevocationState,
  Revoked,
  Expired,
  NonceUnknown,
  NonceReplayed,
};
std::string_view to_string(VerifyReason r);

struct VerificationResult {
  bool accepted = false;
  std::vector<VerifyReason> reasons;
  std::map<std::string, std::string> attributes;

  bool has(VerifyReason r) const;
};

// Verifier-side nonce book: requests carry nonces it issued, and each nonce
// is consumed by the first accepted presentation.
class Verifier {
 public:
  Verifier(std::string label, const crypto::GroupParams& params)
      : label_(std::move(label)), params_(&params) {}

  const std::string& label() const { return label_; }
  const crypto::GroupParams& params() const { return *params_; }
  ProofRequest make_request(std::vector<AttributeRequest> attributes, crypto::Rng& rng,
                            std::optional<Tick> non_revoked_as_of = std::nullopt,
                            Tick freshness_window = 0);

  bool issued(const Nonce& n) const { return issued_.count(to_hex(n)) != 0; }
  bool consumed(const Nonce& n) const { return consumed_.count(to_hex(n)) != 0; }
  void note_issued(const Nonce& n) { issued_.insert(to_hex(n)); }
  void consume(const Nonce& n) { consumed_.insert(to_hex(n)); }

 private:
  std::string label_;
  const crypto::GroupParams* params_;
  std::set<std::string> issued_;
  std::set<std::string> consumed_;
};

VerificationResult verify_presentation(Verifier& verifier, const VerifiablePresentation& vp,
                                       const ProofRequest& request, const ledger::Resolver& resolver,
                                       Tick now);

}  // namespace ssikyc::anoncred
