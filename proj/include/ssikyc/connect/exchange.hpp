#pragma once

#include <optional>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "ssikyc/codec.hpp"
#include "ssikyc/connect/connection.hpp"
#include "ssikyc/connect/wallet.hpp"
#include "ssikyc/crypto/rng.hpp"
#include "ssikyc/trace.hpp"

namespace ssikyc::ledger {
class Resolver;
}

namespace ssikyc::connect {

// Out-of-band invitation (the QR code payload). With a public DID the
// invitee resolves endpoint and key from the ledger and checks they match.
struct Invitation {
  std::string inviter_public_did;  // may be empty
  std::string endpoint;
  std::string key_id;
  mpz_class recipient_key;
  Bytes nonce;

  bool operator==(const Invitation&) const = default;
  void encode(Writer& w) const;
  static Invitation decode(Reader& r);
  // "ssikyc-invitation:" + hex(canonical bytes)
  std::string to_text() const;
  static Invitation from_text(std::string_view text);
};

// Uses the wallet's public DID key when it has one, otherwise a fresh key.
Invitation create_invitation(Wallet& inviter, const std::string& endpoint, crypto::Rng& rng);

struct ConnectionRequest {
  Bytes nonce;
  std::string invitee_did;
  mpz_class invitee_pk;
  std::string invitee_endpoint;
  crypto::Signature signature;  // invitee peer key over the fields above

  Bytes signed_message() const;
  void encode(Writer& w) const;
  static ConnectionRequest decode(Reader& r);
};

struct ConnectionResponse {
  Bytes nonce;
  std::string inviter_did;
  mpz_class inviter_pk;
  std::string inviter_endpoint;
  std::string inviter_public_did;
  // Invitation key over (nonce, inviter did, inviter pk, invitee did, invitee pk):
  // proves the pairwise DID was authorized by whoever issued the invitation.
  crypto::Signature authorization;
  crypto::Digest confirmation{};

  Bytes authorized_message(const std::string& invitee_did, const mpz_class& invitee_pk) const;
  void encode(Writer& w) const;
  static ConnectionResponse decode(Reader& r);
};

// Anonymous public-key encryption for handshake messages so that mailboxes
// only ever hold ciphertext: ephemeral DH with the recipient key, then AEAD.
// Layout: u8 1 | str recipient hint | bigint ephemeral pk | bytes sealed.
Bytes seal_to(const crypto::GroupParams& params, const mpz_class& recipient_pk,
              const std::string& hint, ByteView plaintext, crypto::Rng& rng);
std::string sealed_hint(ByteView sealed);
std::optional<Bytes> open_sealed(const crypto::GroupParams& params, const mpz_class& recipient_sk,
                                 ByteView sealed);

struct HandshakeOptions {
  const ledger::Resolver* resolver = nullptr;
  // When set, the inviter's key must carry a valid attestation from this DID.
  std::optional<std::string> trusted_attester;
  Trace* trace = nullptr;
};

struct PendingConnection {
  Invitation invitation;
  Did my_did;
  crypto::KeyPair my_key;
  mpz_class inviter_key;
  std::string target_endpoint;
  std::string my_endpoint;
};

// Invitee: authenticate the invitation, create a pairwise DID, seal a request.
std::pair<PendingConnection, Bytes> begin_connection(Wallet& invitee, const Invitation& invitation,
                                                     const std::string& my_endpoint,
                                                     const HandshakeOptions& options,
                                                     crypto::Rng& rng);
// Inviter: open the request, create its own pairwise DID, store the connection.
std::pair<Connection, Bytes> accept_connection(Wallet& inviter, ByteView sealed_request,
                                               const std::string& inviter_endpoint,
                                               crypto::Rng& rng);
// Invitee: check authorization and key confirmation, store the connection.
Connection complete_connection(Wallet& invitee, const PendingConnection& pending,
                               ByteView sealed_response);

struct Party {
  Wallet& wallet;
  std::string endpoint;
};

// Full DID exchange. With a network every handshake message travels through
// the recipient's cloud mailbox; without one it is handed over directly.
// Returns (inviter side, invitee side).
std::pair<Connection, Connection> connect(Party inviter, Party invitee, const Invitation& invitation,
                                          const HandshakeOptions& options, crypto::Rng& rng,
                                          MailboxNetwork* network = nullptr);

}  // namespace ssikyc::connect
