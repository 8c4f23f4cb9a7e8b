#include "ssikyc/connect/exchange.hpp"

#include <algorithm>

#include "ssikyc/crypto/hash.hpp"
#include "ssikyc/ledger/ledger.hpp"

namespace ssikyc::connect {

namespace {

constexpr std::string_view kInvitationPrefix = "ssikyc-invitation:";
constexpr std::uint8_t kSealedTag = 1;

crypto::Digest confirmation_tag(const crypto::Key32& shared, ByteView nonce, const std::string& inviter_did,
                                const std::string& invitee_did) {
  Writer w;
  w.fixed(shared).bytes(nonce).str(inviter_did).str(invitee_did);
  return crypto::tagged_hash("ssikyc/connection-confirm", w.data());
}

void trace(const HandshakeOptions& options, const std::string& actor, std::string_view event,
           std::vector<std::pair<std::string, std::string>> details = {}) {
  if (options.trace) options.trace->emit(actor, event, std::move(details));
}

template <class T>
T decode_all(ByteView b) {
  Reader r(b);
  T out = T::decode(r);
  r.expect_done();
  return out;
}

template <class T>
Bytes encode_all(const T& v) {
  Writer w;
  v.encode(w);
  return std::move(w).take();
}

}  // namespace

void Invitation::encode(Writer& w) const {
  w.str(inviter_public_did).str(endpoint).str(key_id).bigint(recipient_key).bytes(nonce);
}

Invitation Invitation::decode(Reader& r) {
  Invitation inv;
  inv.inviter_public_did = r.str();
  inv.endpoint = r.str();
  inv.key_id = r.str();
  inv.recipient_key = r.bigint();
  inv.nonce = r.bytes();
  return inv;
}

std::string Invitation::to_text() const { return std::string(kInvitationPrefix) + to_hex(encode_all(*this)); }

Invitation Invitation::from_text(std::string_view text) {
  if (text.substr(0, kInvitationPrefix.size()) != kInvitationPrefix)
    throw CodecError(CodecErrc::BadTag, "not an invitation");
  return decode_all<Invitation>(from_hex(text.substr(kInvitationPrefix.size())));
}

Invitation create_invitation(Wallet& inviter, const std::string& endpoint, crypto::Rng& rng) {
  Invitation inv;
  inv.endpoint = endpoint;
  inv.nonce = rng.bytes(16);
  std::string wallet_key_id;
  if (auto pub = inviter.public_did()) {
    inv.inviter_public_did = pub->did.str();
    wallet_key_id = pub->key_id;
  } else {
    wallet_key_id = inviter.add_key(crypto::keygen(inviter.params(), rng));
  }
  inv.key_id = wallet_key_id;
  inv.recipient_key = inviter.key(wallet_key_id).pk;
  inviter.pending_invitations()[to_hex(inv.nonce)] = wallet_key_id;
  return inv;
}

Bytes ConnectionRequest::signed_message() const {
  Writer w;
  w.str("ssikyc/connection-request").bytes(nonce).str(invitee_did).bigint(invitee_pk).str(invitee_endpoint);
  return std::move(w).take();
}

void ConnectionRequest::encode(Writer& w) const {
  w.bytes(nonce).str(invitee_did).bigint(invitee_pk).str(invitee_endpoint);
  signature.encode(w);
}

ConnectionRequest ConnectionRequest::decode(Reader& r) {
  ConnectionRequest q;
  q.nonce = r.bytes();
  q.invitee_did = r.str();
  q.invitee_pk = r.bigint();
  q.invitee_endpoint = r.str();
  q.signature = crypto::Signature::decode(r);
  return q;
}

Bytes ConnectionResponse::authorized_message(const std::string& invitee_did, const mpz_class& invitee_pk) const {
  Writer w;
  w.str("ssikyc/connection-response").bytes(nonce).str(inviter_did).bigint(inviter_pk);
  w.str(inviter_endpoint).str(inviter_public_did).str(invitee_did).bigint(invitee_pk);
  return std::move(w).take();
}

void ConnectionResponse::encode(Writer& w) const {
  w.bytes(nonce).str(inviter_did).bigint(inviter_pk).str(inviter_endpoint).str(inviter_public_did);
  authorization.encode(w);
  w.fixed(confirmation);
}

ConnectionResponse ConnectionResponse::decode(Reader& r) {
  ConnectionResponse p;
  p.nonce = r.bytes();
  p.inviter_did = r.str();
  p.inviter_pk = r.bigint();
  p.inviter_endpoint = r.str();
  p.inviter_public_did = r.str();
  p.authorization = crypto::Signature::decode(r);
  p.confirmation = r.fixed<32>();
  return p;
}

Bytes seal_to(const crypto::GroupParams& params, const mpz_class& recipient_pk, const std::string& hint,
              ByteView plaintext, crypto::Rng& rng) {
  auto eph = crypto::keygen(params, rng);
  auto key = crypto::agree(params, eph.sk, recipient_pk);
  Writer ad;
  ad.str(hint).bigint(eph.pk);
  // The ephemeral key is single-use, so a fixed nonce is safe.
  auto sealed = crypto::aead_seal(key, crypto::Nonce12{}, ad.data(), plaintext);
  Writer w;
  w.u8(kSealedTag).str(hint).bigint(eph.pk).bytes(sealed);
  return std::move(w).take();
}

std::string sealed_hint(ByteView sealed) {
  Reader r(sealed);
  if (r.u8() != kSealedTag) throw CodecError(CodecErrc::BadTag, "not a sealed message");
  return r.str();
}

std::optional<Bytes> open_sealed(const crypto::GroupParams& params, const mpz_class& recipient_sk,
                                 ByteView sealed) {
  try {
    Reader r(sealed);
    if (r.u8() != kSealedTag) return std::nullopt;
    auto hint = r.str();
    auto eph_pk = r.bigint();
    auto body = r.bytes();
    r.expect_done();
    if (!params.in_subgroup(eph_pk)) return std::nullopt;
    Writer ad;
    ad.str(hint).bigint(eph_pk);
    return crypto::aead_open(crypto::agree(params, recipient_sk, eph_pk), crypto::Nonce12{}, ad.data(), body);
  } catch (const CodecError&) {
    return std::nullopt;
  }
}

std::pair<PendingConnection, Bytes> begin_connection(Wallet& invitee, const Invitation& invitation,
                                                     const std::string& my_endpoint,
                                                     const HandshakeOptions& options, crypto::Rng& rng) {
  const auto& gp = invitee.params();
  PendingConnection pending;
  pending.invitation = invitation;
  pending.inviter_key = invitation.recipient_key;
  pending.target_endpoint = invitation.endpoint;
  pending.my_endpoint = my_endpoint;

  if (!invitation.inviter_public_did.empty()) {
    if (options.resolver == nullptr)
      throw ConnectError(ConnectErrc::ResolutionFailed, "no resolver for " + invitation.inviter_public_did);
    DidDocument doc;
    try {
      doc = options.resolver->resolve(invitation.inviter_public_did);
    } catch (const ledger::LedgerError& e) {
      throw ConnectError(ConnectErrc::ResolutionFailed, e.what());
    }
    trace(options, invitee.owner(), "did.resolved", {{"did", invitation.inviter_public_did}});
    const VerificationKey* key = nullptr;
    for (const auto& k : doc.verification_keys)
      if (k.pk == invitation.recipient_key) key = &k;
    if (key == nullptr)
      throw ConnectError(ConnectErrc::HandshakeMismatch, "invitation key differs from the DID document");
    auto endpoints = doc.service_endpoints;
    if (std::none_of(endpoints.begin(), endpoints.end(),
                     [&](const auto& e) { return e.address == invitation.endpoint; }))
      throw ConnectError(ConnectErrc::HandshakeMismatch, "invitation endpoint not in the DID document");

    if (options.trusted_attester) {
      bool attested = false;
      for (const auto& a : doc.attestations) {
        if (a.key_id != key->key_id || a.attester_did != *options.trusted_attester) continue;
        try {
          auto attester = options.resolver->resolve(a.attester_did);
          for (const auto& ak : attester.verification_keys)
            attested = attested || crypto::verify(gp, ak.pk, attestation_message(doc.did, *key), a.signature);
        } catch (const ledger::LedgerError&) {
        }
      }
      if (!attested) throw ConnectError(ConnectErrc::AttestationInvalid, "no valid attestation by " + *options.trusted_attester);
      trace(options, invitee.owner(), "invitation.attested", {{"attester", *options.trusted_attester}});
    } else {
      trace(options, invitee.owner(), "invitation.tofu", {{"warning", "no trusted attester configured"}});
    }
  } else {
    trace(options, invitee.owner(), "invitation.tofu", {{"warning", "invitation without public DID"}});
  }

  pending.my_did = create_peer_did(invitee, rng);
  pending.my_key = invitee.key(invitee.find_did(pending.my_did.str())->key_id);

  ConnectionRequest req;
  req.nonce = invitation.nonce;
  req.invitee_did = pending.my_did.str();
  req.invitee_pk = pending.my_key.pk;
  req.invitee_endpoint = my_endpoint;
  req.signature = crypto::sign(gp, pending.my_key, req.signed_message(), rng);
  trace(options, invitee.owner(), "connection.request", {{"peer_did", req.invitee_did}});
  return {pending, seal_to(gp, invitation.recipient_key, to_hex(invitation.nonce), encode_all(req), rng)};
}

std::pair<Connection, Bytes> accept_connection(Wallet& inviter, ByteView sealed_request,
                                               const std::string& inviter_endpoint, crypto::Rng& rng) {
  const auto& gp = inviter.params();
  std::string hint;
  try {
    hint = sealed_hint(sealed_request);
  } catch (const CodecError& e) {
    throw ConnectError(ConnectErrc::HandshakeMismatch, e.what());
  }
  auto it = inviter.pending_invitations().find(hint);
  if (it == inviter.pending_invitations().end()) throw ConnectError(ConnectErrc::UnknownInvitation, hint);
  const auto invitation_key = inviter.key(it->second);

  auto plain = open_sealed(gp, invitation_key.sk, sealed_request);
  if (!plain) throw ConnectError(ConnectErrc::HandshakeMismatch, "request does not open");
  ConnectionRequest req;
  try {
    req = decode_all<ConnectionRequest>(*plain);
  } catch (const CodecError& e) {
    throw ConnectError(ConnectErrc::HandshakeMismatch, e.what());
  }
  auto invitee_did = Did::parse(req.invitee_did);
  if (to_hex(req.nonce) != hint || !invitee_did || invitee_did->is_public() ||
      invitee_did->idstring != idstring_for_key(req.invitee_pk) ||
      !crypto::verify(gp, req.invitee_pk, req.signed_message(), req.signature))
    throw ConnectError(ConnectErrc::HandshakeMismatch, "connection request does not authenticate");

  auto my_did = create_peer_did(inviter, rng);
  auto my_key = inviter.key(inviter.find_did(my_did.str())->key_id);

  Connection conn;
  conn.my_peer_did = my_did;
  conn.their_peer_did = *invitee_did;
  conn.my_key = my_key;
  conn.their_pk = req.invitee_pk;
  conn.shared_key = crypto::agree(gp, my_key.sk, req.invitee_pk);
  conn.their_endpoint = req.invitee_endpoint;

  ConnectionResponse resp;
  resp.nonce = req.nonce;
  resp.inviter_did = my_did.str();
  resp.inviter_pk = my_key.pk;
  resp.inviter_endpoint = inviter_endpoint;
  if (auto pub = inviter.public_did()) resp.inviter_public_did = pub->did.str();
  resp.authorization = crypto::sign(gp, invitation_key, resp.authorized_message(req.invitee_did, req.invitee_pk), rng);
  resp.confirmation = confirmation_tag(conn.shared_key, req.nonce, resp.inviter_did, req.invitee_did);

  inviter.pending_invitations().erase(it);
  inviter.store_connection(conn);
  return {conn, seal_to(gp, req.invitee_pk, req.invitee_did, encode_all(resp), rng)};
}

Connection complete_connection(Wallet& invitee, const PendingConnection& pending, ByteView sealed_response) {
  const auto& gp = invitee.params();
  auto plain = open_sealed(gp, pending.my_key.sk, sealed_response);
  if (!plain) throw ConnectError(ConnectErrc::HandshakeMismatch, "response does not open");
  ConnectionResponse resp;
  try {
    resp = decode_all<ConnectionResponse>(*plain);
  } catch (const CodecError& e) {
    throw ConnectError(ConnectErrc::HandshakeMismatch, e.what());
  }
  auto inviter_did = Did::parse(resp.inviter_did);
  if (resp.nonce != pending.invitation.nonce || !inviter_did || inviter_did->is_public() ||
      inviter_did->idstring != idstring_for_key(resp.inviter_pk) ||
      resp.inviter_public_did != pending.invitation.inviter_public_did ||
      !crypto::verify(gp, pending.inviter_key, resp.authorized_message(pending.my_did.str(), pending.my_key.pk),
                      resp.authorization))
    throw ConnectError(ConnectErrc::HandshakeMismatch, "connection response not authorized by the invitation key");
  if (!gp.in_subgroup(resp.inviter_pk)) throw ConnectError(ConnectErrc::HandshakeMismatch, "peer key not in group");

  Connection conn;
  conn.my_peer_did = pending.my_did;
  conn.their_peer_did = *inviter_did;
  conn.my_key = pending.my_key;
  conn.their_pk = resp.inviter_pk;
  conn.shared_key = crypto::agree(gp, pending.my_key.sk, resp.inviter_pk);
  conn.their_endpoint = resp.inviter_endpoint;
  conn.their_public_did = resp.inviter_public_did;
  if (confirmation_tag(conn.shared_key, resp.nonce, resp.inviter_did, pending.my_did.str()) != resp.confirmation)
    throw ConnectError(ConnectErrc::HandshakeMismatch, "key confirmation failed");
  invitee.store_connection(conn);
  return conn;
}

std::pair<Connection, Connection> connect(Party inviter, Party invitee, const Invitation& invitation,
                                          const HandshakeOptions& options, crypto::Rng& rng,
                                          MailboxNetwork* network) {
  auto [pending, request] = begin_connection(invitee.wallet, invitation, invitee.endpoint, options, rng);
  if (network) {
    network->deliver(pending.target_endpoint, request);
    auto items = network->at(inviter.endpoint).drain();
    request = items.back();
  }
  auto [inviter_conn, response] = accept_connection(inviter.wallet, request, inviter.endpoint, rng);
  if (options.trace)
    options.trace->emit(inviter.wallet.owner(), "connection.response",
                        {{"peer_did", inviter_conn.my_peer_did.str()}});
  if (network) {
    network->deliver(inviter_conn.their_endpoint, response);
    auto items = network->at(invitee.endpoint).drain();
    response = items.back();
  }
  auto invitee_conn = complete_connection(invitee.wallet, pending, response);
  if (options.trace)
    options.trace->emit(invitee.wallet.owner(), "connection.established",
                        {{"peer_did", invitee_conn.my_peer_did.str()}, {"with", invitee_conn.their_peer_did.str()}});
  return {inviter_conn, invitee_conn};
}

}  // namespace ssikyc::connect
