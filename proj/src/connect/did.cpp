#include "ssikyc/connect/did.hpp"

#include <algorithm>

#include "ssikyc/crypto/hash.hpp"

namespace ssikyc::connect {

namespace {

bool is_base32_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '2' && c <= '7'); }

}  // namespace

bool valid_ledger_id(std::string_view id) {
  if (id.empty() || id.size() > 32) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
  });
}

std::string idstring_for_key(const mpz_class& pk) {
  auto d = crypto::sha256(bigint_to_bytes(pk));
  return to_base32(d);
}

std::string Did::str() const {
  if (kind == Kind::Public) return "did:sim:" + ledger_id + ":" + idstring;
  return "did:peer:" + idstring;
}

std::optional<Did> Did::parse(std::string_view text) {
  auto valid_id = [](std::string_view s) {
    return !s.empty() && s.size() <= 64 && std::all_of(s.begin(), s.end(), is_base32_char);
  };
  constexpr std::string_view kSim = "did:sim:";
  constexpr std::string_view kPeer = "did:peer:";
  if (text.substr(0, kPeer.size()) == kPeer) {
    auto id = text.substr(kPeer.size());
    if (!valid_id(id)) return std::nullopt;
    return Did{Kind::Peer, "", std::string(id)};
  }
  if (text.substr(0, kSim.size()) == kSim) {
    auto rest = text.substr(kSim.size());
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    auto ledger = rest.substr(0, colon);
    auto id = rest.substr(colon + 1);
    if (!valid_ledger_id(ledger) || !valid_id(id)) return std::nullopt;
    return Did{Kind::Public, std::string(ledger), std::string(id)};
  }
  return std::nullopt;
}

Did Did::public_for_key(std::string_view ledger_id, const mpz_class& pk) {
  return {Kind::Public, std::string(ledger_id), idstring_for_key(pk)};
}

Did Did::peer_for_key(const mpz_class& pk) { return {Kind::Peer, "", idstring_for_key(pk)}; }

const VerificationKey* DidDocument::key(std::string_view key_id) const {
  for (const auto& k : verification_keys)
    if (k.key_id == key_id) return &k;
  return nullptr;
}

const ServiceEndpoint* DidDocument::endpoint(std::string_view label) const {
  for (const auto& e : service_endpoints)
    if (e.label == label) return &e;
  return nullptr;
}

void DidDocument::encode(Writer& w) const {
  w.str(did.str());
  w.count(verification_keys.size());
  for (const auto& k : verification_keys) w.str(k.key_id).bigint(k.pk);
  w.count(service_endpoints.size());
  for (const auto& e : service_endpoints) w.str(e.label).str(e.address);
  w.count(attestations.size());
  for (const auto& a : attestations) {
    w.str(a.key_id).str(a.attester_did);
    a.signature.encode(w);
  }
}

DidDocument DidDocument::decode(Reader& r) {
  DidDocument doc;
  auto did = Did::parse(r.str());
  if (!did) throw CodecError(CodecErrc::BadValue, "malformed DID");
  doc.did = *did;
  auto n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    VerificationKey k;
    k.key_id = r.str();
    k.pk = r.bigint();
    doc.verification_keys.push_back(std::move(k));
  }
  n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    ServiceEndpoint e;
    e.label = r.str();
    e.address = r.str();
    doc.service_endpoints.push_back(std::move(e));
  }
  n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    KeyAttestation a;
    a.key_id = r.str();
    a.attester_did = r.str();
    a.signature = crypto::Signature::decode(r);
    doc.attestations.push_back(std::move(a));
  }
  return doc;
}

Bytes attestation_message(const Did& did, const VerificationKey& key) {
  Writer w;
  w.str("ssikyc/key-attestation").str(did.str()).str(key.key_id).bigint(key.pk);
  return std::move(w).take();
}

}  // namespace ssikyc::connect
