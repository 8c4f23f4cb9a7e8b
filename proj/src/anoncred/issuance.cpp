#include "ssikyc/anoncred/issuance.hpp"

#include <algorithm>

#include "ssikyc/connect/errors.hpp"

namespace ssikyc::anoncred {

std::string_view to_string(AnoncredErrc code) {
  switch (code) {
    case AnoncredErrc::MissingAttribute: return "MissingAttribute";
    case AnoncredErrc::UnknownAttribute: return "UnknownAttribute";
    case AnoncredErrc::UnknownCredDef: return "UnknownCredDef";
    case AnoncredErrc::StaleOffer: return "StaleOffer";
    case AnoncredErrc::BadRequest: return "BadRequest";
    case AnoncredErrc::RegistryFull: return "RegistryFull";
    case AnoncredErrc::UnknownIndex: return "UnknownIndex";
    case AnoncredErrc::AlreadyRevoked: return "AlreadyRevoked";
    case AnoncredErrc::NotAnIssuer: return "NotAnIssuer";
    case AnoncredErrc::InvalidCredential: return "InvalidCredential";
    case AnoncredErrc::NoMatchingCredential: return "NoMatchingCredential";
    case AnoncredErrc::RevokedCredential: return "RevokedCredential";
  }
  return "Unknown";
}

namespace {

crypto::Transcript request_transcript(const Nonce& offer_nonce, const std::string& cred_def_id,
                                      const Nonce& request_nonce) {
  crypto::Transcript t("ssikyc/credential-request");
  t.absorb("offer_nonce", offer_nonce).absorb("cred_def", cred_def_id).absorb("request_nonce", request_nonce);
  return t;
}

void publish(Issuer& issuer, ledger::Ledger& ledger, ledger::TxKind kind, const ledger::PublicObject& object,
             crypto::Rng& rng) {
  const auto& w = issuer.wallet();
  ledger.append(ledger::LedgerTransaction::make(kind, object, issuer.did().did, w.params(),
                                                w.key(issuer.did().key_id), rng));
}

[[noreturn]] void invalid(const std::string& detail) {
  throw AnoncredError(AnoncredErrc::InvalidCredential, detail);
}

}  // namespace

void CredentialOffer::encode(Writer& w) const {
  w.str(cred_def_id).count(preview.size());
  for (const auto& [k, v] : preview) w.str(k).str(v);
  w.u64(expiration).boolean(registry_id.has_value());
  if (registry_id) w.str(*registry_id);
  w.fixed(nonce);
}

CredentialOffer CredentialOffer::decode(Reader& r) {
  CredentialOffer o;
  o.cred_def_id = r.str();
  auto n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    auto k = r.str();
    o.preview.emplace_back(std::move(k), r.str());
  }
  o.expiration = r.u64();
  if (r.boolean()) o.registry_id = r.str();
  o.nonce = r.fixed<16>();
  return o;
}

void CredentialRequest::encode(Writer& w) const {
  w.fixed(offer_nonce).bigint(blinded_link_secret.value).fixed(request_nonce);
  proof.encode(w);
}

CredentialRequest CredentialRequest::decode(Reader& r) {
  CredentialRequest q;
  q.offer_nonce = r.fixed<16>();
  q.blinded_link_secret.value = r.bigint();
  q.request_nonce = r.fixed<16>();
  q.proof = crypto::SigmaProof::decode(r);
  return q;
}

void CredentialIssue::encode(Writer& w) const {
  w.fixed(offer_nonce);
  vc.encode(w);
  w.count(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) w.str(values[i]).fixed(salts[i]);
}

CredentialIssue CredentialIssue::decode(Reader& r) {
  CredentialIssue c;
  c.offer_nonce = r.fixed<16>();
  c.vc = VerifiableCredential::decode(r);
  auto n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    c.values.push_back(r.str());
    c.salts.push_back(r.fixed<16>());
  }
  return c;
}

Issuer::Issuer(connect::Wallet& wallet) : wallet_(&wallet) {
  auto pub = wallet.public_did();
  if (!pub) throw AnoncredError(AnoncredErrc::NotAnIssuer, wallet.owner() + " has no public DID");
  did_ = *pub;
}

IssuerBook& Issuer::book(const std::string& cred_def_id) {
  auto it = books_.find(cred_def_id);
  if (it == books_.end()) throw AnoncredError(AnoncredErrc::UnknownCredDef, cred_def_id);
  return it->second;
}

const IssuerBook& Issuer::book(const std::string& cred_def_id) const {
  auto it = books_.find(cred_def_id);
  if (it == books_.end()) throw AnoncredError(AnoncredErrc::UnknownCredDef, cred_def_id);
  return it->second;
}

IssuerBook& Issuer::add_book(IssuerBook b) {
  auto id = b.def.cred_def_id;
  return books_[id] = std::move(b);
}

IssuerBook* Issuer::book_for_registry(const std::string& registry_id) {
  for (auto& [id, b] : books_)
    if (b.def.revocation_supported && b.def.registry_id == registry_id) return &b;
  return nullptr;
}

Schema register_schema(Issuer& issuer, ledger::Ledger& ledger, const std::string& name,
                       const std::string& version, const std::vector<std::string>& attr_names,
                       crypto::Rng& rng) {
  Schema s{issuer.did().did.str() + "/schema/" + name + "/" + version, name, version, attr_names};
  publish(issuer, ledger, ledger::TxKind::SchemaRegistration, s, rng);
  return s;
}

CredentialDefinition register_cred_def(Issuer& issuer, ledger::Ledger& ledger, const Schema& schema,
                                       const std::string& tag, bool revocation_supported,
                                       crypto::Rng& rng) {
  const auto did = issuer.did().did.str();
  auto doc = ledger.did_document(did);
  if (!doc) throw AnoncredError(AnoncredErrc::NotAnIssuer, did + " not registered on " + ledger.id());
  const auto& pk = issuer.wallet().key(issuer.did().key_id).pk;
  auto key = std::find_if(doc->verification_keys.begin(), doc->verification_keys.end(),
                          [&](const auto& k) { return k.pk == pk; });
  if (key == doc->verification_keys.end())
    throw AnoncredError(AnoncredErrc::NotAnIssuer, "signing key not in the DID document");

  CredentialDefinition d;
  d.cred_def_id = did + "/creddef/" + tag;
  d.schema_id = schema.schema_id;
  d.issuer_did = did;
  d.key_id = key->key_id;
  d.revocation_supported = revocation_supported;
  if (revocation_supported) d.registry_id = did + "/revreg/" + tag;
  publish(issuer, ledger, ledger::TxKind::CredDefRegistration, d, rng);

  IssuerBook b;
  b.def = d;
  b.schema = schema;
  b.capacity = revocation_supported ? 0 : UINT32_MAX;
  issuer.add_book(std::move(b));
  return d;
}

ledger::RevocationRegistry create_revocation_registry(Issuer& issuer, ledger::Ledger& ledger,
                                                      const std::string& cred_def_id,
                                                      std::uint32_t capacity, crypto::Rng& rng) {
  auto& b = issuer.book(cred_def_id);
  if (!b.def.revocation_supported)
    throw AnoncredError(AnoncredErrc::UnknownCredDef, cred_def_id + " does not support revocation");
  ledger::RevocationRegistry reg;
  reg.registry_id = b.def.registry_id;
  reg.cred_def_id = cred_def_id;
  reg.capacity = capacity;
  reg.state_hash = reg.compute_state_hash();
  publish(issuer, ledger, ledger::TxKind::RevRegCreation, reg, rng);
  b.capacity = capacity;
  return ledger.registry(reg.registry_id);
}

CredentialOffer create_offer(Issuer& issuer, const std::string& cred_def_id,
                             const std::map<std::string, std::string>& values, Tick expiration,
                             crypto::Rng& rng) {
  auto& b = issuer.book(cred_def_id);
  for (const auto& [name, value] : values)
    if (!b.schema.position(name)) throw AnoncredError(AnoncredErrc::UnknownAttribute, name);
  CredentialOffer o;
  o.cred_def_id = cred_def_id;
  for (const auto& name : b.schema.attr_names) {
    auto it = values.find(name);
    if (it == values.end()) throw AnoncredError(AnoncredErrc::MissingAttribute, name);
    o.preview.emplace_back(name, it->second);
  }
  o.expiration = expiration;
  if (b.def.revocation_supported) o.registry_id = b.def.registry_id;
  o.nonce = rng.salt();
  b.live_offers[to_hex(o.nonce)] = o;
  return o;
}

CredentialRequest accept_offer(connect::Wallet& wallet, const CredentialOffer& offer, crypto::Rng& rng) {
  const auto& gp = wallet.params();
  const auto& ls = wallet.link_secret();
  CredentialRequest q;
  q.offer_nonce = offer.nonce;
  q.request_nonce = rng.salt();
  auto r = rng.below(gp.q);
  q.blinded_link_secret = crypto::pedersen_commit(gp, ls, r);
  q.proof = crypto::prove_opening(gp, q.blinded_link_secret, ls, r,
                                  request_transcript(offer.nonce, offer.cred_def_id, q.request_nonce), rng);

  connect::PendingIssuance p;
  p.cred_def_id = offer.cred_def_id;
  for (const auto& [k, v] : offer.preview) p.preview[k] = v;
  p.blinding = r;
  wallet.pending_issuance()[to_hex(offer.nonce)] = std::move(p);
  return q;
}

CredentialIssue issue(Issuer& issuer, const CredentialRequest& request, crypto::Rng& rng) {
  const auto nonce_hex = to_hex(request.offer_nonce);
  IssuerBook* book = nullptr;
  for (auto& [id, b] : issuer.books())
    if (b.live_offers.count(nonce_hex)) book = &b;
  if (book == nullptr) throw AnoncredError(AnoncredErrc::StaleOffer, nonce_hex);
  const auto offer = book->live_offers.at(nonce_hex);

  const auto& gp = issuer.wallet().params();
  if (!gp.in_subgroup(request.blinded_link_secret.value) ||
      !crypto::verify_opening(gp, request.blinded_link_secret, request.proof,
                              request_transcript(offer.nonce, offer.cred_def_id, request.request_nonce)))
    throw AnoncredError(AnoncredErrc::BadRequest, "blinded link secret proof does not verify");
  if (book->def.revocation_supported && book->next_index >= book->capacity)
    throw AnoncredError(AnoncredErrc::RegistryFull, book->def.registry_id);
  book->live_offers.erase(nonce_hex);

  CredentialIssue out;
  out.offer_nonce = offer.nonce;
  auto& vc = out.vc;
  vc.cred_def_id = offer.cred_def_id;
  vc.schema_id = book->def.schema_id;
  for (const auto& [name, value] : offer.preview) {
    auto salt = rng.salt();
    vc.attribute_commitments.push_back(crypto::hash_commit_digest(name, value, salt));
    out.values.push_back(value);
    out.salts.push_back(salt);
  }
  vc.link_secret_commitment = request.blinded_link_secret;
  if (book->def.revocation_supported) {
    vc.revocation = RevocationCoords{book->def.registry_id, book->next_index};
    book->issued.insert(book->next_index);
    ++book->next_index;
  }
  vc.expiration = offer.expiration;
  vc.issuer_signature = crypto::sign(gp, issuer.wallet().key(issuer.did().key_id), vc.signed_message(), rng);
  return out;
}

bool issuer_signature_valid(const VerifiableCredential& vc, const CredentialDefinition& def,
                            const ledger::Resolver& resolver) {
  auto doc = resolver.resolve(def.issuer_did);
  const auto* key = doc.key(def.key_id);
  if (key == nullptr) return false;
  const auto& gp = resolver.ledger(doc.did.ledger_id).params();
  return crypto::verify(gp, key->pk, vc.signed_message(), vc.issuer_signature);
}

const HeldCredential& store_issued(connect::Wallet& wallet, const CredentialIssue& issued,
                                   const ledger::Resolver& resolver) {
  const auto nonce_hex = to_hex(issued.offer_nonce);
  auto pit = wallet.pending_issuance().find(nonce_hex);
  if (pit == wallet.pending_issuance().end()) invalid("no pending offer " + nonce_hex);
  const auto& pending = pit->second;
  const auto& vc = issued.vc;
  if (vc.cred_def_id != pending.cred_def_id) invalid("credential definition differs from the offer");

  CredentialDefinition def;
  Schema schema;
  try {
    def = resolver.cred_def(vc.cred_def_id);
    schema = resolver.schema(def.schema_id);
    if (!issuer_signature_valid(vc, def, resolver)) invalid("issuer signature");
  } catch (const ledger::LedgerError& e) {
    invalid(e.what());
  }
  if (vc.schema_id != def.schema_id) invalid("schema differs from the credential definition");
  const auto n = schema.attr_names.size();
  if (vc.attribute_commitments.size() != n || issued.values.size() != n || issued.salts.size() != n)
    invalid("attribute count");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& name = schema.attr_names[i];
    auto want = pending.preview.find(name);
    if (want == pending.preview.end() || want->second != issued.values[i]) invalid("value of " + name + " differs from the offer");
    if (crypto::hash_commit_digest(name, issued.values[i], issued.salts[i]) != vc.attribute_commitments[i])
      invalid("commitment to " + name);
  }
  const auto& gp = wallet.params();
  if (crypto::pedersen_commit(gp, wallet.link_secret(), pending.blinding) != vc.link_secret_commitment)
    invalid("link secret commitment");
  if (def.revocation_supported != vc.revocation.has_value() ||
      (vc.revocation && vc.revocation->registry_id != def.registry_id))
    invalid("revocation coordinates");

  HeldCredential held;
  held.vc = vc;
  held.attr_names = schema.attr_names;
  held.values = issued.values;
  held.salts = issued.salts;
  held.blinding = pending.blinding;
  wallet.pending_issuance().erase(pit);
  wallet.store_credential(std::move(held));
  return wallet.credentials().back();
}

ledger::RevocationRegistry revoke(Issuer& issuer, ledger::Ledger& ledger, const std::string& registry_id,
                                  std::uint32_t index, crypto::Rng& rng) {
  auto* book = issuer.book_for_registry(registry_id);
  if (book == nullptr) throw ledger::LedgerError(ledger::LedgerErrc::UnknownRegistry, registry_id);
  if (!book->issued.count(index))
    throw AnoncredError(AnoncredErrc::UnknownIndex, registry_id + "#" + std::to_string(index));
  auto current = ledger.registry(registry_id);
  if (current.is_revoked(index))
    throw AnoncredError(AnoncredErrc::AlreadyRevoked, registry_id + "#" + std::to_string(index));
  auto next = current.with_revoked(index);
  publish(issuer, ledger, ledger::TxKind::RevRegUpdate, next, rng);
  return ledger.registry(registry_id);
}

}  // namespace ssikyc::anoncred
