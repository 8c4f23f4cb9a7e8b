#include "ssikyc/ledger/ledger.hpp"

#include <algorithm>
#include <sstream>

#include "ssikyc/ledger/identifiers.hpp"

namespace ssikyc::ledger {

std::string_view to_string(LedgerErrc code) {
  switch (code) {
    case LedgerErrc::ForbiddenKind: return "ForbiddenKind";
    case LedgerErrc::BadSignature: return "BadSignature";
    case LedgerErrc::VersionConflict: return "VersionConflict";
    case LedgerErrc::ShrinkingRevocationSet: return "ShrinkingRevocationSet";
    case LedgerErrc::Unauthorized: return "Unauthorized";
    case LedgerErrc::DuplicateObject: return "DuplicateObject";
    case LedgerErrc::UnknownLedger: return "UnknownLedger";
    case LedgerErrc::UnknownDid: return "UnknownDid";
    case LedgerErrc::PeerDidNotResolvable: return "PeerDidNotResolvable";
    case LedgerErrc::UnknownSchema: return "UnknownSchema";
    case LedgerErrc::UnknownCredDef: return "UnknownCredDef";
    case LedgerErrc::UnknownRegistry: return "UnknownRegistry";
    case LedgerErrc::VersionOutOfRange: return "VersionOutOfRange";
    case LedgerErrc::MalformedDump: return "MalformedDump";
  }
  return "Unknown";
}

std::string_view to_string(TxKind kind) {
  switch (kind) {
    case TxKind::DidDocRegistration: return "DidDocRegistration";
    case TxKind::SchemaRegistration: return "SchemaRegistration";
    case TxKind::CredDefRegistration: return "CredDefRegistration";
    case TxKind::RevRegCreation: return "RevRegCreation";
    case TxKind::RevRegUpdate: return "RevRegUpdate";
  }
  return "Unknown";
}

namespace {

std::string_view payload_tag(TxKind kind) {
  switch (kind) {
    case TxKind::DidDocRegistration: return "DidDocument";
    case TxKind::SchemaRegistration: return "Schema";
    case TxKind::CredDefRegistration: return "CredentialDefinition";
    case TxKind::RevRegCreation:
    case TxKind::RevRegUpdate: return "RevocationRegistry";
  }
  return "";
}

[[noreturn]] void forbid(const std::string& why) { throw LedgerError(LedgerErrc::ForbiddenKind, why); }

void require(bool ok, const std::string& why) {
  if (!ok) forbid(why);
}

bool public_did(std::string_view s) {
  auto did = connect::Did::parse(s);
  return did && did->is_public();
}

void check_did_document(const connect::DidDocument& doc) {
  require(doc.did.is_public(), "only public DIDs may be registered");
  require(!doc.verification_keys.empty(), "DID document without keys");
  for (const auto& k : doc.verification_keys) require(valid_label(k.key_id), "bad key id");
  for (const auto& e : doc.service_endpoints) {
    require(valid_label(e.label), "bad endpoint label");
    require(valid_mailbox_address(e.address), "bad endpoint address");
  }
  for (const auto& a : doc.attestations) {
    require(doc.key(a.key_id) != nullptr, "attestation for unknown key");
    require(public_did(a.attester_did), "attester must be a public DID");
  }
}

void check_schema(const anoncred::Schema& s) {
  require(valid_object_id(s.schema_id), "bad schema id");
  require(valid_label(s.name), "bad schema name");
  require(valid_version_string(s.version), "bad schema version");
  require(!s.attr_names.empty(), "schema without attributes");
  std::vector<std::string> sorted = s.attr_names;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "duplicate attribute");
  for (const auto& a : s.attr_names) require(valid_attr_name(a), "bad attribute name");
}

void check_cred_def(const anoncred::CredentialDefinition& d) {
  require(valid_object_id(d.cred_def_id), "bad cred def id");
  require(valid_object_id(d.schema_id), "bad schema id");
  require(public_did(d.issuer_did), "issuer must be a public DID");
  require(valid_label(d.key_id), "bad key id");
  if (d.revocation_supported)
    require(valid_object_id(d.registry_id), "bad registry id");
  else
    require(d.registry_id.empty(), "registry id without revocation support");
}

void check_registry(const RevocationRegistry& r) {
  require(valid_object_id(r.registry_id), "bad registry id");
  require(valid_object_id(r.cred_def_id), "bad cred def id");
  require(r.capacity > 0, "zero-capacity registry");
  require(r.revoked.empty() || *r.revoked.rbegin() < r.capacity, "revoked index beyond capacity");
  require(r.state_hash == r.compute_state_hash(), "state hash mismatch");
}

std::string object_id(const PublicObject& object) {
  return std::visit(
      [](const auto& o) -> std::string {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, connect::DidDocument>) return o.did.str();
        else if constexpr (std::is_same_v<T, anoncred::Schema>) return o.schema_id;
        else if constexpr (std::is_same_v<T, anoncred::CredentialDefinition>) return o.cred_def_id;
        else return o.registry_id;
      },
      object);
}

void encode_txs(Writer& w, const std::vector<LedgerTransaction>& txs) {
  w.count(txs.size());
  for (const auto& tx : txs) tx.encode(w);
}

}  // namespace

Bytes encode_payload(TxKind kind, const PublicObject& object) {
  Writer w;
  w.str(payload_tag(kind));
  std::visit([&](const auto& o) { o.encode(w); }, object);
  return std::move(w).take();
}

PublicObject parse_payload(TxKind kind, ByteView payload) {
  try {
    Reader r(payload);
    if (r.str() != payload_tag(kind)) forbid("payload tag does not match transaction kind");
    PublicObject object;
    switch (kind) {
      case TxKind::DidDocRegistration: {
        auto doc = connect::DidDocument::decode(r);
        check_did_document(doc);
        object = std::move(doc);
        break;
      }
      case TxKind::SchemaRegistration: {
        auto s = anoncred::Schema::decode(r);
        check_schema(s);
        object = std::move(s);
        break;
      }
      case TxKind::CredDefRegistration: {
        auto d = anoncred::CredentialDefinition::decode(r);
        check_cred_def(d);
        object = std::move(d);
        break;
      }
      case TxKind::RevRegCreation:
      case TxKind::RevRegUpdate: {
        auto reg = RevocationRegistry::decode(r);
        check_registry(reg);
        object = std::move(reg);
        break;
      }
      default:
        forbid("unknown transaction kind");
    }
    if (!r.done()) forbid("payload carries data outside the public object schema");
    return object;
  } catch (const CodecError& e) {
    forbid(std::string("payload does not parse: ") + e.what());
  }
}

Bytes LedgerTransaction::signing_message(TxKind kind, ByteView payload,
                                         std::string_view author_did) {
  Writer w;
  w.str("ssikyc/ledger-tx").u8(static_cast<std::uint8_t>(kind)).bytes(payload).str(author_did);
  return std::move(w).take();
}

LedgerTransaction LedgerTransaction::make(TxKind kind, const PublicObject& object,
                                          const connect::Did& author,
                                          const crypto::GroupParams& params,
                                          const crypto::KeyPair& key, crypto::Rng& rng) {
  LedgerTransaction tx;
  tx.kind = kind;
  tx.payload = encode_payload(kind, object);
  tx.author_did = author.str();
  tx.author_signature = crypto::sign(params, key, signing_message(kind, tx.payload, tx.author_did), rng);
  return tx;
}

void LedgerTransaction::encode(Writer& w) const {
  w.u8(static_cast<std::uint8_t>(kind)).bytes(payload).str(author_did);
  author_signature.encode(w);
}

LedgerTransaction LedgerTransaction::decode(Reader& r) {
  LedgerTransaction tx;
  auto k = r.u8();
  if (k < 1 || k > 5) throw CodecError(CodecErrc::BadTag, "transaction kind");
  tx.kind = static_cast<TxKind>(k);
  tx.payload = r.bytes();
  tx.author_did = r.str();
  tx.author_signature = crypto::Signature::decode(r);
  return tx;
}

crypto::Digest LedgerTransaction::hash() const {
  Writer w;
  encode(w);
  return crypto::tagged_hash("ssikyc/tx", w.data());
}

crypto::Digest Block::compute_hash() const {
  Writer w;
  w.u64(height).fixed(prev_hash).u64(timestamp);
  encode_txs(w, txs);
  return crypto::tagged_hash("ssikyc/block", w.data());
}

bool verify_chain(std::span<const Block> blocks) {
  crypto::Digest prev{};
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (b.height != i || b.prev_hash != prev || b.compute_hash() != b.hash) return false;
    if (i > 0 && b.timestamp < blocks[i - 1].timestamp) return false;
    prev = b.hash;
  }
  return true;
}

std::string dump_chain(std::string_view ledger_id, std::span<const Block> blocks) {
  std::ostringstream out;
  out << "# ledger " << ledger_id << "\n";
  for (const auto& b : blocks) {
    Writer w;
    encode_txs(w, b.txs);
    out << b.height << '\t' << to_hex(b.prev_hash) << '\t' << b.timestamp << '\t' << to_hex(b.hash)
        << '\t' << to_hex(w.data()) << '\n';
  }
  return out.str();
}

std::vector<TermHit> scan_terms(std::string_view ledger_id, std::span<const Block> blocks,
                                const std::vector<std::string>& terms) {
  std::vector<TermHit> hits;
  for (const auto& b : blocks) {
    Writer w;
    for (const auto& tx : b.txs) tx.encode(w);
    const auto& hay = w.data();
    for (const auto& term : terms) {
      if (term.empty()) continue;
      if (std::search(hay.begin(), hay.end(), term.begin(), term.end()) != hay.end())
        hits.push_back({std::string(ledger_id), b.height, term});
    }
  }
  return hits;
}

ChainDump parse_chain_dump(std::string_view text) {
  ChainDump dump;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ledger ", 0) != 0)
    throw LedgerError(LedgerErrc::MalformedDump, "missing '# ledger <id>' header");
  dump.ledger_id = line.substr(9);
  auto to_digest = [](const std::string& hex) {
    auto b = from_hex(hex);
    if (b.size() != 32) throw LedgerError(LedgerErrc::MalformedDump, "hash field is not 32 bytes");
    crypto::Digest d{};
    std::copy(b.begin(), b.end(), d.begin());
    return d;
  };
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    for (std::string f; std::getline(ls, f, '\t');) fields.push_back(f);
    if (fields.size() != 5)
      throw LedgerError(LedgerErrc::MalformedDump, "line " + std::to_string(lineno) + ": expected 5 fields");
    try {
      Block b;
      b.height = std::stoull(fields[0]);
      b.prev_hash = to_digest(fields[1]);
      b.timestamp = std::stoull(fields[2]);
      b.hash = to_digest(fields[3]);
      auto txs = from_hex(fields[4]);
      Reader r(txs);
      auto n = r.count();
      for (std::size_t i = 0; i < n; ++i) b.txs.push_back(LedgerTransaction::decode(r));
      r.expect_done();
      dump.blocks.push_back(std::move(b));
    } catch (const CodecError& e) {
      throw LedgerError(LedgerErrc::MalformedDump, "line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::logic_error& e) {
      throw LedgerError(LedgerErrc::MalformedDump, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return dump;
}

Ledger::Ledger(std::string ledger_id, const crypto::GroupParams& params, const LogicalClock& clock,
               std::size_t replicas)
    : params_(params), clock_(clock), id_(std::move(ledger_id)) {
  if (!connect::valid_ledger_id(id_)) throw std::invalid_argument("invalid ledger id '" + id_ + "'");
  Block genesis;
  genesis.timestamp = clock_.now();
  genesis.hash = genesis.compute_hash();
  blocks_.push_back(genesis);
  replicas_.assign(replicas, blocks_);
}

void Ledger::validate(const LedgerTransaction& tx, const PublicObject& object) const {
  auto author = connect::Did::parse(tx.author_did);
  if (!author || !author->is_public()) forbid("author must be a public DID");
  if (author->ledger_id != id_) throw LedgerError(LedgerErrc::Unauthorized, "author DID belongs to ledger " + author->ledger_id);
  const auto message = LedgerTransaction::signing_message(tx.kind, tx.payload, tx.author_did);

  auto signed_by_any = [&](const connect::DidDocument& doc) {
    return std::any_of(doc.verification_keys.begin(), doc.verification_keys.end(), [&](const auto& k) {
      return crypto::verify(params_, k.pk, message, tx.author_signature);
    });
  };

  if (tx.kind == TxKind::DidDocRegistration) {
    const auto& doc = std::get<connect::DidDocument>(object);
    if (doc.did.ledger_id != id_) forbid("DID document for another ledger");
    if (doc.did.str() != tx.author_did) throw LedgerError(LedgerErrc::Unauthorized, "author is not the DID subject");
    auto it = dids_.find(tx.author_did);
    if (it == dids_.end()) {
      if (doc.did.idstring != connect::idstring_for_key(doc.verification_keys.front().pk))
        throw LedgerError(LedgerErrc::Unauthorized, "DID is not derived from its first key");
      if (!crypto::verify(params_, doc.verification_keys.front().pk, message, tx.author_signature))
        throw LedgerError(LedgerErrc::BadSignature, "self-registration signature");
    } else if (!signed_by_any(it->second.back())) {
      throw LedgerError(LedgerErrc::BadSignature, "update not signed by a registered key");
    }
    return;
  }

  auto it = dids_.find(tx.author_did);
  if (it == dids_.end()) throw LedgerError(LedgerErrc::UnknownDid, tx.author_did);
  if (!signed_by_any(it->second.back())) throw LedgerError(LedgerErrc::BadSignature, tx.author_did);
  if (owner_of(object_id(object)) != tx.author_did)
    throw LedgerError(LedgerErrc::Unauthorized, "object id not owned by author");

  switch (tx.kind) {
    case TxKind::SchemaRegistration:
      if (schemas_.count(object_id(object))) throw LedgerError(LedgerErrc::DuplicateObject, object_id(object));
      break;
    case TxKind::CredDefRegistration: {
      const auto& d = std::get<anoncred::CredentialDefinition>(object);
      if (cred_defs_.count(d.cred_def_id)) throw LedgerError(LedgerErrc::DuplicateObject, d.cred_def_id);
      if (d.issuer_did != tx.author_did) throw LedgerError(LedgerErrc::Unauthorized, "issuer is not the author");
      if (it->second.back().key(d.key_id) == nullptr)
        throw LedgerError(LedgerErrc::Unauthorized, "signing key not in issuer DID document");
      break;
    }
    case TxKind::RevRegCreation: {
      const auto& reg = std::get<RevocationRegistry>(object);
      if (registries_.count(reg.registry_id)) throw LedgerError(LedgerErrc::DuplicateObject, reg.registry_id);
      if (reg.version != 0 || !reg.revoked.empty()) throw LedgerError(LedgerErrc::VersionConflict, "registry must start at version 0, empty");
      break;
    }
    case TxKind::RevRegUpdate: {
      const auto& reg = std::get<RevocationRegistry>(object);
      auto rit = registries_.find(reg.registry_id);
      if (rit == registries_.end()) throw LedgerError(LedgerErrc::UnknownRegistry, reg.registry_id);
      const auto& current = rit->second.back();
      if (reg.cred_def_id != current.cred_def_id || reg.capacity != current.capacity)
        forbid("registry update changes immutable fields");
      if (reg.version != current.version + 1)
        throw LedgerError(LedgerErrc::VersionConflict, "expected version " + std::to_string(current.version + 1) + ", got " + std::to_string(reg.version));
      if (!std::includes(reg.revoked.begin(), reg.revoked.end(), current.revoked.begin(), current.revoked.end()))
        throw LedgerError(LedgerErrc::ShrinkingRevocationSet, reg.registry_id);
      break;
    }
    default:
      break;
  }
}

void Ledger::index(const LedgerTransaction& tx, const PublicObject& object, Tick timestamp) {
  switch (tx.kind) {
    case TxKind::DidDocRegistration: {
      const auto& doc = std::get<connect::DidDocument>(object);
      dids_[doc.did.str()].push_back(doc);
      break;
    }
    case TxKind::SchemaRegistration: {
      const auto& s = std::get<anoncred::Schema>(object);
      schemas_.emplace(s.schema_id, s);
      break;
    }
    case TxKind::CredDefRegistration: {
      const auto& d = std::get<anoncred::CredentialDefinition>(object);
      cred_defs_.emplace(d.cred_def_id, d);
      break;
    }
    case TxKind::RevRegCreation:
    case TxKind::RevRegUpdate: {
      auto reg = std::get<RevocationRegistry>(object);
      reg.updated_at = timestamp;
      registries_[reg.registry_id].push_back(std::move(reg));
      break;
    }
  }
}

Receipt Ledger::append(const LedgerTransaction& tx) {
  auto object = parse_payload(tx.kind, tx.payload);
  validate(tx, object);

  Block b;
  b.height = blocks_.size();
  b.prev_hash = blocks_.back().hash;
  b.timestamp = clock_.now();
  b.txs.push_back(tx);
  b.hash = b.compute_hash();
  blocks_.push_back(b);
  for (auto& r : replicas_) r.push_back(b);
  index(tx, object, b.timestamp);
  ++appends_;
  return {b.height, tx.hash()};
}

std::optional<connect::DidDocument> Ledger::did_document(const std::string& did) const {
  ++reads_;
  auto it = dids_.find(did);
  if (it == dids_.end()) return std::nullopt;
  return it->second.back();
}

std::vector<connect::DidDocument> Ledger::did_history(const std::string& did) const {
  ++reads_;
  auto it = dids_.find(did);
  return it == dids_.end() ? std::vector<connect::DidDocument>{} : it->second;
}

std::optional<anoncred::Schema> Ledger::schema(const std::string& schema_id) const {
  ++reads_;
  auto it = schemas_.find(schema_id);
  if (it == schemas_.end()) return std::nullopt;
  return it->second;
}

std::optional<anoncred::CredentialDefinition> Ledger::cred_def(const std::string& cred_def_id) const {
  ++reads_;
  auto it = cred_defs_.find(cred_def_id);
  if (it == cred_defs_.end()) return std::nullopt;
  return it->second;
}

RevocationRegistry Ledger::registry(const std::string& registry_id, RegistryQuery query) const {
  ++reads_;
  auto it = registries_.find(registry_id);
  if (it == registries_.end()) throw LedgerError(LedgerErrc::UnknownRegistry, registry_id);
  const auto& versions = it->second;
  return std::visit(
      [&](const auto& q) -> RevocationRegistry {
        using Q = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<Q, AtVersion>) {
          if (q.version >= versions.size())
            throw LedgerError(LedgerErrc::VersionOutOfRange, "version " + std::to_string(q.version));
          return versions[q.version];
        } else if constexpr (std::is_same_v<Q, AtTick>) {
          // Latest version stamped at or before the tick.
          auto after = std::upper_bound(versions.begin(), versions.end(), q.tick,
                                        [](Tick t, const RevocationRegistry& r) { return t < r.updated_at; });
          if (after == versions.begin())
            throw LedgerError(LedgerErrc::VersionOutOfRange, "registry did not exist at tick " + std::to_string(q.tick));
          return *std::prev(after);
        } else {
          return versions.back();
        }
      },
      query);
}

bool Ledger::replicas_consistent() const {
  return std::all_of(replicas_.begin(), replicas_.end(), [&](const auto& r) { return r == blocks_; });
}

void Resolver::add(const Ledger& ledger) { ledgers_[ledger.id()] = &ledger; }

const Ledger& Resolver::ledger(std::string_view ledger_id) const {
  auto it = ledgers_.find(ledger_id);
  if (it == ledgers_.end()) throw LedgerError(LedgerErrc::UnknownLedger, std::string(ledger_id));
  return *it->second;
}

std::vector<const Ledger*> Resolver::ledgers() const {
  std::vector<const Ledger*> out;
  for (const auto& [id, l] : ledgers_) out.push_back(l);
  return out;
}

connect::DidDocument Resolver::resolve(std::string_view did) const {
  auto parsed = connect::Did::parse(did);
  if (!parsed) throw LedgerError(LedgerErrc::UnknownDid, "malformed DID " + std::string(did));
  if (!parsed->is_public()) throw LedgerError(LedgerErrc::PeerDidNotResolvable, std::string(did));
  auto doc = ledger(parsed->ledger_id).did_document(std::string(did));
  if (!doc) throw LedgerError(LedgerErrc::UnknownDid, std::string(did));
  return *doc;
}

const Ledger& Resolver::ledger_for_object(std::string_view object_id) const {
  auto owner = owner_of(object_id);
  if (!owner) throw LedgerError(LedgerErrc::UnknownLedger, "object id without owner DID: " + std::string(object_id));
  return ledger(connect::Did::parse(*owner)->ledger_id);
}

anoncred::Schema Resolver::schema(std::string_view schema_id) const {
  auto s = ledger_for_object(schema_id).schema(std::string(schema_id));
  if (!s) throw LedgerError(LedgerErrc::UnknownSchema, std::string(schema_id));
  return *s;
}

anoncred::CredentialDefinition Resolver::cred_def(std::string_view cred_def_id) const {
  auto d = ledger_for_object(cred_def_id).cred_def(std::string(cred_def_id));
  if (!d) throw LedgerError(LedgerErrc::UnknownCredDef, std::string(cred_def_id));
  return *d;
}

RevocationRegistry Resolver::registry(std::string_view registry_id, RegistryQuery query) const {
  return ledger_for_object(registry_id).registry(std::string(registry_id), query);
}

std::uint64_t Resolver::total_appends() const {
  std::uint64_t n = 0;
  for (const auto& [id, l] : ledgers_) n += l->append_count();
  return n;
}

std::uint64_t Resolver::total_reads() const {
  std::uint64_t n = 0;
  for (const auto& [id, l] : ledgers_) n += l->read_count();
  return n;
}

}  // namespace ssikyc::ledger
