#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ssikyc/anoncred/objects.hpp"
#include "ssikyc/clock.hpp"
#include "ssikyc/codec.hpp"
#include "ssikyc/connect/did.hpp"
#include "ssikyc/crypto/group.hpp"
#include "ssikyc/crypto/hash.hpp"
#include "ssikyc/crypto/schnorr.hpp"
#include "ssikyc/error.hpp"
#include "ssikyc/ledger/revocation.hpp"

namespace ssikyc::ledger {

enum class LedgerErrc {
  ForbiddenKind,
  BadSignature,
  VersionConflict,
  ShrinkingRevocationSet,
  Unauthorized,
  DuplicateObject,
  UnknownLedger,
  UnknownDid,
  PeerDidNotResolvable,
  UnknownSchema,
  UnknownCredDef,
  UnknownRegistry,
  VersionOutOfRange,
  MalformedDump,
};
std::string_view to_string(LedgerErrc code);
using LedgerError = CodedError<LedgerErrc>;

// The only object kinds a ledger accepts. Everything on chain is public
// trust data; nothing about a customer.
enum class TxKind : std::uint8_t {
  DidDocRegistration = 1,
  SchemaRegistration = 2,
  CredDefRegistration = 3,
  RevRegCreation = 4,
  RevRegUpdate = 5,
};
std::string_view to_string(TxKind kind);

using PublicObject = std::variant<connect::DidDocument, anoncred::Schema,
                                  anoncred::CredentialDefinition, RevocationRegistry>;

// Tagged canonical payload for a public object.
Bytes encode_payload(TxKind kind, const PublicObject& object);
// Strict structural validation: the payload must parse as exactly the object
// schema for `kind`, with identifier syntax on every string and no trailing
// bytes. Throws ForbiddenKind otherwise.
PublicObject parse_payload(TxKind kind, ByteView payload);

struct LedgerTransaction {
  TxKind kind = TxKind::SchemaRegistration;
  Bytes payload;
  std::string author_did;
  crypto::Signature author_signature;

  // Bytes covered by author_signature.
  static Bytes signing_message(TxKind kind, ByteView payload, std::string_view author_did);
  static LedgerTransaction make(TxKind kind, const PublicObject& object, const connect::Did& author,
                                const crypto::GroupParams& params, const crypto::KeyPair& key,
                                crypto::Rng& rng);

  void encode(Writer& w) const;
  static LedgerTransaction decode(Reader& r);
  crypto::Digest hash() const;

  bool operator==(const LedgerTransaction&) const = default;
};

struct Block {
  std::uint64_t height = 0;
  crypto::Digest prev_hash{};
  Tick timestamp = 0;
  std::vector<LedgerTransaction> txs;
  crypto::Digest hash{};

  // H(canonical(height, prev_hash, timestamp, txs))
  crypto::Digest compute_hash() const;

  bool operator==(const Block&) const = default;
};

// True iff every block hash recomputes, heights count up from 0, block 0 links
// to the all-zero hash and every later block links to its predecessor.
bool verify_chain(std::span<const Block> blocks);

struct Receipt {
  std::uint64_t height = 0;
  crypto::Digest tx_hash{};
};

// Registry lookup: a specific version, the state in effect at a tick, or latest.
struct AtVersion {
  std::uint64_t version;
};
struct AtTick {
  Tick tick;
};
struct Latest {};
using RegistryQuery = std::variant<AtVersion, AtTick, Latest>;

// Line-delimited chain dump: "# ledger <id>" header, then one block per line:
//   <height>\t<prev_hash hex>\t<timestamp>\t<hash hex>\t<canonical tx list hex>
struct ChainDump {
  std::string ledger_id;
  std::vector<Block> blocks;
};
std::string dump_chain(std::string_view ledger_id, std::span<const Block> blocks);
ChainDump parse_chain_dump(std::string_view text);

// Raw byte scan of every transaction (canonical encoding) for each term.
struct TermHit {
  std::string ledger_id;
  std::uint64_t height = 0;
  std::string term;

  bool operator==(const TermHit&) const = default;
};
std::vector<TermHit> scan_terms(std::string_view ledger_id, std::span<const Block> blocks,
                                const std::vector<std::string>& terms);

// Single-writer, hash-chained, append-only log with synchronously updated
// read replicas. Validates every transaction before it becomes a block.
class Ledger {
 public:
  Ledger(std::string ledger_id, const crypto::GroupParams& params, const LogicalClock& clock,
         std::size_t replicas = 2);
  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;

  const std::string& id() const { return id_; }
  const crypto::GroupParams& params() const { return params_; }

  Receipt append(const LedgerTransaction& tx);

  std::optional<connect::DidDocument> did_document(const std::string& did) const;
  // Every version of a DID document in registration order.
  std::vector<connect::DidDocument> did_history(const std::string& did) const;
  std::optional<anoncred::Schema> schema(const std::string& schema_id) const;
  std::optional<anoncred::CredentialDefinition> cred_def(const std::string& cred_def_id) const;
  RevocationRegistry registry(const std::string& registry_id, RegistryQuery query = Latest{}) const;

  std::span<const Block> blocks() const { return blocks_; }
  std::span<const Block> replica(std::size_t i) const { return replicas_.at(i); }
  std::size_t replica_count() const { return replicas_.size(); }
  bool replicas_consistent() const;
  bool verify() const { return verify_chain(blocks_); }

  std::uint64_t append_count() const { return appends_; }
  std::uint64_t read_count() const { return reads_.load(); }

 private:
  void validate(const LedgerTransaction& tx, const PublicObject& object) const;
  void index(const LedgerTransaction& tx, const PublicObject& object, Tick timestamp);
  const crypto::GroupParams& params_;
  const LogicalClock& clock_;
  std::string id_;
  std::vector<Block> blocks_;
  std::vector<std::vector<Block>> replicas_;
  std::uint64_t appends_ = 0;
  mutable std::atomic<std::uint64_t> reads_{0};

  std::map<std::string, std::vector<connect::DidDocument>> dids_;
  std::map<std::string, anoncred::Schema> schemas_;
  std::map<std::string, anoncred::CredentialDefinition> cred_defs_;
  std::map<std::string, std::vector<RevocationRegistry>> registries_;
};

// Routes lookups to the ledger named in a DID (or in the owner DID prefix of
// an object id). Read-only; one instance may front any number of ledgers.
class Resolver {
 public:
  void add(const Ledger& ledger);

  connect::DidDocument resolve(std::string_view did) const;
  anoncred::Schema schema(std::string_view schema_id) const;
  anoncred::CredentialDefinition cred_def(std::string_view cred_def_id) const;
  RevocationRegistry registry(std::string_view registry_id, RegistryQuery query = Latest{}) const;

  const Ledger& ledger(std::string_view ledger_id) const;
  std::vector<const Ledger*> ledgers() const;

  std::uint64_t total_appends() const;
  std::uint64_t total_reads() const;

 private:
  const Ledger& ledger_for_object(std::string_view object_id) const;
  std::map<std::string, const Ledger*, std::less<>> ledgers_;
};

}  // namespace ssikyc::ledger
