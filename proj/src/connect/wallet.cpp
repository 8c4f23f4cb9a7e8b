#include "ssikyc/connect/wallet.hpp"

#include <algorithm>
#include <cstring>

#include "ssikyc/connect/errors.hpp"
#include "ssikyc/crypto/aead.hpp"
#include "ssikyc/crypto/hash.hpp"
#include "ssikyc/ledger/ledger.hpp"

namespace ssikyc::connect {

std::string Wallet::add_key(const crypto::KeyPair& key) {
  std::string id = "key-" + std::to_string(next_key_++);
  keys_.emplace(id, key);
  return id;
}

const crypto::KeyPair& Wallet::key(const std::string& key_id) const {
  auto it = keys_.find(key_id);
  if (it == keys_.end()) throw ConnectError(ConnectErrc::UnknownKey, key_id);
  return it->second;
}

void Wallet::set_did_key(const Did& did, const std::string& key_id) {
  for (auto& d : dids_)
    if (d.did == did) d.key_id = key_id;
}

const OwnedDid* Wallet::find_did(const std::string& did) const {
  for (const auto& d : dids_)
    if (d.did.str() == did) return &d;
  return nullptr;
}

std::optional<OwnedDid> Wallet::public_did() const {
  for (const auto& d : dids_)
    if (d.did.is_public()) return d;
  return std::nullopt;
}

const mpz_class& Wallet::ensure_link_secret(crypto::Rng& rng) {
  if (!link_secret_) link_secret_ = rng.nonzero_below(params().q);
  return *link_secret_;
}

const mpz_class& Wallet::link_secret() const {
  if (!link_secret_) throw ConnectError(ConnectErrc::NoLinkSecret, owner_);
  return *link_secret_;
}

Connection& Wallet::connection(const std::string& id) {
  auto it = connections_.find(id);
  if (it == connections_.end()) throw ConnectError(ConnectErrc::UnknownConnection, id);
  return it->second;
}

const Connection& Wallet::connection(const std::string& id) const {
  auto it = connections_.find(id);
  if (it == connections_.end()) throw ConnectError(ConnectErrc::UnknownConnection, id);
  return it->second;
}

Bytes Wallet::to_bytes() const {
  Writer w;
  w.str("Wallet").str(owner_).str(crypto::to_string(profile_)).u32(next_key_);
  w.count(keys_.size());
  for (const auto& [id, k] : keys_) w.str(id).bigint(k.sk).bigint(k.pk);
  w.count(dids_.size());
  for (const auto& d : dids_) w.str(d.did.str()).str(d.key_id);
  w.boolean(link_secret_.has_value());
  if (link_secret_) w.bigint(*link_secret_);
  w.count(credentials_.size());
  for (const auto& c : credentials_) c.encode(w);
  w.count(pending_issuance_.size());
  for (const auto& [nonce, p] : pending_issuance_) {
    w.str(nonce).str(p.cred_def_id).count(p.preview.size());
    for (const auto& [k, v] : p.preview) w.str(k).str(v);
    w.bigint(p.blinding);
  }
  w.count(pending_invitations_.size());
  for (const auto& [nonce, key_id] : pending_invitations_) w.str(nonce).str(key_id);
  w.count(connections_.size());
  for (const auto& [id, c] : connections_) c.encode(w);
  w.count(disclosures_.size());
  for (const auto& d : disclosures_) {
    w.u64(d.tick).str(d.verifier).str(d.nonce_hex).count(d.revealed.size());
    for (const auto& a : d.revealed) w.str(a);
  }
  return std::move(w).take();
}

Wallet Wallet::from_bytes(ByteView b) {
  Reader r(b);
  if (r.str() != "Wallet") throw CodecError(CodecErrc::BadTag, "not a wallet");
  auto owner = r.str();
  Wallet w(owner, crypto::profile_from_string(r.str()));
  w.next_key_ = r.u32();
  auto n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    auto id = r.str();
    crypto::KeyPair k;
    k.sk = r.bigint();
    k.pk = r.bigint();
    w.keys_.emplace(id, k);
  }
  n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    auto did = Did::parse(r.str());
    if (!did) throw CodecError(CodecErrc::BadValue, "malformed DID");
    w.dids_.push_back({*did, r.str()});
  }
  if (r.boolean()) w.link_secret_ = r.bigint();
  n = r.count();
  for (std::size_t i = 0; i < n; ++i) w.credentials_.push_back(anoncred::HeldCredential::decode(r));
  n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    auto nonce = r.str();
    PendingIssuance p;
    p.cred_def_id = r.str();
    auto m = r.count();
    for (std::size_t j = 0; j < m; ++j) {
      auto k = r.str();
      p.preview[k] = r.str();
    }
    p.blinding = r.bigint();
    w.pending_issuance_.emplace(nonce, std::move(p));
  }
  n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    auto nonce = r.str();
    w.pending_invitations_[nonce] = r.str();
  }
  n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    auto c = Connection::decode(r);
    w.connections_.emplace(c.id(), std::move(c));
  }
  n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    DisclosureRecord d;
    d.tick = r.u64();
    d.verifier = r.str();
    d.nonce_hex = r.str();
    auto m = r.count();
    for (std::size_t j = 0; j < m; ++j) d.revealed.push_back(r.str());
    w.disclosures_.push_back(std::move(d));
  }
  r.expect_done();
  return w;
}

Did create_public_did(Wallet& wallet, ledger::Ledger& ledger,
                      const std::vector<ServiceEndpoint>& endpoints, crypto::Rng& rng) {
  const auto& gp = wallet.params();
  auto key = crypto::keygen(gp, rng);
  DidDocument doc;
  doc.did = Did::public_for_key(ledger.id(), key.pk);
  doc.verification_keys.push_back({"key-1", key.pk});
  doc.service_endpoints = endpoints;
  ledger.append(ledger::LedgerTransaction::make(ledger::TxKind::DidDocRegistration, doc, doc.did, gp, key, rng));
  auto key_id = wallet.add_key(key);
  wallet.add_did({doc.did, key_id});
  return doc.did;
}

void rotate_public_did_key(Wallet& wallet, ledger::Ledger& ledger, const Did& did, crypto::Rng& rng) {
  const auto* owned = wallet.find_did(did.str());
  if (owned == nullptr) throw ConnectError(ConnectErrc::UnknownKey, "wallet does not control " + did.str());
  const auto& gp = wallet.params();
  auto current = ledger.did_document(did.str());
  if (!current) throw ConnectError(ConnectErrc::ResolutionFailed, did.str());
  auto old_key = wallet.key(owned->key_id);
  auto fresh = crypto::keygen(gp, rng);
  DidDocument doc = *current;
  doc.verification_keys = {{"key-" + std::to_string(ledger.did_history(did.str()).size() + 1), fresh.pk}};
  doc.attestations.clear();
  ledger.append(ledger::LedgerTransaction::make(ledger::TxKind::DidDocRegistration, doc, doc.did, gp, old_key, rng));
  wallet.set_did_key(did, wallet.add_key(fresh));
}

KeyAttestation attest_key(const Wallet& attester, const DidDocument& subject, const std::string& key_id,
                          crypto::Rng& rng) {
  auto pub = attester.public_did();
  if (!pub) throw ConnectError(ConnectErrc::UnknownKey, "attester has no public DID");
  const auto* key = subject.key(key_id);
  if (key == nullptr) throw ConnectError(ConnectErrc::UnknownKey, key_id);
  return {key_id, pub->did.str(),
          crypto::sign(attester.params(), attester.key(pub->key_id), attestation_message(subject.did, *key), rng)};
}

void publish_attestation(Wallet& subject, ledger::Ledger& ledger, const Did& did,
                         const KeyAttestation& attestation, crypto::Rng& rng) {
  const auto* owned = subject.find_did(did.str());
  if (owned == nullptr) throw ConnectError(ConnectErrc::UnknownKey, "wallet does not control " + did.str());
  auto doc = ledger.did_document(did.str());
  if (!doc) throw ConnectError(ConnectErrc::ResolutionFailed, did.str());
  doc->attestations.push_back(attestation);
  ledger.append(ledger::LedgerTransaction::make(ledger::TxKind::DidDocRegistration, *doc, did, subject.params(),
                                                subject.key(owned->key_id), rng));
}

Did create_peer_did(Wallet& wallet, crypto::Rng& rng) {
  auto key = crypto::keygen(wallet.params(), rng);
  auto did = Did::peer_for_key(key.pk);
  auto key_id = wallet.add_key(key);
  wallet.add_did({did, key_id});
  return did;
}

namespace {

constexpr char kMagic[8] = {'S', 'S', 'I', 'K', 'Y', 'C', 'W', 'B'};
constexpr std::uint16_t kFormatVersion = 1;
constexpr std::uint8_t kKdfPbkdf2Sha256 = 1;

std::array<std::uint8_t, 8> key_check(const crypto::Key32& key) {
  auto d = crypto::tagged_hash("ssikyc/wallet-key-check", key);
  std::array<std::uint8_t, 8> out{};
  std::copy_n(d.begin(), 8, out.begin());
  return out;
}

}  // namespace

Bytes export_wallet(const Wallet& wallet, std::string_view passphrase, crypto::Rng& rng) {
  return export_wallet(wallet, passphrase, rng,
                       wallet.profile() == crypto::Profile::Test ? kTestKdfIterations
                                                                 : kDefaultKdfIterations);
}

Bytes export_wallet(const Wallet& wallet, std::string_view passphrase, crypto::Rng& rng,
                    std::uint32_t iterations) {
  auto salt = rng.salt();
  auto nonce_bytes = rng.bytes(12);
  crypto::Nonce12 nonce{};
  std::copy(nonce_bytes.begin(), nonce_bytes.end(), nonce.begin());
  auto key = crypto::derive_key(passphrase, salt, iterations);

  Writer header;
  header.raw(as_bytes(std::string_view(kMagic, 8)))
      .u16(kFormatVersion)
      .u8(kKdfPbkdf2Sha256)
      .u32(iterations)
      .fixed(salt)
      .fixed(nonce)
      .fixed(key_check(key));
  auto sealed = crypto::aead_seal(key, nonce, header.data(), wallet.to_bytes());
  Writer out;
  out.raw(header.data()).bytes(sealed);
  return std::move(out).take();
}

Wallet import_wallet(ByteView backup, std::string_view passphrase) {
  crypto::Key32 key{};
  crypto::Nonce12 nonce{};
  Bytes sealed;
  std::size_t header_len = 0;
  try {
    Reader r(backup);
    auto magic = r.raw(8);
    if (!std::equal(magic.begin(), magic.end(), kMagic))
      throw ConnectError(ConnectErrc::CorruptBackup, "bad magic");
    if (r.u16() != kFormatVersion) throw ConnectError(ConnectErrc::CorruptBackup, "unsupported format version");
    if (r.u8() != kKdfPbkdf2Sha256) throw ConnectError(ConnectErrc::CorruptBackup, "unsupported kdf");
    auto iterations = r.u32();
    if (iterations == 0 || iterations > 10'000'000)
      throw ConnectError(ConnectErrc::CorruptBackup, "implausible iteration count");
    auto salt = r.fixed<16>();
    nonce = r.fixed<12>();
    auto check = r.fixed<8>();
    header_len = backup.size() - r.remaining();
    sealed = r.bytes();
    r.expect_done();
    key = crypto::derive_key(passphrase, salt, iterations);
    if (key_check(key) != check) throw ConnectError(ConnectErrc::WrongPassphrase, "key check mismatch");
  } catch (const CodecError& e) {
    throw ConnectError(ConnectErrc::CorruptBackup, e.what());
  }
  auto plain = crypto::aead_open(key, nonce, backup.first(header_len), sealed);
  if (!plain) throw ConnectError(ConnectErrc::CorruptBackup, "ciphertext failed authentication");
  try {
    return Wallet::from_bytes(*plain);
  } catch (const std::exception& e) {
    throw ConnectError(ConnectErrc::CorruptBackup, e.what());
  }
}

}  // namespace ssikyc::connect
