#include "ssikyc/connect/connection.hpp"

#include "ssikyc/crypto/hash.hpp"

namespace ssikyc::connect {

std::string_view to_string(ConnectErrc code) {
  switch (code) {
    case ConnectErrc::ResolutionFailed: return "ResolutionFailed";
    case ConnectErrc::AttestationInvalid: return "AttestationInvalid";
    case ConnectErrc::HandshakeMismatch: return "HandshakeMismatch";
    case ConnectErrc::AuthFailure: return "AuthFailure";
    case ConnectErrc::ReplayDetected: return "ReplayDetected";
    case ConnectErrc::WrongPassphrase: return "WrongPassphrase";
    case ConnectErrc::CorruptBackup: return "CorruptBackup";
    case ConnectErrc::UnknownConnection: return "UnknownConnection";
    case ConnectErrc::UnknownKey: return "UnknownKey";
    case ConnectErrc::UnknownInvitation: return "UnknownInvitation";
    case ConnectErrc::NoLinkSecret: return "NoLinkSecret";
  }
  return "Unknown";
}

namespace {

Did decode_did(Reader& r) {
  auto d = Did::parse(r.str());
  if (!d) throw CodecError(CodecErrc::BadValue, "malformed DID");
  return *d;
}

crypto::Key32 direction_key(const crypto::Key32& shared, const std::string& sender) {
  Writer w;
  w.fixed(shared).str(sender);
  return crypto::tagged_hash("ssikyc/channel-key", w.data());
}

crypto::Nonce12 seq_nonce(std::uint64_t seq) {
  crypto::Nonce12 n{};
  for (int i = 0; i < 8; ++i) n[11 - i] = static_cast<std::uint8_t>(seq >> (8 * i));
  return n;
}

Bytes associated_data(const std::string& sender, std::uint64_t seq) {
  Writer w;
  w.str(sender).u64(seq);
  return std::move(w).take();
}

}  // namespace

void Connection::encode(Writer& w) const {
  w.str(my_peer_did.str()).str(their_peer_did.str()).bigint(my_key.sk).bigint(my_key.pk);
  w.bigint(their_pk).fixed(shared_key).u64(send_seq).u64(recv_seq);
  w.str(their_endpoint).str(their_public_did).boolean(subscribe_updates);
}

Connection Connection::decode(Reader& r) {
  Connection c;
  c.my_peer_did = decode_did(r);
  c.their_peer_did = decode_did(r);
  c.my_key.sk = r.bigint();
  c.my_key.pk = r.bigint();
  c.their_pk = r.bigint();
  c.shared_key = r.fixed<32>();
  c.send_seq = r.u64();
  c.recv_seq = r.u64();
  c.their_endpoint = r.str();
  c.their_public_did = r.str();
  c.subscribe_updates = r.boolean();
  return c;
}

Bytes Envelope::to_bytes() const {
  Writer w;
  w.u8(2).str(sender_did).u64(seq).bytes(ciphertext);
  return std::move(w).take();
}

Envelope Envelope::from_bytes(ByteView b) {
  Reader r(b);
  if (r.u8() != 2) throw CodecError(CodecErrc::BadTag, "not a channel envelope");
  Envelope e;
  e.sender_did = r.str();
  e.seq = r.u64();
  e.ciphertext = r.bytes();
  r.expect_done();
  return e;
}

Envelope send(Connection& conn, ByteView plaintext) {
  Envelope e;
  e.sender_did = conn.my_peer_did.str();
  e.seq = ++conn.send_seq;
  e.ciphertext = crypto::aead_seal(direction_key(conn.shared_key, e.sender_did), seq_nonce(e.seq),
                                   associated_data(e.sender_did, e.seq), plaintext);
  return e;
}

Bytes recv(Connection& conn, const Envelope& envelope) {
  if (envelope.sender_did != conn.their_peer_did.str())
    throw ConnectError(ConnectErrc::AuthFailure, "envelope from unexpected sender");
  if (envelope.seq <= conn.recv_seq)
    throw ConnectError(ConnectErrc::ReplayDetected,
                       "seq " + std::to_string(envelope.seq) + " <= " + std::to_string(conn.recv_seq));
  auto plain = crypto::aead_open(direction_key(conn.shared_key, envelope.sender_did),
                                 seq_nonce(envelope.seq),
                                 associated_data(envelope.sender_did, envelope.seq),
                                 envelope.ciphertext);
  if (!plain) throw ConnectError(ConnectErrc::AuthFailure, "envelope failed authentication");
  conn.recv_seq = envelope.seq;
  return *plain;
}

std::vector<Bytes> CloudMailbox::drain() {
  std::vector<Bytes> out(std::make_move_iterator(queue_.begin()), std::make_move_iterator(queue_.end()));
  queue_.clear();
  return out;
}

CloudMailbox& MailboxNetwork::open(const std::string& address) {
  return boxes_.try_emplace(address, address).first->second;
}

CloudMailbox& MailboxNetwork::at(const std::string& address) {
  auto it = boxes_.find(address);
  if (it == boxes_.end()) throw ConnectError(ConnectErrc::ResolutionFailed, "no mailbox at " + address);
  return it->second;
}

void MailboxNetwork::deliver(const std::string& address, Bytes item) {
  log_.emplace_back(address, item);
  at(address).push(std::move(item));
  ++delivered_;
}

}  // namespace ssikyc::connect
