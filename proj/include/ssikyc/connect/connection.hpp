#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ssikyc/codec.hpp"
#include "ssikyc/connect/did.hpp"
#include "ssikyc/connect/errors.hpp"
#include "ssikyc/crypto/aead.hpp"
#include "ssikyc/crypto/group.hpp"
#include "ssikyc/crypto/schnorr.hpp"

namespace ssikyc::connect {

// One side of a pairwise relationship. Both sides hold the same shared_key;
// each direction encrypts under its own key derived from it.
struct Connection {
  Did my_peer_did;
  Did their_peer_did;
  crypto::KeyPair my_key;
  mpz_class their_pk;
  crypto::Key32 shared_key{};
  std::uint64_t send_seq = 0;
  std::uint64_t recv_seq = 0;
  std::string their_endpoint;
  std::string their_public_did;  // empty when the counterparty has none
  bool subscribe_updates = false;

  std::string id() const { return my_peer_did.str(); }

  bool operator==(const Connection&) const = default;
  void encode(Writer& w) const;
  static Connection decode(Reader& r);
};

// Authenticated-encrypted message on a connection. The associated data is
// canonical(sender peer DID, seq); the AEAD nonce is seq.
struct Envelope {
  std::string sender_did;
  std::uint64_t seq = 0;
  Bytes ciphertext;

  bool operator==(const Envelope&) const = default;
  Bytes to_bytes() const;
  static Envelope from_bytes(ByteView b);
};

Envelope send(Connection& conn, ByteView plaintext);
// Rejects seq <= last accepted (ReplayDetected) and any authentication
// failure (AuthFailure). State advances only on success.
Bytes recv(Connection& conn, const Envelope& envelope);

// Relay with no keys: it queues whatever bytes it is handed.
class CloudMailbox {
 public:
  explicit CloudMailbox(std::string address) : address_(std::move(address)) {}

  const std::string& address() const { return address_; }
  void push(Bytes item) { queue_.push_back(std::move(item)); }
  std::vector<Bytes> drain();
  const std::deque<Bytes>& queued() const { return queue_; }

 private:
  std::string address_;
  std::deque<Bytes> queue_;
};

// Address book of every mailbox in the simulation.
class MailboxNetwork {
 public:
  CloudMailbox& open(const std::string& address);
  CloudMailbox& at(const std::string& address);
  bool has(const std::string& address) const { return boxes_.count(address) != 0; }
  void deliver(const std::string& address, Bytes item);
  std::uint64_t delivered() const { return delivered_; }
  // Every item ever delivered, in order; lets tests audit relay contents.
  const std::vector<std::pair<std::string, Bytes>>& log() const { return log_; }

 private:
  std::map<std::string, CloudMailbox> boxes_;
  std::uint64_t delivered_ = 0;
  std::vector<std::pair<std::string, Bytes>> log_;
};

}  // namespace ssikyc::connect
