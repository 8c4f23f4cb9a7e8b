#include "doctest.h"
#include "ssikyc/connect/exchange.hpp"
#include "ssikyc/connect/wallet.hpp"
#include "ssikyc/ledger/ledger.hpp"

using namespace ssikyc;
using namespace ssikyc::connect;

namespace {

Bytes text(std::string_view s) { return Bytes(s.begin(), s.end()); }

struct World {
  crypto::Profile profile;
  LogicalClock clock;
  crypto::Rng rng;
  ledger::Ledger l1;
  ledger::Ledger l2;
  ledger::Resolver resolver;
  MailboxNetwork network;
  Wallet bank{"bank", profile};
  Wallet alice{"alice", profile};

  explicit World(std::uint64_t seed = 1, crypto::Profile p = crypto::Profile::Default)
      : profile(p),
        rng(seed),
        l1("L1", crypto::GroupParams::for_profile(p), clock),
        l2("L2", crypto::GroupParams::for_profile(p), clock) {
    resolver.add(l1);
    resolver.add(l2);
    network.open("mailbox://bank");
    network.open("mailbox://alice");
    create_public_did(bank, l1, {{"kyc", "mailbox://bank"}}, rng);
  }

  std::pair<Connection, Connection> handshake(MailboxNetwork* net = nullptr, HandshakeOptions opts = {}) {
    opts.resolver = &resolver;
    auto inv = create_invitation(bank, "mailbox://bank", rng);
    return connect::connect({bank, "mailbox://bank"}, {alice, "mailbox://alice"}, inv, opts, rng, net);
  }
};

}  // namespace

TEST_CASE("public DIDs") {
  World w;
  auto did = w.bank.public_did()->did;
  CHECK(did.is_public());
  CHECK(did.str().rfind("did:sim:L1:", 0) == 0);
  CHECK(w.resolver.resolve(did.str()).service_endpoints[0].address == "mailbox://bank");
  CHECK(Did::parse(did.str()) == did);

  Wallet other("other", w.profile);
  auto did2 = create_public_did(other, w.l2, {}, w.rng);
  CHECK(w.resolver.resolve(did2.str()).did == did2);
  CHECK(w.resolver.resolve(did.str()).did == did);

  rotate_public_did_key(w.bank, w.l1, did, w.rng);
  auto doc = w.resolver.resolve(did.str());
  CHECK(doc.verification_keys.size() == 1);
  CHECK(doc.verification_keys[0].pk == w.bank.key(w.bank.public_did()->key_id).pk);
  CHECK(w.l1.did_history(did.str()).size() == 2);
}

TEST_CASE("peer DIDs stay off ledger") {
  World w;
  auto blocks = w.l1.blocks().size();
  auto a = create_peer_did(w.alice, w.rng);
  auto b = create_peer_did(w.alice, w.rng);
  CHECK(a != b);
  CHECK_FALSE(a.is_public());
  CHECK(w.l1.blocks().size() == blocks);
  CHECK(w.l2.blocks().size() == 1);
  CHECK_THROWS_WITH_AS(w.resolver.resolve(a.str()), doctest::Contains("PeerDidNotResolvable"), ledger::LedgerError);
}

TEST_CASE("DID exchange") {
  World w;
  auto appends = w.resolver.total_appends();
  auto [bank_side, alice_side] = w.handshake();
  CHECK(bank_side.shared_key == alice_side.shared_key);
  CHECK(bank_side.their_peer_did == alice_side.my_peer_did);
  CHECK(alice_side.their_peer_did == bank_side.my_peer_did);
  CHECK(alice_side.their_public_did == w.bank.public_did()->did.str());
  CHECK_FALSE(bank_side.my_peer_did.is_public());
  CHECK(w.resolver.total_appends() == appends);
  CHECK(w.bank.connections().size() == 1);
  CHECK(w.alice.connections().size() == 1);

  SUBCASE("invitation survives its QR text encoding") {
    auto inv = create_invitation(w.bank, "mailbox://bank", w.rng);
    CHECK(Invitation::from_text(inv.to_text()) == inv);
  }
}

TEST_CASE("handshake through cloud mailboxes matches direct delivery") {
  World direct(42), relayed(42);
  auto d = direct.handshake();
  auto r = relayed.handshake(&relayed.network);
  CHECK(d.first == r.first);
  CHECK(d.second == r.second);
  CHECK(direct.alice.to_bytes() == relayed.alice.to_bytes());
  CHECK(relayed.network.delivered() == 2);
}

TEST_CASE("tampered connection response") {
  World w;
  auto inv = create_invitation(w.bank, "mailbox://bank", w.rng);
  HandshakeOptions opts;
  opts.resolver = &w.resolver;
  auto [pending, request] = begin_connection(w.alice, inv, "mailbox://alice", opts, w.rng);
  auto [bank_conn, sealed] = accept_connection(w.bank, request, "mailbox://bank", w.rng);

  auto plain = open_sealed(w.alice.params(), pending.my_key.sk, sealed);
  REQUIRE(plain.has_value());
  Reader r(*plain);
  auto resp = ConnectionResponse::decode(r);
  resp.inviter_pk = crypto::keygen(w.alice.params(), w.rng).pk;
  Writer out;
  resp.encode(out);
  auto forged = seal_to(w.alice.params(), pending.my_key.pk, pending.my_did.str(), out.data(), w.rng);
  CHECK_THROWS_WITH_AS(complete_connection(w.alice, pending, forged), doctest::Contains("HandshakeMismatch"), ConnectError);

  // Untampered still completes.
  CHECK(complete_connection(w.alice, pending, sealed).shared_key == bank_conn.shared_key);
}

TEST_CASE("invitation authenticity") {
  World w;
  SUBCASE("unknown ledger") {
    auto inv = create_invitation(w.bank, "mailbox://bank", w.rng);
    inv.inviter_public_did = "did:sim:L9:" + w.bank.public_did()->did.idstring;
    HandshakeOptions opts;
    opts.resolver = &w.resolver;
    CHECK_THROWS_WITH_AS(begin_connection(w.alice, inv, "mailbox://alice", opts, w.rng),
                         doctest::Contains("ResolutionFailed"), ConnectError);
  }
  SUBCASE("key substituted in the QR code") {
    auto inv = create_invitation(w.bank, "mailbox://bank", w.rng);
    inv.recipient_key = crypto::keygen(w.alice.params(), w.rng).pk;
    HandshakeOptions opts;
    opts.resolver = &w.resolver;
    CHECK_THROWS_WITH_AS(begin_connection(w.alice, inv, "mailbox://alice", opts, w.rng),
                         doctest::Contains("HandshakeMismatch"), ConnectError);
  }
  SUBCASE("trusted attester") {
    Wallet tsp("tsp", w.profile);
    auto tsp_did = create_public_did(tsp, w.l2, {}, w.rng);
    HandshakeOptions opts;
    opts.trusted_attester = tsp_did.str();
    Trace trace(w.clock);
    opts.trace = &trace;

    CHECK_THROWS_WITH_AS(w.handshake(nullptr, opts), doctest::Contains("AttestationInvalid"), ConnectError);

    auto bank_did = w.bank.public_did()->did;
    auto doc = w.resolver.resolve(bank_did.str());
    publish_attestation(w.bank, w.l1, bank_did, attest_key(tsp, doc, "key-1", w.rng), w.rng);
    auto [b, a] = w.handshake(nullptr, opts);
    CHECK(a.shared_key == b.shared_key);
    bool attested = false;
    for (const auto& e : trace.events()) attested = attested || e.event == "invitation.attested";
    CHECK(attested);

    // An attestation from someone else does not count.
    Wallet rogue("rogue", w.profile);
    create_public_did(rogue, w.l2, {}, w.rng);
    opts.trusted_attester = rogue.public_did()->did.str();
    CHECK_THROWS_WITH_AS(w.handshake(nullptr, opts), doctest::Contains("AttestationInvalid"), ConnectError);
  }
  SUBCASE("trust on first use is traced") {
    Trace trace(w.clock);
    HandshakeOptions opts;
    opts.trace = &trace;
    w.handshake(nullptr, opts);
    CHECK(trace.events().at(1).event == "invitation.tofu");
  }
}

TEST_CASE("encrypted channel") {
  World w;
  w.handshake();
  auto& bank_conn = w.bank.connection(w.bank.connections().begin()->first);
  auto& alice_conn = w.alice.connection(w.alice.connections().begin()->first);

  auto e1 = send(bank_conn, text("hello"));
  CHECK(recv(alice_conn, e1) == text("hello"));
  CHECK_THROWS_WITH_AS(recv(alice_conn, e1), doctest::Contains("ReplayDetected"), ConnectError);

  auto e2 = send(bank_conn, text("second"));
  auto e3 = send(bank_conn, text("third"));
  CHECK(recv(alice_conn, e3) == text("third"));
  CHECK_THROWS_WITH_AS(recv(alice_conn, e2), doctest::Contains("ReplayDetected"), ConnectError);

  auto e4 = send(bank_conn, text("payload"));
  auto flipped = e4;
  flipped.ciphertext[2] ^= 0x01;
  CHECK_THROWS_WITH_AS(recv(alice_conn, flipped), doctest::Contains("AuthFailure"), ConnectError);
  // Failed delivery leaves state unchanged: the genuine envelope still opens.
  CHECK(recv(alice_conn, e4) == text("payload"));

  // Both directions work and use distinct keys.
  auto back = send(alice_conn, text("ack"));
  CHECK(recv(bank_conn, back) == text("ack"));
  CHECK(Envelope::from_bytes(back.to_bytes()) == back);

  // Reflection: an envelope sent by the bank is not accepted by the bank.
  auto reflected = send(bank_conn, text("x"));
  CHECK_THROWS_WITH_AS(recv(bank_conn, reflected), doctest::Contains("AuthFailure"), ConnectError);
}

TEST_CASE("mailboxes only hold ciphertext") {
  World w;
  w.handshake(&w.network);
  auto& bank_conn = w.bank.connection(w.bank.connections().begin()->first);
  for (int i = 0; i < 5; ++i)
    w.network.deliver(bank_conn.their_endpoint, send(bank_conn, text("secret-" + std::to_string(i))).to_bytes());

  const auto& box = w.network.at("mailbox://alice");
  REQUIRE(box.queued().size() == 5);
  Wallet mallory("mallory", w.profile);
  auto key = crypto::keygen(mallory.params(), w.rng);
  for (const auto& item : box.queued()) {
    auto env = Envelope::from_bytes(item);
    std::string body(env.ciphertext.begin(), env.ciphertext.end());
    CHECK(body.find("secret") == std::string::npos);
    // A key the relay might guess: derived from a foreign DH exchange.
    Connection guess = bank_conn;
    guess.their_peer_did = bank_conn.my_peer_did;
    guess.shared_key = crypto::agree(mallory.params(), key.sk, bank_conn.their_pk);
    CHECK_THROWS_AS(recv(guess, env), ConnectError);
  }
  // The handshake messages relayed earlier are sealed too.
  for (const auto& [address, item] : w.network.log()) {
    std::string body(item.begin(), item.end());
    CHECK(body.find("mailbox://") == std::string::npos);
  }
}

TEST_CASE("envelopes are byte-identical for the same seed") {
  auto run = [] {
    World w(77);
    w.handshake(&w.network);
    auto& bank_conn = w.bank.connection(w.bank.connections().begin()->first);
    w.network.deliver(bank_conn.their_endpoint, send(bank_conn, text("offer")).to_bytes());
    return w.network.log();
  };
  CHECK(run() == run());
}

TEST_CASE("link secret is created once") {
  World w;
  crypto::Rng rng(1);
  auto first = w.alice.ensure_link_secret(rng);
  for (int i = 0; i < 5; ++i) CHECK(w.alice.ensure_link_secret(rng) == first);
  CHECK_THROWS_AS(Wallet("x", crypto::Profile::Test).link_secret(), ConnectError);
}

TEST_CASE("wallet backup") {
  World w(9, crypto::Profile::Test);
  w.handshake();
  w.alice.ensure_link_secret(w.rng);
  w.alice.log_disclosure({3, "did:peer:abc", "00ff", {"name"}});

  auto backup = export_wallet(w.alice, "correct horse", w.rng);
  auto restored = import_wallet(backup, "correct horse");
  CHECK(restored == w.alice);
  CHECK(restored.to_bytes() == w.alice.to_bytes());

  CHECK_THROWS_WITH_AS(import_wallet(backup, "wrong"), doctest::Contains("WrongPassphrase"), ConnectError);

  auto corrupt = backup;
  corrupt.back() ^= 0x80;
  CHECK_THROWS_WITH_AS(import_wallet(corrupt, "correct horse"), doctest::Contains("CorruptBackup"), ConnectError);
  auto truncated = Bytes(backup.begin(), backup.begin() + 20);
  CHECK_THROWS_WITH_AS(import_wallet(truncated, "correct horse"), doctest::Contains("CorruptBackup"), ConnectError);
  auto bad_magic = backup;
  bad_magic[0] = 'X';
  CHECK_THROWS_WITH_AS(import_wallet(bad_magic, "correct horse"), doctest::Contains("CorruptBackup"), ConnectError);
  // Header bytes are authenticated: changing the iteration count breaks the key check or the tag.
  auto bumped = backup;
  bumped[14] ^= 0x01;
  CHECK_THROWS_AS(import_wallet(bumped, "correct horse"), ConnectError);

  SUBCASE("iteration count per profile") {
    Reader r(backup);
    r.raw(8);
    r.u16();
    r.u8();
    CHECK(r.u32() == kTestKdfIterations);
    Wallet d("d", crypto::Profile::Default);
    auto b2 = export_wallet(d, "pw", w.rng);
    Reader r2(b2);
    r2.raw(11);
    CHECK(r2.u32() == kDefaultKdfIterations);
    CHECK(import_wallet(b2, "pw") == d);
  }
}
