#include <algorithm>
#include <set>

#include "doctest.h"
#include "ssikyc/kyc/bank.hpp"
#include "ssikyc/kyc/errors.hpp"

using namespace ssikyc;
using namespace ssikyc::kyc;

namespace {

using S = CaseState;

// The documented case graph, written out edge by edge.
const std::set<std::pair<S, S>> kEdges = {
    {S::Initiated, S::ConnectionEstablished},
    {S::ConnectionEstablished, S::DocumentsRequested},
    {S::ConnectionEstablished, S::ProofVerified},
    {S::DocumentsRequested, S::IdentityVerified},
    {S::ProofVerified, S::DocumentsRequested},
    {S::ProofVerified, S::Screened},
    {S::IdentityVerified, S::Screened},
    {S::Screened, S::RiskAssessed},
    {S::RiskAssessed, S::EddRequested},
    {S::RiskAssessed, S::AccountOpened},
    {S::EddRequested, S::AccountOpened},
    {S::AccountOpened, S::Monitoring},
    {S::Initiated, S::Rejected},
    {S::ConnectionEstablished, S::Rejected},
    {S::DocumentsRequested, S::Rejected},
    {S::IdentityVerified, S::Rejected},
    {S::ProofVerified, S::Rejected},
    {S::Screened, S::Rejected},
    {S::RiskAssessed, S::Rejected},
    {S::EddRequested, S::Rejected},
};

const std::vector<S> kAllStates = {S::Initiated,    S::ConnectionEstablished, S::DocumentsRequested, S::IdentityVerified,
                                   S::ProofVerified, S::Screened,             S::RiskAssessed,       S::EddRequested,
                                   S::AccountOpened, S::Rejected,             S::Monitoring};

// Replays a case history against the edge list.
bool history_follows_graph(const KycCase& c) {
  const auto& h = c.history();
  if (h.empty() || h.front() != S::Initiated) return false;
  for (std::size_t i = 1; i < h.size(); ++i)
    if (!kEdges.count({h[i - 1], h[i]})) return false;
  auto opened = std::find(h.begin(), h.end(), S::AccountOpened);
  if (opened != h.end()) {
    if (std::find(h.begin(), opened, S::Screened) == opened) return false;
    if (std::find(h.begin(), opened, S::RiskAssessed) == opened) return false;
  }
  return true;
}

std::size_t levenshtein_oracle(const std::string& a, const std::string& b) {
  // Full-matrix dynamic programme.
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return d[a.size()][b.size()];
}

bool contains_bytes(ByteView hay, std::string_view needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

AnalogDocument passport(Tick valid = 5000, bool authentic = true) {
  return {DocType::Passport, {{"name", "Alice Example"}, {"dob", "1990-04-01"}, {"id_number", "P1234567"}}, authentic, valid};
}
AnalogDocument utility_bill(Tick valid = 5000) {
  return {DocType::UtilityBill, {{"name", "Alice Example"}, {"address", "1 Main Street"}}, true, valid};
}
AnalogDocument income_statement() {
  return {DocType::IncomeStatement, {{"name", "Alice Example"}, {"income", "250000"}}, true, 5000};
}

struct World {
  crypto::Profile profile = crypto::Profile::Default;
  LogicalClock clock;
  crypto::Rng rng;
  ledger::Ledger l1{"L1", crypto::GroupParams::for_profile(profile), clock};
  ledger::Ledger l2{"L2", crypto::GroupParams::for_profile(profile), clock};
  ledger::Resolver resolver;
  connect::MailboxNetwork network;
  Trace trace{clock};
  Environment env{clock, resolver, network, rng, &trace, std::nullopt};
  Bank bank_a{"bank-a", profile, {}};
  Bank bank_b{"bank-b", profile, {}};
  connect::Wallet gov{"gov", profile};
  connect::Wallet employer{"employer", profile};
  std::optional<anoncred::Issuer> gov_issuer;
  std::optional<anoncred::Issuer> employer_issuer;
  anoncred::CredentialDefinition gov_def;
  anoncred::CredentialDefinition income_def;
  Customer alice{"alice", profile};

  explicit World(std::uint64_t seed = 11) : rng(seed) {
    resolver.add(l1);
    resolver.add(l2);
    bank_a.bootstrap(l1, rng);
    bank_b.bootstrap(l2, rng);
    connect::create_public_did(gov, l2, {}, rng);
    connect::create_public_did(employer, l2, {}, rng);
    gov_issuer.emplace(gov);
    employer_issuer.emplace(employer);
    auto gs = anoncred::register_schema(*gov_issuer, l2, "gov-id", "1.0", {"name", "dob", "id_number"}, rng);
    gov_def = anoncred::register_cred_def(*gov_issuer, l2, gs, "gov-id", false, rng);
    auto is = anoncred::register_schema(*employer_issuer, l2, "income", "1.0", {"income", "employer"}, rng);
    income_def = anoncred::register_cred_def(*employer_issuer, l2, is, "income", false, rng);
    for (Bank* b : {&bank_a, &bank_b}) {
      b->config.accept_kyc = {bank_a.kyc_cred_def_id(), bank_b.kyc_cred_def_id()};
      b->config.accept_partial = {gov_def.cred_def_id};
      b->config.accept_income = {income_def.cred_def_id};
    }
    alice.documents = {passport(), utility_bill()};
    clock.advance(1);
  }

  void give_direct(anoncred::Issuer& issuer, const std::string& def, Customer& c,
                   const std::map<std::string, std::string>& values) {
    c.wallet.ensure_link_secret(rng);
    auto offer = anoncred::create_offer(issuer, def, values, 1000, rng);
    auto request = anoncred::accept_offer(c.wallet, offer, rng);
    anoncred::store_issued(c.wallet, anoncred::issue(issuer, request, rng), resolver);
  }
  void give_gov_id(Customer& c) {
    give_direct(*gov_issuer, gov_def.cred_def_id, c,
                {{"name", "Alice Example"}, {"dob", "1990-04-01"}, {"id_number", "P1234567"}});
  }
  void give_income(Customer& c) {
    give_direct(*employer_issuer, income_def.cred_def_id, c, {{"income", "250000"}, {"employer", "acme"}});
  }
  void list_pep(const std::string& name) { bank_a.lists.add(ListKind::Pep, name); }
};

}  // namespace

TEST_CASE("case state graph matches the documented edge list") {
  for (auto from : kAllStates)
    for (auto to : kAllStates) CHECK(allowed_transition(from, to) == (kEdges.count({from, to}) == 1));
  for (auto s : kAllStates) CHECK(case_state_from_string(to_string(s)) == s);
}

TEST_CASE("case transitions are enforced and audited") {
  KycCase c("c1", "alice", 3);
  CHECK_THROWS_AS(c.transition(S::Screened, 4), KycError);
  c.transition(S::ConnectionEstablished, 4);
  c.transition(S::ProofVerified, 5);
  c.transition(S::Screened, 6);
  c.transition(S::RiskAssessed, 7, "score=0");
  c.transition(S::AccountOpened, 8);
  CHECK_THROWS_AS(c.reject(RejectReason::ProofInvalid, 9), KycError);
  c.transition(S::Monitoring, 9);
  CHECK(history_follows_graph(c));
  CHECK(c.audit().back() == AuditEntry{9, "state Monitoring"});

  KycCase r("c2", "bob", 0);
  r.transition(S::ConnectionEstablished, 1);
  r.reject(RejectReason::ConnectionFailed, 2, "timeout");
  CHECK(r.state() == S::Rejected);
  CHECK(r.reject_reason() == RejectReason::ConnectionFailed);
  CHECK_THROWS_AS(r.transition(S::DocumentsRequested, 3), KycError);
}

TEST_CASE("document verification") {
  auto one = verify_documents({passport()}, 10);
  CHECK(one.attributes == std::map<std::string, std::string>{
                              {"name", "Alice Example"}, {"dob", "1990-04-01"}, {"id_number", "P1234567"}});
  CHECK(one.conflicts.empty());
  CHECK_THROWS_WITH_AS(verify_documents({passport(), utility_bill(10)}, 10), doctest::Contains("ExpiredDocument"),
                       KycError);
  CHECK_THROWS_WITH_AS(verify_documents({passport(5000, false)}, 10), doctest::Contains("DocumentCheckFailed"),
                       KycError);

  AnalogDocument older{DocType::UtilityBill, {{"address", "1 Main Street"}}, true, 50};
  AnalogDocument newer{DocType::UtilityBill, {{"address", "9 High Road"}}, true, 50};
  auto merged = verify_documents({older, passport(), newer}, 10);
  // Merge oracle: fold in document order, later wins.
  std::map<std::string, std::string> expected;
  for (const auto& d : {older, passport(), newer})
    for (const auto& [k, v] : d.claims) expected[k] = v;
  CHECK(merged.attributes == expected);
  REQUIRE(merged.conflicts.size() == 1);
  CHECK(merged.conflicts[0] == "address: 1 Main Street -> 9 High Road");

  CHECK(documents_for({"address"}) == std::vector<DocType>{DocType::UtilityBill});
  CHECK(documents_for({"name", "dob", "address", "id_number"}) ==
        std::vector<DocType>{DocType::Passport, DocType::UtilityBill});

  Writer w;
  passport().encode(w);
  Reader r(w.data());
  CHECK(AnalogDocument::decode(r) == passport());
}

TEST_CASE("name screening") {
  ScreeningLists lists;
  lists.add(ListKind::Aml, "alice muller");
  lists.add(ListKind::Pep, "Smyth", "1970-01-01");
  lists.add(ListKind::Terrorism, "Carlos Jackal");

  auto hits = name_screen("Alice Müller", std::nullopt, lists);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0] == ScreeningHit{ListKind::Aml, "alice muller", MatchGrade::Normalized});

  CHECK(levenshtein_oracle("smith", "smyth") == 1);
  CHECK(edit_distance("smith", "smyth") == 1);
  hits = name_screen("Smith", std::string("1970-01-01"), lists);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].grade == MatchGrade::Fuzzy);
  CHECK(name_screen("Smith", std::string("1980-02-02"), lists).empty());

  CHECK(levenshtein_oracle("smith", "smithers") == 3);
  CHECK(edit_distance("smith", "smithers") == 3);
  CHECK(name_screen("Smithers", std::string("1970-01-01"), lists).empty());

  hits = name_screen("Carlos Jackal", std::nullopt, lists);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].grade == MatchGrade::Exact);

  CHECK(normalize_name("  ÅSA  Øberg-Łukasz ") == "asa oberg lukasz");
  CHECK(normalize_name("Jose\xcc\x81") == "jose");

  crypto::Rng rng(3);
  const std::string alphabet = "abcde";
  for (int i = 0; i < 300; ++i) {
    std::string a, b;
    for (auto n = (rng.next_u64() % (8)); n > 0; --n) a += alphabet[(rng.next_u64() % (alphabet.size()))];
    for (auto n = (rng.next_u64() % (8)); n > 0; --n) b += alphabet[(rng.next_u64() % (alphabet.size()))];
    CHECK(edit_distance(a, b) == levenshtein_oracle(a, b));
  }

  auto parsed = ScreeningLists::parse("# sample\nterrorism\tCarlos Jackal\npep\tSmyth\t1970-01-01\n\n");
  REQUIRE(parsed.entries().size() == 2);
  CHECK(parsed.entries()[1].dob == "1970-01-01");
  CHECK_THROWS_AS(ScreeningLists::parse("sanctions\tX\n"), KycError);
}

TEST_CASE("risk scoring table") {
  // Oracle: the table applied by hand.
  auto score = [](bool sanction, bool pep, bool press, bool country, std::uint64_t volume) {
    std::uint32_t s = (sanction ? 100 : 0) + (pep ? 30 : 0) + (press ? 10 : 0) + (country ? 15 : 0) +
                      (volume > 10000 ? 10 : 0);
    return s;
  };
  auto level = [](std::uint32_t s) { return s < 20 ? RiskLevel::Low : s < 50 ? RiskLevel::Standard : RiskLevel::High; };

  auto none = assess_risk({}, {false, 500});
  CHECK(none.score == 0);
  CHECK(none.level == RiskLevel::Low);

  std::vector<ScreeningHit> pep = {{ListKind::Pep, "x", MatchGrade::Exact}};
  auto p = assess_risk(pep, {false, 500});
  CHECK(p.score == score(false, true, false, false, 500));
  CHECK(p.score == 30);
  CHECK(p.level == RiskLevel::Standard);

  auto high = assess_risk(pep, {true, 20000});
  CHECK(high.score == 55);
  CHECK(high.level == RiskLevel::High);
  CHECK(high.factors == std::vector<std::string>{"pep", "high_risk_country", "high_volume"});

  for (int mask = 0; mask < 32; ++mask) {
    std::vector<ScreeningHit> hits;
    if (mask & 1) hits.push_back({ListKind::Terrorism, "t", MatchGrade::Exact});
    if (mask & 2) hits.push_back({ListKind::Pep, "p", MatchGrade::Fuzzy});
    if (mask & 4) hits.push_back({ListKind::NegativePress, "n", MatchGrade::Normalized});
    RiskProfile prof{(mask & 8) != 0, (mask & 16) ? 10001u : 10000u};
    auto a = assess_risk(hits, prof);
    auto s = score(mask & 1, mask & 2, mask & 4, mask & 8, prof.expected_monthly_volume);
    CHECK(a.score == s);
    CHECK(a.level == level(s));
    CHECK(a.forced_reject == ((mask & 1) != 0));
  }

  CHECK(level_for(19, {}) == RiskLevel::Low);
  CHECK(level_for(20, {}) == RiskLevel::Standard);
  CHECK(level_for(49, {}) == RiskLevel::Standard);
  CHECK(level_for(50, {}) == RiskLevel::High);
}

TEST_CASE("transaction monitoring") {
  MonitoringConfig cfg;
  std::vector<TransactionRecord> steady;
  for (Tick t = 1; t <= 100; ++t) steady.push_back({t, 50, "shop", Direction::Out});
  CHECK(monitor(steady, 2000, cfg).empty());

  std::vector<TransactionRecord> deposits = {
      {10, 9500, "a", Direction::In}, {40, 9500, "b", Direction::In}, {80, 9500, "c", Direction::In}};
  // Sliding-window oracle: any 3 near-threshold amounts within 72 ticks.
  auto oracle = [&](const std::vector<TransactionRecord>& txs) {
    std::vector<Tick> near;
    for (const auto& t : txs)
      if (t.amount < 10000 && t.amount >= 9000) near.push_back(t.tick);
    for (std::size_t i = 0; i + 2 < near.size(); ++i)
      if (near[i + 2] - near[i] <= 72) return true;
    return false;
  };
  auto alerts = monitor(deposits, 100000, cfg);
  CHECK(oracle(deposits));
  REQUIRE(alerts.size() == 1);
  CHECK(alerts[0].kind == AlertKind::Structuring);
  CHECK(alerts[0].tick == 80);

  deposits[2].tick = 83;
  CHECK_FALSE(oracle(deposits));
  CHECK(monitor(deposits, 100000, cfg).empty());

  CHECK(near_threshold(9000, cfg));
  CHECK_FALSE(near_threshold(8999, cfg));
  CHECK_FALSE(near_threshold(10000, cfg));

  std::vector<TransactionRecord> spike = {{5, 1000, "x", Direction::In}, {20, 2500, "y", Direction::Out}};
  alerts = monitor(spike, 1000, cfg);
  REQUIRE(alerts.size() == 1);
  CHECK(alerts[0].kind == AlertKind::VolumeExceeded);
  CHECK(alerts[0].tick == 20);

  CHECK_FALSE(reproof_due(50, 0, std::nullopt, cfg));
  CHECK(reproof_due(90, 0, std::nullopt, cfg));
  CHECK(reproof_due(50, 0, Tick{40}, cfg));
}

TEST_CASE("record retention") {
  KycCase c("c1", "alice", 0);
  RecordStore store;
  CHECK_THROWS_WITH_AS(store.keep_record(c, {}, 1, 100), doctest::Contains("NotRecordable"), KycError);
  c.transition(S::ConnectionEstablished, 1);
  c.transition(S::ProofVerified, 2);
  c.transition(S::Screened, 3);
  c.transition(S::RiskAssessed, 4);
  c.transition(S::AccountOpened, 5);
  const auto& rec = store.keep_record(c, {Bytes{1, 2, 3}}, 5, 100);
  CHECK(rec.retention_until == 105);
  CHECK_THROWS_WITH_AS(store.purge("c1", 104), doctest::Contains("RetentionViolation"), KycError);
  store.purge("c1", 105);
  CHECK(store.find("c1") == nullptr);
  CHECK(store.deletions().back() == AuditEntry{105, "record.purged c1"});
  CHECK_THROWS_AS(store.purge("c1", 200), KycError);
}

TEST_CASE("bank config parsing") {
  auto c = BankConfig::parse(R"(
accept_kyc: [L1:did/creddef/kyc]
retention_ticks: 900
reproof_interval: 30
risk:
  pep: 40
monitoring:
  structuring_count: 4
)");
  CHECK(c.accept_kyc == std::vector<std::string>{"L1:did/creddef/kyc"});
  CHECK(c.retention_ticks == 900);
  CHECK(c.monitoring.reproof_interval == 30);
  CHECK(c.risk.pep == 40);
  CHECK(c.monitoring.structuring_count == 4);
  CHECK_THROWS_WITH_AS(BankConfig::parse("unknown: 1"), doctest::Contains("BadConfig"), KycError);
  CHECK_THROWS_AS(BankConfig::parse("risk: {pep: many}"), KycError);
}

TEST_CASE("completely new onboarding") {
  World w;
  auto appends_before = w.resolver.total_appends();
  auto& f = run_completely_new_onboarding(w.bank_a, w.alice, w.env);
  CHECK(f.kase.state() == S::AccountOpened);
  CHECK(history_follows_graph(f.kase));
  CHECK(w.alice.wallet.credentials().size() == 1);
  CHECK(f.stats.credential_issued);
  CHECK(f.stats.ledger_appends == 0);
  CHECK(w.resolver.total_appends() == appends_before);
  CHECK(f.stats.attributes_requested == std::set<std::string>{"name", "dob", "address", "id_number"});
  CHECK(f.stats.documents_received == 2);
  auto rec = w.bank_a.records.find(f.kase.id());
  REQUIRE(rec != nullptr);
  CHECK(rec->attributes.at("address") == "1 Main Street");
  CHECK(rec->retention_until == rec->recorded_at + kDefaultRetentionTicks);

  for (const auto* l : w.resolver.ledgers())
    for (const auto& b : l->blocks()) {
      Writer bw;
      for (const auto& tx : b.txs) tx.encode(bw);
      for (const auto& [k, v] : f.kase.attributes) CHECK_FALSE(contains_bytes(bw.data(), v));
    }
}

TEST_CASE("completely new onboarding rejects bad documents") {
  World w;
  w.alice.documents = {passport(5000, false), utility_bill()};
  auto& f = run_completely_new_onboarding(w.bank_a, w.alice, w.env);
  CHECK(f.kase.state() == S::Rejected);
  CHECK(f.kase.reject_reason() == RejectReason::DocumentCheckFailed);
  CHECK(w.alice.wallet.credentials().empty());
  CHECK(history_follows_graph(f.kase));

  World x;
  x.alice.documents = {passport(), utility_bill(1)};
  auto& g = run_completely_new_onboarding(x.bank_a, x.alice, x.env);
  CHECK(g.kase.reject_reason() == RejectReason::ExpiredDocument);
}

TEST_CASE("terrorism hit rejects without a credential") {
  World w;
  w.bank_a.lists.add(ListKind::Terrorism, "Alice Example");
  auto& f = run_completely_new_onboarding(w.bank_a, w.alice, w.env);
  CHECK(f.kase.state() == S::Rejected);
  CHECK(f.kase.reject_reason() == RejectReason::ScreeningHit);
  CHECK_FALSE(f.stats.credential_issued);
  CHECK(w.alice.wallet.credentials().empty());
  CHECK(history_follows_graph(f.kase));
  CHECK_FALSE(f.kase.visited(S::AccountOpened));
  CHECK(w.bank_a.records.find(f.kase.id()) != nullptr);
  for (const auto& e : w.trace.events()) CHECK(e.event != "credential.stored");
}

TEST_CASE("fast onboarding at a second bank") {
  World w;
  REQUIRE(run_completely_new_onboarding(w.bank_a, w.alice, w.env).kase.state() == S::AccountOpened);
  w.clock.advance(5);
  auto reads_before = w.resolver.total_reads();
  auto& f = run_fast_onboarding(w.bank_b, w.alice, w.env);
  CHECK(f.kase.state() == S::AccountOpened);
  CHECK(history_follows_graph(f.kase));
  CHECK(f.kase.visited(S::ProofVerified));
  CHECK_FALSE(f.kase.visited(S::DocumentsRequested));
  CHECK(f.stats.ledger_appends == 0);
  CHECK(f.stats.ledger_reads >= 1);
  CHECK(w.resolver.total_reads() > reads_before);
  CHECK(f.stats.documents_received == 0);
  CHECK(f.stats.documents_requested.empty());
  CHECK(w.alice.wallet.credentials().size() == 1);
  CHECK(f.kase.attributes.at("id_number") == "P1234567");

  auto rec = w.bank_b.records.find(f.kase.id());
  REQUIRE(rec != nullptr);
  REQUIRE(rec->presentations.size() == 1);
  // Byte equality against the envelope payload the bank received.
  bool found = false;
  for (const auto& e : w.trace.events())
    if (e.actor == "alice" && e.event == "proof.presented") found = true;
  CHECK(found);
  CHECK(rec->presentations[0] == f.presentations[0]);
  auto vp = anoncred::VerifiablePresentation::from_bytes(rec->presentations[0]);
  CHECK(vp.to_bytes() == rec->presentations[0]);
}

TEST_CASE("fast onboarding with a revoked credential") {
  World w;
  auto& first = run_completely_new_onboarding(w.bank_a, w.alice, w.env);
  REQUIRE(first.kase.state() == S::AccountOpened);
  w.clock.advance(1);
  revoke_case_credential(w.bank_a, first.kase.id(), w.env);
  w.clock.advance(1);
  auto& f = run_fast_onboarding(w.bank_b, w.alice, w.env);
  CHECK(f.kase.state() == S::Rejected);
  CHECK(f.kase.reject_reason() == RejectReason::ProofInvalid);
  CHECK(f.stats.ledger_appends == 0);
}

TEST_CASE("fast onboarding without a credential falls back to new-to-KYC") {
  World w;
  auto& f = run_fast_onboarding(w.bank_b, w.alice, w.env);
  CHECK(f.kase.state() == S::AccountOpened);
  CHECK(history_follows_graph(f.kase));
  CHECK(f.stats.credential_issued);

  World x;
  x.bank_b.config.fallback_to_new_to_kyc = false;
  auto& g = run_fast_onboarding(x.bank_b, x.alice, x.env);
  CHECK(g.kase.reject_reason() == RejectReason::ProofInvalid);
}

TEST_CASE("new-to-KYC requests only what the wallet cannot prove") {
  World base;
  auto full = run_completely_new_onboarding(base.bank_a, base.alice, base.env).stats.attributes_requested;

  World w;
  w.give_gov_id(w.alice);
  auto& f = run_new_to_kyc(w.bank_a, w.alice, w.env);
  CHECK(f.kase.state() == S::AccountOpened);
  CHECK(history_follows_graph(f.kase));
  // Coverage oracle: requested = all KYC attributes minus those revealed by the VP.
  REQUIRE(f.presentations.size() == 1);
  auto vp = anoncred::VerifiablePresentation::from_bytes(f.presentations[0]);
  std::set<std::string> revealed;
  for (const auto& pc : vp.credentials)
    for (const auto& a : pc.revealed) revealed.insert(a.name);
  std::set<std::string> expected;
  for (const auto& a : kKycAttributes)
    if (!revealed.count(a)) expected.insert(a);
  CHECK(f.stats.attributes_requested == expected);
  CHECK(f.stats.attributes_requested == std::set<std::string>{"address"});
  CHECK(f.stats.documents_requested == std::vector<DocType>{DocType::UtilityBill});
  std::set<std::string> diff;
  std::set_difference(full.begin(), full.end(), f.stats.attributes_requested.begin(),
                      f.stats.attributes_requested.end(), std::inserter(diff, diff.end()));
  CHECK(f.stats.attributes_requested.size() < full.size());
  CHECK(diff == std::set<std::string>{"name", "dob", "id_number"});
  CHECK(f.stats.credential_issued);
  CHECK(w.alice.wallet.credentials().size() == 2);

  World empty;
  auto& g = run_new_to_kyc(empty.bank_a, empty.alice, empty.env);
  CHECK(g.kase.state() == S::AccountOpened);
  CHECK(g.stats.attributes_requested == full);

  World covered;
  REQUIRE(run_completely_new_onboarding(covered.bank_a, covered.alice, covered.env).kase.state() == S::AccountOpened);
  auto& h = run_new_to_kyc(covered.bank_b, covered.alice, covered.env);
  CHECK(h.kase.state() == S::AccountOpened);
  CHECK(h.stats.attributes_requested.empty());
  CHECK(h.stats.documents_received == 0);
  CHECK_FALSE(h.stats.credential_issued);
}

TEST_CASE("enhanced due diligence") {
  auto high_risk = [](World& w) {
    w.list_pep("Alice Example");
    w.alice.profile = {true, 20000};
  };

  World vc;
  high_risk(vc);
  vc.give_income(vc.alice);
  auto& a = run_completely_new_onboarding(vc.bank_a, vc.alice, vc.env);
  CHECK(a.risk.score == 55);
  CHECK(a.kase.visited(S::EddRequested));
  CHECK(a.kase.state() == S::AccountOpened);
  CHECK(history_follows_graph(a.kase));

  World doc;
  high_risk(doc);
  doc.alice.documents.push_back(income_statement());
  auto& b = run_completely_new_onboarding(doc.bank_a, doc.alice, doc.env);
  CHECK(b.kase.visited(S::EddRequested));
  CHECK(b.kase.state() == a.kase.state());

  World slow;
  high_risk(slow);
  slow.alice.documents.push_back(income_statement());
  slow.alice.edd_response_delay = 20;
  auto start = slow.clock.now();
  auto& c = run_completely_new_onboarding(slow.bank_a, slow.alice, slow.env);
  CHECK(c.kase.state() == S::Rejected);
  CHECK(c.kase.reject_reason() == RejectReason::EddTimeout);
  CHECK(slow.clock.now() >= start + 14);
  CHECK(slow.alice.wallet.credentials().empty());

  World silent;
  high_risk(silent);
  silent.alice.edd_response_delay.reset();
  CHECK(run_completely_new_onboarding(silent.bank_a, silent.alice, silent.env).kase.reject_reason() ==
        RejectReason::EddTimeout);
}

TEST_CASE("monitoring alerts and re-proof after revocation") {
  World w;
  w.alice.profile.expected_monthly_volume = 10000;
  auto& first = run_completely_new_onboarding(w.bank_a, w.alice, w.env);
  REQUIRE(first.kase.state() == S::AccountOpened);
  auto& f = run_fast_onboarding(w.bank_b, w.alice, w.env);
  REQUIRE(f.kase.state() == S::AccountOpened);
  auto id = f.kase.id();

  auto t0 = w.clock.now();
  for (int i = 0; i < 3; ++i) {
    w.clock.advance(10);
    auto alerts = record_transaction(w.bank_b, id, {w.clock.now(), 9500, "cash", Direction::In}, w.env);
    CHECK(alerts.size() == (i == 2 ? 1u : 0u));
  }
  CHECK(w.bank_b.case_file(id).kase.state() == S::Monitoring);
  CHECK(w.bank_b.case_file(id).findings.structuring_alerts == 1);
  CHECK(w.bank_b.case_file(id).risk.score == 30);
  CHECK(w.clock.now() == t0 + 30);

  CHECK(reproof(w.bank_b, w.alice, id, w.env));
  auto before = w.bank_b.case_file(id).risk.level;
  revoke_case_credential(w.bank_a, first.kase.id(), w.env);
  w.clock.advance(1);
  CHECK_FALSE(reproof(w.bank_b, w.alice, id, w.env));
  auto& after = w.bank_b.case_file(id);
  CHECK(before == RiskLevel::Standard);
  CHECK(after.risk.level == RiskLevel::High);
  CHECK(after.kase.state() == S::Monitoring);
  CHECK(history_follows_graph(after.kase));

  w.clock.advance(kDefaultRetentionTicks);
  CHECK(reproof_due(w.bank_b, after, w.clock.now()));
}

TEST_CASE("purging bank records") {
  World w;
  auto& f = run_completely_new_onboarding(w.bank_a, w.alice, w.env);
  auto until = w.bank_a.records.find(f.kase.id())->retention_until;
  w.clock.advance_to(until - 1);
  CHECK_THROWS_WITH_AS(purge_record(w.bank_a, f.kase.id(), w.env), doctest::Contains("RetentionViolation"), KycError);
  w.clock.advance(1);
  purge_record(w.bank_a, f.kase.id(), w.env);
  CHECK(w.bank_a.records.find(f.kase.id()) == nullptr);
}

TEST_CASE("onboarding is deterministic for a seed") {
  auto run = [] {
    World w(21);
    run_completely_new_onboarding(w.bank_a, w.alice, w.env);
    run_fast_onboarding(w.bank_b, w.alice, w.env);
    return w.trace.text();
  };
  auto a = run();
  CHECK(a == run());
  CHECK(a.find("case.transition") != std::string::npos);
}
