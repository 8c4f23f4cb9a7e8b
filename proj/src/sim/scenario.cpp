#include "ssikyc/sim/scenario.hpp"

#include <algorithm>
#include <set>

#include <yaml-cpp/yaml.h>

#include "ssikyc/anoncred/issuance.hpp"
#include "ssikyc/connect/wallet.hpp"
#include "ssikyc/kyc/errors.hpp"

namespace ssikyc::sim {

namespace {

// ---- parsing ------------------------------------------------------------

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) {
  auto mark = n.Mark();
  if (mark.line >= 0) throw ScenarioError("line " + std::to_string(mark.line + 1) + ": " + what);
  throw ScenarioError(what);
}

template <class T>
T as(const YAML::Node& n, const std::string& what) {
  if (!n.IsDefined() || n.IsNull()) fail(n, "missing " + what);
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(n, "bad value for " + what);
  }
}

void allow_keys(const YAML::Node& n, const std::string& what, const std::set<std::string>& keys) {
  if (!n.IsMap()) fail(n, what + " must be a mapping");
  for (const auto& kv : n) {
    auto key = kv.first.as<std::string>();
    if (!keys.count(key)) fail(kv.first, "unknown key '" + key + "' in " + what);
  }
}

std::vector<std::string> strings(const YAML::Node& n, const std::string& what) {
  std::vector<std::string> out;
  if (!n.IsDefined() || n.IsNull()) return out;
  if (!n.IsSequence()) fail(n, what + " must be a list");
  for (const auto& item : n) out.push_back(as<std::string>(item, what));
  return out;
}

std::vector<std::pair<std::string, std::string>> pairs(const YAML::Node& n, const std::string& what) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!n.IsMap()) fail(n, what + " must be a mapping");
  for (const auto& kv : n) out.emplace_back(kv.first.as<std::string>(), as<std::string>(kv.second, what));
  return out;
}

std::string dump_yaml(const YAML::Node& n) {
  YAML::Emitter e;
  e << n;
  return e.c_str();
}

IssuerSpec parse_issuer(const YAML::Node& n) {
  allow_keys(n, "issuer", {"label", "ledger", "schema", "version", "attributes", "tag", "revocable", "capacity"});
  IssuerSpec s;
  s.label = as<std::string>(n["label"], "issuer.label");
  s.ledger = as<std::string>(n["ledger"], "issuer.ledger");
  s.schema_name = as<std::string>(n["schema"], "issuer.schema");
  if (n["version"]) s.schema_version = as<std::string>(n["version"], "issuer.version");
  s.attributes = strings(n["attributes"], "issuer.attributes");
  if (s.attributes.empty()) fail(n, "issuer " + s.label + " has no attributes");
  s.tag = n["tag"] ? as<std::string>(n["tag"], "issuer.tag") : s.schema_name;
  if (n["revocable"]) s.revocable = as<bool>(n["revocable"], "issuer.revocable");
  if (n["capacity"]) s.capacity = as<std::uint32_t>(n["capacity"], "issuer.capacity");
  return s;
}

BankSpec parse_bank(const YAML::Node& n) {
  allow_keys(n, "bank", {"label", "ledger", "accept_kyc", "accept_partial", "accept_income", "config", "screening"});
  BankSpec s;
  s.label = as<std::string>(n["label"], "bank.label");
  s.ledger = as<std::string>(n["ledger"], "bank.ledger");
  s.accept_kyc = strings(n["accept_kyc"], "bank.accept_kyc");
  s.accept_partial = strings(n["accept_partial"], "bank.accept_partial");
  s.accept_income = strings(n["accept_income"], "bank.accept_income");
  if (n["config"]) {
    try {
      s.config = kyc::BankConfig::parse(dump_yaml(n["config"]));
    } catch (const kyc::KycError& e) {
      fail(n["config"], e.what());
    }
  }
  if (const auto& lists = n["screening"]) {
    if (!lists.IsSequence()) fail(lists, "bank.screening must be a list");
    for (const auto& entry : lists) {
      allow_keys(entry, "screening entry", {"list", "name", "dob"});
      auto kind = kyc::list_kind_from_string(as<std::string>(entry["list"], "screening.list"));
      if (!kind) fail(entry["list"], "unknown screening list");
      std::optional<std::string> dob;
      if (entry["dob"]) dob = as<std::string>(entry["dob"], "screening.dob");
      s.lists.add(*kind, as<std::string>(entry["name"], "screening.name"), dob);
    }
  }
  return s;
}

CustomerSpec parse_customer(const YAML::Node& n) {
  allow_keys(n, "customer", {"label", "profile", "edd_response_delay", "documents", "credentials"});
  CustomerSpec s;
  s.label = as<std::string>(n["label"], "customer.label");
  if (const auto& p = n["profile"]) {
    allow_keys(p, "customer.profile", {"high_risk_country", "expected_monthly_volume"});
    if (p["high_risk_country"]) s.profile.high_risk_country = as<bool>(p["high_risk_country"], "high_risk_country");
    if (p["expected_monthly_volume"])
      s.profile.expected_monthly_volume = as<std::uint64_t>(p["expected_monthly_volume"], "expected_monthly_volume");
  }
  if (const auto& d = n["edd_response_delay"]) {
    if (d.IsScalar() && d.as<std::string>() == "never")
      s.edd_response_delay.reset();
    else
      s.edd_response_delay = as<Tick>(d, "edd_response_delay");
  }
  if (const auto& docs = n["documents"]) {
    if (!docs.IsSequence()) fail(docs, "customer.documents must be a list");
    for (const auto& d : docs) {
      allow_keys(d, "document", {"type", "claims", "authentic", "validity_end"});
      kyc::AnalogDocument doc;
      auto type = kyc::doc_type_from_string(as<std::string>(d["type"], "document.type"));
      if (!type) fail(d["type"], "unknown document type");
      doc.type = *type;
      doc.claims = pairs(d["claims"], "document.claims");
      if (d["authentic"]) doc.authentic = as<bool>(d["authentic"], "document.authentic");
      doc.validity_end = as<Tick>(d["validity_end"], "document.validity_end");
      s.documents.push_back(std::move(doc));
    }
  }
  if (const auto& creds = n["credentials"]) {
    if (!creds.IsSequence()) fail(creds, "customer.credentials must be a list");
    for (const auto& c : creds) {
      allow_keys(c, "credential", {"issuer", "values", "expiration"});
      CredentialSpec cs;
      cs.issuer = as<std::string>(c["issuer"], "credential.issuer");
      for (auto& [k, v] : pairs(c["values"], "credential.values")) cs.values[k] = v;
      if (c["expiration"]) cs.expiration = as<Tick>(c["expiration"], "credential.expiration");
      s.credentials.push_back(std::move(cs));
    }
  }
  return s;
}

const std::map<std::string, std::set<std::string>> kStepArgs = {
    {"bootstrap", {}},
    {"onboard_new", {"bank", "customer", "as"}},
    {"onboard_fast", {"bank", "customer", "as"}},
    {"onboard_new_to_kyc", {"bank", "customer", "as"}},
    {"revoke", {"case"}},
    {"transact", {"case", "amount", "counterparty", "direction"}},
    {"advance_clock", {"ticks", "to"}},
    {"reproof", {"case"}},
    {"purge", {"case"}},
    {"wallet_restore", {"customer", "passphrase"}},
};

const std::set<std::string> kOnboardExpect = {"state",      "reject_reason", "appends",          "min_reads",
                                              "documents_received", "credential_issued", "risk_level",
                                              "risk_score", "edd",           "documents_requested",
                                              "attributes_requested"};

const std::map<std::string, std::set<std::string>> kStepExpect = {
    {"bootstrap", {}},
    {"onboard_new", kOnboardExpect},
    {"onboard_fast", kOnboardExpect},
    {"onboard_new_to_kyc", kOnboardExpect},
    {"revoke", {"error"}},
    {"transact", {"alerts", "level", "error"}},
    {"advance_clock", {}},
    {"reproof", {"ok", "level", "error"}},
    {"purge", {"error"}},
    {"wallet_restore", {"credentials"}},
};

const std::set<std::string> kListExpect = {"documents_requested", "attributes_requested", "alerts"};

Step parse_step(const YAML::Node& n) {
  Step s;
  s.line = n.Mark().line + 1;
  if (n.IsScalar()) {
    s.action = n.as<std::string>();
    if (!kStepArgs.count(s.action)) fail(n, "unknown step '" + s.action + "'");
    if (!kStepArgs.at(s.action).empty() && s.action != "advance_clock") fail(n, s.action + " needs arguments");
    return s;
  }
  if (!n.IsMap()) fail(n, "step must be a name or a mapping");
  for (const auto& kv : n) {
    auto key = kv.first.as<std::string>();
    if (key == "expect") continue;
    if (!kStepArgs.count(key)) fail(kv.first, "unknown step '" + key + "'");
    if (!s.action.empty()) fail(kv.first, "step has two actions");
    s.action = key;
    const auto& body = kv.second;
    if (key == "advance_clock" && body.IsScalar()) {
      s.args["ticks"] = as<std::string>(body, "advance_clock");
      continue;
    }
    if (body.IsNull()) continue;
    allow_keys(body, key, kStepArgs.at(key));
    for (const auto& arg : body) s.args[arg.first.as<std::string>()] = as<std::string>(arg.second, key);
  }
  if (s.action.empty()) fail(n, "step has no action");
  if (const auto& e = n["expect"]) {
    allow_keys(e, "expect", kStepExpect.at(s.action));
    for (const auto& kv : e) {
      auto key = kv.first.as<std::string>();
      if (kListExpect.count(key))
        s.expect_lists[key] = strings(kv.second, "expect." + key);
      else
        s.expect[key] = as<std::string>(kv.second, "expect." + key);
    }
  }
  auto require = [&](const std::string& arg) {
    if (!s.args.count(arg)) fail(n, s.action + " needs '" + arg + "'");
  };
  if (s.action.rfind("onboard_", 0) == 0) {
    require("bank");
    require("customer");
  }
  if (s.action == "revoke" || s.action == "transact" || s.action == "reproof" || s.action == "purge") require("case");
  if (s.action == "transact") require("amount");
  if (s.action == "wallet_restore") {
    require("customer");
    require("passphrase");
  }
  if (s.action == "advance_clock" && s.args.count("ticks") == s.args.count("to"))
    fail(n, "advance_clock needs exactly one of ticks or to");
  return s;
}

std::uint64_t to_u64(const std::string& v, const std::string& what) {
  try {
    std::size_t used = 0;
    auto x = std::stoull(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ScenarioError("bad number for " + what + ": " + v);
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ScenarioError(e.what());
  }
  allow_keys(root, "scenario",
             {"name", "seed", "profile", "ledgers", "trusted_attester", "issuers", "banks", "customers", "steps"});
  Scenario s;
  if (root["name"]) s.name = as<std::string>(root["name"], "name");
  s.seed = as<std::uint64_t>(root["seed"], "seed");
  if (root["profile"]) {
    auto p = as<std::string>(root["profile"], "profile");
    if (p == "TEST")
      s.profile = crypto::Profile::Test;
    else if (p == "DEFAULT")
      s.profile = crypto::Profile::Default;
    else
      fail(root["profile"], "profile must be TEST or DEFAULT");
  }
  s.ledgers = strings(root["ledgers"], "ledgers");
  if (s.ledgers.empty()) fail(root, "at least one ledger is required");
  std::set<std::string> ledger_ids(s.ledgers.begin(), s.ledgers.end());
  if (ledger_ids.size() != s.ledgers.size()) fail(root["ledgers"], "duplicate ledger id");
  for (const auto& id : s.ledgers)
    if (!connect::valid_ledger_id(id)) fail(root["ledgers"], "invalid ledger id '" + id + "'");
  if (root["trusted_attester"]) {
    s.trusted_attester = as<std::string>(root["trusted_attester"], "trusted_attester");
    if (!ledger_ids.count(*s.trusted_attester)) fail(root["trusted_attester"], "trusted_attester names an unknown ledger");
  }

  std::set<std::string> labels;
  auto add_label = [&](const YAML::Node& n, const std::string& label) {
    if (!labels.insert(label).second) fail(n, "duplicate actor label '" + label + "'");
  };
  for (const auto& n : root["issuers"]) {
    s.issuers.push_back(parse_issuer(n));
    add_label(n, s.issuers.back().label);
    if (!ledger_ids.count(s.issuers.back().ledger)) fail(n, "issuer on unknown ledger");
  }
  for (const auto& n : root["banks"]) {
    s.banks.push_back(parse_bank(n));
    add_label(n, s.banks.back().label);
    if (!ledger_ids.count(s.banks.back().ledger)) fail(n, "bank on unknown ledger");
  }
  for (const auto& n : root["customers"]) {
    s.customers.push_back(parse_customer(n));
    add_label(n, s.customers.back().label);
    for (const auto& c : s.customers.back().credentials)
      if (std::none_of(s.issuers.begin(), s.issuers.end(), [&](const auto& i) { return i.label == c.issuer; }))
        fail(n, "credential from unknown issuer '" + c.issuer + "'");
  }
  for (const auto& b : s.banks)
    for (const auto* list : {&b.accept_kyc, &b.accept_partial, &b.accept_income})
      for (const auto& ref : *list)
        if (ref.find('/') == std::string::npos && !labels.count(ref))
          throw ScenarioError("bank " + b.label + " accepts unknown actor '" + ref + "'");

  if (!root["steps"] || !root["steps"].IsSequence()) fail(root, "steps must be a list");
  std::set<std::string> refs;
  for (const auto& n : root["steps"]) {
    auto step = parse_step(n);
    const auto& a = step.args;
    auto bank_known = [&](const std::string& l) {
      return std::any_of(s.banks.begin(), s.banks.end(), [&](const auto& b) { return b.label == l; });
    };
    auto customer_known = [&](const std::string& l) {
      return std::any_of(s.customers.begin(), s.customers.end(), [&](const auto& c) { return c.label == l; });
    };
    if (a.count("bank") && !bank_known(a.at("bank"))) fail(n, "unknown bank '" + a.at("bank") + "'");
    if (a.count("customer") && !customer_known(a.at("customer"))) fail(n, "unknown customer '" + a.at("customer") + "'");
    if (a.count("as") && !refs.insert(a.at("as")).second) fail(n, "duplicate case name '" + a.at("as") + "'");
    if (a.count("amount") && to_u64(a.at("amount"), "amount") == 0) fail(n, "amount must be positive");
    if (a.count("direction") && a.at("direction") != "in" && a.at("direction") != "out")
      fail(n, "direction must be in or out");
    for (const auto& key : {"ticks", "to"})
      if (a.count(key)) to_u64(a.at(key), key);
    s.steps.push_back(std::move(step));
  }
  return s;
}

// ---- simulation ---------------------------------------------------------

struct Simulation::IssuerState {
  IssuerState(const std::string& label, crypto::Profile p) : wallet(label, p) {}
  connect::Wallet wallet;
  std::optional<anoncred::Issuer> issuer;
  anoncred::CredentialDefinition def;
};

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)), rng_(scenario_.seed), trace_(clock_) {
  const auto& params = crypto::GroupParams::for_profile(scenario_.profile);
  for (const auto& id : scenario_.ledgers) {
    auto l = std::make_unique<ledger::Ledger>(id, params, clock_);
    resolver_.add(*l);
    ledgers_[id] = std::move(l);
  }
  for (const auto& i : scenario_.issuers)
    issuers_[i.label] = std::make_unique<IssuerState>(i.label, scenario_.profile);
  for (const auto& b : scenario_.banks) {
    auto bank = std::make_unique<kyc::Bank>(b.label, scenario_.profile, b.config);
    bank->lists = b.lists;
    banks_[b.label] = std::move(bank);
  }
  for (const auto& c : scenario_.customers) {
    auto cust = std::make_unique<kyc::Customer>(c.label, scenario_.profile);
    cust->documents = c.documents;
    cust->profile = c.profile;
    cust->edd_response_delay = c.edd_response_delay;
    customers_[c.label] = std::move(cust);
  }
  env_ = std::make_unique<kyc::Environment>(kyc::Environment{clock_, resolver_, network_, rng_, &trace_, std::nullopt});
}

Simulation::~Simulation() = default;

ledger::Ledger& Simulation::ledger(const std::string& id) {
  auto it = ledgers_.find(id);
  if (it == ledgers_.end()) throw ScenarioError("unknown ledger " + id);
  return *it->second;
}

kyc::Bank& Simulation::bank(const std::string& label) {
  auto it = banks_.find(label);
  if (it == banks_.end()) throw ScenarioError("unknown bank " + label);
  return *it->second;
}

kyc::Customer& Simulation::customer(const std::string& label) {
  auto it = customers_.find(label);
  if (it == customers_.end()) throw ScenarioError("unknown customer " + label);
  return *it->second;
}

CaseSummary& Simulation::case_ref(const std::string& ref) {
  for (auto& c : cases_)
    if (c.ref == ref) return c;
  throw ScenarioError("unknown case '" + ref + "'");
}

const kyc::CaseFile& Simulation::case_file(const std::string& ref) {
  auto& c = case_ref(ref);
  return bank(c.bank).case_file(c.case_id);
}

std::vector<std::string> Simulation::pii_terms() const {
  std::set<std::string> terms;
  for (const auto& c : scenario_.customers) {
    for (const auto& d : c.documents)
      for (const auto& [k, v] : d.claims) terms.insert(v);
    for (const auto& cred : c.credentials)
      for (const auto& [k, v] : cred.values) terms.insert(v);
  }
  return {terms.begin(), terms.end()};
}

std::string Simulation::resolve_cred_def(const std::string& ref) const {
  if (auto b = banks_.find(ref); b != banks_.end()) return b->second->kyc_cred_def_id();
  if (auto i = issuers_.find(ref); i != issuers_.end()) return i->second->def.cred_def_id;
  return ref;
}

void Simulation::bootstrap() {
  if (bootstrapped_) throw ScenarioError("bootstrap runs once");
  bootstrapped_ = true;
  if (scenario_.trusted_attester) {
    attester_ = std::make_unique<connect::Wallet>("trust-service", scenario_.profile);
    auto did = connect::create_public_did(*attester_, ledger(*scenario_.trusted_attester), {}, rng_);
    env_->trusted_attester = did.str();
    trace_.emit("trust-service", "did.published", {{"did", did.str()}});
  }
  for (const auto& spec : scenario_.issuers) {
    auto& st = *issuers_.at(spec.label);
    auto& l = ledger(spec.ledger);
    auto did = connect::create_public_did(st.wallet, l, {{"agent", "mailbox://" + spec.label}}, rng_);
    st.issuer.emplace(st.wallet);
    auto schema =
        anoncred::register_schema(*st.issuer, l, spec.schema_name, spec.schema_version, spec.attributes, rng_);
    st.def = anoncred::register_cred_def(*st.issuer, l, schema, spec.tag, spec.revocable, rng_);
    if (spec.revocable) anoncred::create_revocation_registry(*st.issuer, l, st.def.cred_def_id, spec.capacity, rng_);
    trace_.emit(spec.label, "issuer.bootstrapped", {{"did", did.str()}, {"cred_def", st.def.cred_def_id}});
  }
  for (const auto& spec : scenario_.banks) {
    auto& b = bank(spec.label);
    b.bootstrap(ledger(spec.ledger), rng_);
    if (attester_) {
      auto did = b.wallet().public_did()->did;
      auto doc = resolver_.resolve(did.str());
      connect::publish_attestation(b.wallet(), ledger(spec.ledger), did,
                                   connect::attest_key(*attester_, doc, b.wallet().public_did()->key_id, rng_), rng_);
    }
    trace_.emit(spec.label, "bank.bootstrapped", {{"cred_def", b.kyc_cred_def_id()}});
  }
  for (const auto& spec : scenario_.banks) {
    auto& cfg = bank(spec.label).config;
    cfg.accept_kyc.clear();
    cfg.accept_partial.clear();
    cfg.accept_income.clear();
    for (const auto& r : spec.accept_kyc) cfg.accept_kyc.push_back(resolve_cred_def(r));
    for (const auto& r : spec.accept_partial) cfg.accept_partial.push_back(resolve_cred_def(r));
    for (const auto& r : spec.accept_income) cfg.accept_income.push_back(resolve_cred_def(r));
  }
  for (const auto& spec : scenario_.customers) {
    auto& c = customer(spec.label);
    for (const auto& cred : spec.credentials) {
      auto& st = *issuers_.at(cred.issuer);
      c.wallet.ensure_link_secret(rng_);
      auto offer = anoncred::create_offer(*st.issuer, st.def.cred_def_id, cred.values, cred.expiration, rng_);
      auto request = anoncred::accept_offer(c.wallet, offer, rng_);
      anoncred::store_issued(c.wallet, anoncred::issue(*st.issuer, request, rng_), resolver_);
      trace_.emit(spec.label, "credential.stored", {{"cred_def", st.def.cred_def_id}});
    }
  }
}

void Simulation::check(RunResult& result, const Step& step, const std::string& key, const std::string& actual) {
  auto it = step.expect.find(key);
  if (it == step.expect.end()) return;
  ++result.checked;
  trace_.emit("harness", "expect", {{"line", std::to_string(step.line)}, {"key", key}, {"actual", actual}});
  if (it->second == actual || !result.passed) {
    if (it->second != actual) trace_.emit("harness", "expect.failed", {{"key", key}});
    return;
  }
  result.passed = false;
  result.first_failure = "line " + std::to_string(step.line) + " (" + step.action + "): expected " + key + "=" +
                         it->second + ", got " + actual;
  trace_.emit("harness", "expect.failed", {{"key", key}, {"expected", it->second}, {"actual", actual}});
}

void Simulation::check_list(RunResult& result, const Step& step, const std::string& key,
                            std::vector<std::string> actual) {
  auto it = step.expect_lists.find(key);
  if (it == step.expect_lists.end()) return;
  std::string a, e;
  for (const auto& v : actual) a += (a.empty() ? "" : ",") + v;
  for (const auto& v : it->second) e += (e.empty() ? "" : ",") + v;
  Step single = step;
  single.expect = {{key, "[" + e + "]"}};
  check(result, single, key, "[" + a + "]");
}

void Simulation::onboard(const Step& step, RunResult& result) {
  auto& b = bank(step.args.at("bank"));
  auto& c = customer(step.args.at("customer"));
  kyc::CaseFile* f = nullptr;
  if (step.action == "onboard_new")
    f = &kyc::run_completely_new_onboarding(b, c, *env_);
  else if (step.action == "onboard_fast")
    f = &kyc::run_fast_onboarding(b, c, *env_);
  else
    f = &kyc::run_new_to_kyc(b, c, *env_);
  auto ref = step.args.count("as") ? step.args.at("as") : f->kase.id();
  cases_.push_back({ref, b.label(), c.label, f->kase.id(), step.action});

  check(result, step, "state", std::string(to_string(f->kase.state())));
  check(result, step, "reject_reason",
        f->kase.reject_reason() ? std::string(to_string(*f->kase.reject_reason())) : "none");
  check(result, step, "appends", std::to_string(f->stats.ledger_appends));
  if (step.expect.count("min_reads")) {
    auto min = to_u64(step.expect.at("min_reads"), "min_reads");
    Step s = step;
    s.expect = {{"min_reads", "true"}};
    check(result, s, "min_reads", bool_text(f->stats.ledger_reads >= min));
  }
  check(result, step, "documents_received", std::to_string(f->stats.documents_received));
  check(result, step, "credential_issued", bool_text(f->stats.credential_issued));
  check(result, step, "risk_level", std::string(to_string(f->risk.level)));
  check(result, step, "risk_score", std::to_string(f->risk.score));
  check(result, step, "edd", bool_text(f->kase.visited(kyc::CaseState::EddRequested)));
  std::vector<std::string> docs;
  for (auto d : f->stats.documents_requested) docs.emplace_back(to_string(d));
  check_list(result, step, "documents_requested", docs);
  check_list(result, step, "attributes_requested",
             {f->stats.attributes_requested.begin(), f->stats.attributes_requested.end()});
}

void Simulation::execute(const Step& step, RunResult& result) {
  const auto& a = step.args;
  trace_.emit("harness", "step", {{"line", std::to_string(step.line)}, {"action", step.action}});
  if (step.action == "bootstrap") {
    bootstrap();
    return;
  }
  if (!bootstrapped_) throw ScenarioError("line " + std::to_string(step.line) + ": " + step.action + " before bootstrap");
  if (step.action.rfind("onboard_", 0) == 0) {
    onboard(step, result);
    return;
  }
  if (step.action == "advance_clock") {
    if (a.count("to")) {
      auto to = to_u64(a.at("to"), "to");
      if (to < clock_.now()) throw ScenarioError("line " + std::to_string(step.line) + ": clock cannot move backwards");
      clock_.advance_to(to);
    } else {
      clock_.advance(to_u64(a.at("ticks"), "ticks"));
    }
    return;
  }
  if (step.action == "wallet_restore") {
    auto& c = customer(a.at("customer"));
    auto backup = connect::export_wallet(c.wallet, a.at("passphrase"), rng_);
    c.wallet = connect::Wallet(c.label, scenario_.profile);
    trace_.emit(c.label, "wallet.destroyed", {{"backup_bytes", std::to_string(backup.size())}});
    c.wallet = connect::import_wallet(backup, a.at("passphrase"));
    trace_.emit(c.label, "wallet.restored", {{"credentials", std::to_string(c.wallet.credentials().size())}});
    check(result, step, "credentials", std::to_string(c.wallet.credentials().size()));
    return;
  }

  auto& cs = case_ref(a.at("case"));
  auto& b = bank(cs.bank);
  std::string error = "none";
  try {
    if (step.action == "revoke") {
      kyc::revoke_case_credential(b, cs.case_id, *env_);
    } else if (step.action == "transact") {
      kyc::TransactionRecord tx{clock_.now(), to_u64(a.at("amount"), "amount"),
                                a.count("counterparty") ? a.at("counterparty") : "counterparty",
                                a.count("direction") && a.at("direction") == "out" ? kyc::Direction::Out
                                                                                  : kyc::Direction::In};
      auto alerts = kyc::record_transaction(b, cs.case_id, tx, *env_);
      std::vector<std::string> kinds;
      for (const auto& al : alerts) kinds.emplace_back(to_string(al.kind));
      check_list(result, step, "alerts", kinds);
      check(result, step, "level", std::string(to_string(b.case_file(cs.case_id).risk.level)));
    } else if (step.action == "reproof") {
      bool ok = kyc::reproof(b, customer(cs.customer), cs.case_id, *env_);
      check(result, step, "ok", bool_text(ok));
      check(result, step, "level", std::string(to_string(b.case_file(cs.case_id).risk.level)));
    } else if (step.action == "purge") {
      kyc::purge_record(b, cs.case_id, *env_);
    }
  } catch (const kyc::KycError& e) {
    error = std::string(to_string(e.code()));
  } catch (const anoncred::AnoncredError& e) {
    error = std::string(to_string(e.code()));
  } catch (const ledger::LedgerError& e) {
    error = std::string(to_string(e.code()));
  }
  if (error != "none") trace_.emit("harness", "step.error", {{"line", std::to_string(step.line)}, {"code", error}});
  if (step.expect.count("error")) {
    check(result, step, "error", error);
  } else if (error != "none" && result.passed) {
    result.passed = false;
    result.first_failure = "line " + std::to_string(step.line) + " (" + step.action + "): unexpected " + error;
  }
}

void Simulation::audit(RunResult& result) {
  auto& s = result.summary;
  auto& out = s["audit"];
  out["pii_hits"] = nlohmann::json::array();
  const auto terms = pii_terms();
  bool chains_ok = true, replicas_ok = true;
  for (const auto& [id, l] : ledgers_) {
    for (const auto& h : ledger::scan_terms(id, l->blocks(), terms))
      out["pii_hits"].push_back({{"ledger", h.ledger_id}, {"height", h.height}, {"term", h.term}});
    chains_ok = chains_ok && l->verify();
    replicas_ok = replicas_ok && l->replicas_consistent();
  }
  out["chains_verified"] = chains_ok;
  out["replicas_consistent"] = replicas_ok;

  auto violations = nlohmann::json::array();
  for (const auto& c : cases_) {
    const auto& f = bank(c.bank).case_file(c.case_id);
    const auto& h = f.kase.history();
    for (std::size_t i = 1; i < h.size(); ++i)
      if (!kyc::allowed_transition(h[i - 1], h[i]))
        violations.push_back(c.ref + ": " + std::string(to_string(h[i - 1])) + " -> " + std::string(to_string(h[i])));
    auto opened = std::find(h.begin(), h.end(), kyc::CaseState::AccountOpened);
    if (opened != h.end() && (std::find(h.begin(), opened, kyc::CaseState::Screened) == opened ||
                              std::find(h.begin(), opened, kyc::CaseState::RiskAssessed) == opened))
      violations.push_back(c.ref + ": AccountOpened without screening and risk assessment");
    bool sanctioned = std::any_of(f.hits.begin(), f.hits.end(), [](const auto& hit) {
      return hit.kind == kyc::ListKind::Terrorism || hit.kind == kyc::ListKind::Aml;
    });
    if (sanctioned && (opened != h.end() || f.stats.credential_issued))
      violations.push_back(c.ref + ": sanctions hit but account or credential");
    const auto& store = bank(c.bank).records;
    bool purged = std::any_of(store.deletions().begin(), store.deletions().end(),
                              [&](const auto& d) { return d.event == "record.purged " + c.case_id; });
    if (f.kase.visited(kyc::CaseState::AccountOpened) && !store.find(c.case_id) && !purged)
      violations.push_back(c.ref + ": opened account without a record");
  }
  out["state_machine_violations"] = violations;

  std::string problem;
  if (!out["pii_hits"].empty()) problem = "customer data found on a ledger";
  else if (!chains_ok) problem = "chain verification failed";
  else if (!replicas_ok) problem = "replicas diverged";
  else if (!violations.empty()) problem = "state machine violation: " + violations[0].get<std::string>();
  if (!problem.empty() && result.passed) {
    result.passed = false;
    result.first_failure = "audit: " + problem;
  }
  trace_.emit("harness", "audit", {{"result", problem.empty() ? "clean" : problem}});
}

RunResult Simulation::run() {
  RunResult result;
  trace_.emit("harness", "scenario.start", {{"name", scenario_.name}, {"seed", std::to_string(scenario_.seed)}});
  for (const auto& step : scenario_.steps) execute(step, result);
  audit(result);

  auto& s = result.summary;
  s["scenario"] = scenario_.name;
  s["seed"] = scenario_.seed;
  s["profile"] = scenario_.profile == crypto::Profile::Test ? "TEST" : "DEFAULT";
  s["final_tick"] = clock_.now();
  s["cases"] = nlohmann::json::array();
  for (const auto& c : cases_) {
    const auto& f = bank(c.bank).case_file(c.case_id);
    nlohmann::json j = {{"ref", c.ref},
                        {"case_id", c.case_id},
                        {"flow", c.flow},
                        {"bank", c.bank},
                        {"customer", c.customer},
                        {"state", std::string(to_string(f.kase.state()))},
                        {"risk_level", std::string(to_string(f.risk.level))},
                        {"risk_score", f.risk.score},
                        {"appends_during_flow", f.stats.ledger_appends},
                        {"reads_during_flow", f.stats.ledger_reads},
                        {"documents_received", f.stats.documents_received},
                        {"credential_issued", f.stats.credential_issued}};
    j["reject_reason"] = f.kase.reject_reason() ? std::string(to_string(*f.kase.reject_reason())) : "";
    j["attributes_requested"] = f.stats.attributes_requested;
    s["cases"].push_back(j);
  }
  s["ledgers"] = nlohmann::json::array();
  for (const auto& [id, l] : ledgers_) {
    nlohmann::json objects = nlohmann::json::object();
    for (const auto& b : l->blocks())
      for (const auto& tx : b.txs) {
        auto key = std::string(to_string(tx.kind));
        objects[key] = objects.value(key, 0) + 1;
      }
    s["ledgers"].push_back({{"id", id},
                            {"height", l->blocks().size() - 1},
                            {"appends", l->append_count()},
                            {"reads", l->read_count()},
                            {"objects", objects}});
  }
  s["expectations"] = {{"checked", result.checked}, {"passed", result.passed}};
  s["first_failure"] = result.first_failure;
  trace_.emit("harness", "scenario.end", {{"passed", bool_text(result.passed)}});
  return result;
}

}  // namespace ssikyc::sim
