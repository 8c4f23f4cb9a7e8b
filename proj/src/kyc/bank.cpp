#include "ssikyc/kyc/bank.hpp"

#include <algorithm>

#include <yaml-cpp/yaml.h>

#include "ssikyc/connect/errors.hpp"
#include "ssikyc/connect/exchange.hpp"

namespace ssikyc::kyc {

namespace {

// ---- configuration ------------------------------------------------------

template <class T>
T scalar(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw KycError(KycErrc::BadConfig, "bad value for " + key);
  }
}

std::vector<std::string> string_list(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) throw KycError(KycErrc::BadConfig, key + " must be a list");
  std::vector<std::string> out;
  for (const auto& item : n) out.push_back(scalar<std::string>(item, key));
  return out;
}

template <class Fields>
void apply_section(const YAML::Node& n, const std::string& section, const Fields& fields) {
  if (!n.IsMap()) throw KycError(KycErrc::BadConfig, section + " must be a mapping");
  for (const auto& kv : n) {
    auto key = kv.first.as<std::string>();
    auto it = fields.find(key);
    if (it == fields.end()) throw KycError(KycErrc::BadConfig, "unknown key " + section + "." + key);
    it->second(kv.second, section + "." + key);
  }
}

// ---- messages over a connection -----------------------------------------

struct Message {
  std::string type;
  Bytes body;
};

Message transmit(Environment& env, connect::Wallet& from, const std::string& from_conn, connect::Wallet& to,
                 const std::string& to_conn, const std::string& type, const Bytes& body) {
  auto& out = from.connection(from_conn);
  Writer w;
  w.str(type).bytes(body);
  auto env_bytes = connect::send(out, w.data()).to_bytes();
  const auto mailbox = out.their_endpoint;
  if (!env.network.has(mailbox)) env.network.open(mailbox);
  env.network.deliver(mailbox, env_bytes);
  env.emit(from.owner(), "msg.sent", {{"type", type}, {"to", to.owner()}, {"bytes", std::to_string(env_bytes.size())}});

  auto items = env.network.at(mailbox).drain();
  auto& in = to.connection(to_conn);
  Message m;
  for (const auto& item : items) {
    auto plain = connect::recv(in, connect::Envelope::from_bytes(item));
    Reader r(plain);
    m.type = r.str();
    m.body = r.bytes();
    r.expect_done();
  }
  return m;
}

template <class T>
Bytes encode(const T& v) {
  Writer w;
  v.encode(w);
  return std::move(w).take();
}

template <class T>
T decode(const Bytes& b) {
  Reader r(b);
  auto v = T::decode(r);
  r.expect_done();
  return v;
}

Bytes encode_documents(const std::vector<AnalogDocument>& docs) {
  Writer w;
  w.count(docs.size());
  for (const auto& d : docs) d.encode(w);
  return std::move(w).take();
}

std::vector<AnalogDocument> decode_documents(const Bytes& b) {
  Reader r(b);
  std::vector<AnalogDocument> docs(r.count());
  for (auto& d : docs) d = AnalogDocument::decode(r);
  r.expect_done();
  return docs;
}

std::string join(const std::vector<std::string>& v, std::string_view sep = ",") {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : std::string(sep)) + s;
  return out;
}

// ---- case bookkeeping ---------------------------------------------------

void move_to(Bank& bank, CaseFile& f, CaseState to, Environment& env, std::string_view detail = {}) {
  auto from = f.kase.state();
  f.kase.transition(to, env.clock.now(), detail);
  env.emit(bank.label(), "case.transition",
           {{"case", f.kase.id()}, {"from", std::string(to_string(from))}, {"to", std::string(to_string(to))}});
}

void reject(Bank& bank, CaseFile& f, RejectReason reason, Environment& env, std::string_view detail = {}) {
  auto from = f.kase.state();
  f.kase.reject(reason, env.clock.now(), detail);
  env.emit(bank.label(), "case.transition",
           {{"case", f.kase.id()}, {"from", std::string(to_string(from))}, {"to", "Rejected"},
            {"reason", std::string(to_string(reason))}});
  if (f.kase.visited(CaseState::IdentityVerified) || f.kase.visited(CaseState::ProofVerified))
    bank.records.keep_record(f.kase, f.presentations, env.clock.now(), bank.config.retention_ticks);
}

struct FlowCounter {
  const ledger::Resolver& resolver;
  std::uint64_t appends0 = resolver.total_appends();
  std::uint64_t reads0 = resolver.total_reads();

  void finish(CaseFile& f) const {
    f.stats.ledger_appends = resolver.total_appends() - appends0;
    f.stats.ledger_reads = resolver.total_reads() - reads0;
  }
};

bool connect_customer(Bank& bank, Customer& customer, CaseFile& f, Environment& env) {
  try {
    auto [bank_conn, cust_conn] =
        establish_connection(bank.wallet(), bank.endpoint(), customer.wallet, customer.endpoint(), env);
    f.kase.connection_id = bank_conn;
    f.customer_connection = cust_conn;
  } catch (const connect::ConnectError& e) {
    reject(bank, f, RejectReason::ConnectionFailed, env, to_string(e.code()));
    return false;
  } catch (const ledger::LedgerError& e) {
    reject(bank, f, RejectReason::ConnectionFailed, env, to_string(e.code()));
    return false;
  }
  move_to(bank, f, CaseState::ConnectionEstablished, env);
  return true;
}

Message to_customer(Bank& bank, Customer& c, CaseFile& f, Environment& env, const std::string& type, const Bytes& body) {
  return transmit(env, bank.wallet(), f.kase.connection_id, c.wallet, f.customer_connection, type, body);
}

Message to_bank(Bank& bank, Customer& c, CaseFile& f, Environment& env, const std::string& type, const Bytes& body) {
  return transmit(env, c.wallet, f.customer_connection, bank.wallet(), f.kase.connection_id, type, body);
}

// Customer agent: answers a proof request from its wallet.
Message customer_presents(Bank& bank, Customer& c, CaseFile& f, Environment& env, const anoncred::ProofRequest& req,
                          bool partial) {
  auto m = to_customer(bank, c, f, env, partial ? "partial_proof_request" : "proof_request", encode(req));
  auto request = decode<anoncred::ProofRequest>(m.body);
  anoncred::PresentationOptions opts{bank.label(), env.clock.now(), false, std::nullopt};
  if (partial) {
    auto p = anoncred::create_partial_presentation(c.wallet, request, env.resolver, env.rng, opts);
    Writer w;
    p.answered.encode(w);
    w.boolean(p.vp.has_value());
    if (p.vp) w.bytes(p.vp->to_bytes());
    w.count(p.missing.size());
    for (const auto& a : p.missing) w.str(a);
    env.emit(c.label, "proof.presented", {{"case", f.kase.id()}, {"missing", join(p.missing)}});
    return to_bank(bank, c, f, env, "partial_presentation", w.data());
  }
  try {
    auto vp = anoncred::create_presentation(c.wallet, request, env.resolver, env.rng, opts);
    env.emit(c.label, "proof.presented", {{"case", f.kase.id()}, {"credentials", std::to_string(vp.credentials.size())}});
    return to_bank(bank, c, f, env, "presentation", vp.to_bytes());
  } catch (const anoncred::AnoncredError& e) {
    env.emit(c.label, "proof.declined", {{"case", f.kase.id()}, {"code", std::string(to_string(e.code()))}});
    auto code = std::string(to_string(e.code()));
    return to_bank(bank, c, f, env, "presentation_error", Bytes(code.begin(), code.end()));
  }
}

std::string reasons_text(const anoncred::VerificationResult& r) {
  std::vector<std::string> v;
  for (auto reason : r.reasons) v.emplace_back(to_string(reason));
  return join(v);
}

// Verifies a presentation; on success records it and its attributes.
bool accept_presentation(Bank& bank, CaseFile& f, Environment& env, const Bytes& vp_bytes,
                         const anoncred::ProofRequest& req, std::string& why) {
  anoncred::VerifiablePresentation vp;
  try {
    vp = anoncred::VerifiablePresentation::from_bytes(vp_bytes);
  } catch (const CodecError&) {
    why = "MalformedPresentation";
    return false;
  }
  auto res = anoncred::verify_presentation(bank.verifier(), vp, req, env.resolver, env.clock.now());
  env.emit(bank.label(), res.accepted ? "proof.verified" : "proof.rejected",
           {{"case", f.kase.id()}, {"reasons", reasons_text(res)}});
  if (!res.accepted) {
    why = reasons_text(res);
    return false;
  }
  for (const auto& [k, v] : res.attributes) f.kase.attributes[k] = v;
  f.presentations.push_back(vp_bytes);
  f.last_proof = env.clock.now();
  for (const auto& c : vp.credentials)
    f.proof_expiration = f.proof_expiration ? std::min(*f.proof_expiration, c.expiration) : c.expiration;
  return true;
}

std::vector<anoncred::AttributeRequest> kyc_items(const std::vector<std::string>& cred_defs) {
  std::vector<anoncred::AttributeRequest> items;
  for (const auto& a : kKycAttributes) items.push_back({a, {}, cred_defs});
  return items;
}

bool collect_documents(Bank& bank, Customer& c, CaseFile& f, Environment& env, const std::set<std::string>& missing) {
  auto wanted = documents_for(missing);
  f.stats.documents_requested = wanted;
  f.stats.attributes_requested = missing;
  move_to(bank, f, CaseState::DocumentsRequested, env);
  Writer w;
  w.count(wanted.size());
  for (auto t : wanted) w.str(to_string(t));
  auto req = to_customer(bank, c, f, env, "document_request", w.data());

  // Customer agent: hands over every document of a requested type; an ID card
  // stands in for a passport.
  Reader r(req.body);
  std::set<std::string> types;
  for (auto n = r.count(); n > 0; --n) types.insert(r.str());
  if (types.count(std::string(to_string(DocType::Passport)))) types.insert(std::string(to_string(DocType::IdCard)));
  std::vector<AnalogDocument> handed;
  for (const auto& d : c.documents)
    if (types.count(std::string(to_string(d.type)))) handed.push_back(d);
  auto reply = to_bank(bank, c, f, env, "documents", encode_documents(handed));

  auto docs = decode_documents(reply.body);
  f.stats.documents_received += docs.size();
  env.emit(bank.label(), "documents.received", {{"case", f.kase.id()}, {"count", std::to_string(docs.size())}});
  DocumentCheck check;
  try {
    check = verify_documents(docs, env.clock.now());
  } catch (const KycError& e) {
    reject(bank, f, e.code() == KycErrc::ExpiredDocument ? RejectReason::ExpiredDocument : RejectReason::DocumentCheckFailed,
           env, to_string(e.code()));
    return false;
  }
  for (const auto& conflict : check.conflicts) f.kase.note(env.clock.now(), "documents.conflict " + conflict);
  for (const auto& a : missing) {
    if (!check.attributes.count(a)) {
      reject(bank, f, RejectReason::DocumentCheckFailed, env, "missing " + a);
      return false;
    }
  }
  for (const auto& a : kKycAttributes) {
    auto it = check.attributes.find(a);
    if (it == check.attributes.end()) continue;
    if (missing.count(a))
      f.kase.attributes[a] = it->second;
    else if (f.kase.attributes.count(a) && f.kase.attributes[a] != it->second)
      f.kase.note(env.clock.now(), "documents.mismatch " + a);
  }
  move_to(bank, f, CaseState::IdentityVerified, env);
  return true;
}

std::optional<std::string> attr(const CaseFile& f, const std::string& name) {
  auto it = f.kase.attributes.find(name);
  if (it == f.kase.attributes.end()) return std::nullopt;
  return it->second;
}

// Screening, risk and (if needed) EDD. False if the case ended in Rejected.
bool screen_and_assess(Bank& bank, Customer& c, CaseFile& f, Environment& env) {
  f.hits = name_screen(attr(f, "name").value_or(""), attr(f, "dob"), bank.lists);
  for (const auto& h : f.hits)
    f.kase.note(env.clock.now(), "screening.hit " + std::string(to_string(h.kind)) + " " + std::string(to_string(h.grade)));
  move_to(bank, f, CaseState::Screened, env, "hits=" + std::to_string(f.hits.size()));

  f.profile = c.profile;
  f.risk = assess_risk(f.hits, f.profile, bank.config.risk);
  move_to(bank, f, CaseState::RiskAssessed, env,
          "score=" + std::to_string(f.risk.score) + " level=" + std::string(to_string(f.risk.level)));
  env.emit(bank.label(), "risk.assessed",
           {{"case", f.kase.id()}, {"score", std::to_string(f.risk.score)}, {"level", std::string(to_string(f.risk.level))}});
  if (f.risk.forced_reject) {
    reject(bank, f, RejectReason::ScreeningHit, env);
    return false;
  }
  if (f.risk.level == RiskLevel::High) {
    move_to(bank, f, CaseState::EddRequested, env);
    return request_edd(bank, c, f, env);
  }
  return true;
}

bool issue_kyc_credential(Bank& bank, Customer& c, CaseFile& f, Environment& env) {
  std::map<std::string, std::string> values;
  for (const auto& a : kKycAttributes) values[a] = f.kase.attributes.at(a);
  try {
    const auto& held = issue_over_connection(bank.issuer(), f.kase.connection_id, c.wallet, f.customer_connection,
                                             bank.kyc_cred_def_id(), values,
                                             env.clock.now() + bank.config.credential_validity, env);
    if (held.vc.revocation) f.issued_index = held.vc.revocation->index;
  } catch (const anoncred::AnoncredError& e) {
    reject(bank, f, RejectReason::IssuanceFailed, env, to_string(e.code()));
    return false;
  }
  f.stats.credential_issued = true;
  f.kase.note(env.clock.now(), "credential.issued");
  return true;
}

void open_account(Bank& bank, CaseFile& f, Environment& env) {
  move_to(bank, f, CaseState::AccountOpened, env);
  bank.records.keep_record(f.kase, f.presentations, env.clock.now(), bank.config.retention_ticks);
  env.emit(bank.label(), "record.kept", {{"case", f.kase.id()}});
}

// New-to-KYC from an established connection: prove what the wallet can,
// collect the rest on paper, then issue the bank's KYC credential.
void continue_new_to_kyc(Bank& bank, Customer& c, CaseFile& f, Environment& env) {
  auto sources = bank.config.accept_kyc;
  sources.insert(sources.end(), bank.config.accept_partial.begin(), bank.config.accept_partial.end());
  sources.push_back(bank.kyc_cred_def_id());
  auto req = bank.verifier().make_request(kyc_items(sources), env.rng, env.clock.now());
  auto reply = customer_presents(bank, c, f, env, req, true);

  Reader r(reply.body);
  auto answered = anoncred::ProofRequest::decode(r);
  std::optional<Bytes> vp_bytes;
  if (r.boolean()) vp_bytes = r.bytes();
  r.count();  // the customer's own list of missing attributes; the bank derives it below

  bool subset = answered.nonce == req.nonce && answered.non_revoked_as_of == req.non_revoked_as_of &&
                std::all_of(answered.attributes.begin(), answered.attributes.end(), [&](const auto& a) {
                  return std::find(req.attributes.begin(), req.attributes.end(), a) != req.attributes.end();
                });
  if (!subset) {
    reject(bank, f, RejectReason::ProofInvalid, env, "answered request differs");
    return;
  }
  bool all_full_kyc = false;
  if (vp_bytes) {
    std::string why;
    if (!accept_presentation(bank, f, env, *vp_bytes, answered, why)) {
      reject(bank, f, RejectReason::ProofInvalid, env, why);
      return;
    }
    auto vp = anoncred::VerifiablePresentation::from_bytes(*vp_bytes);
    all_full_kyc = std::all_of(vp.credentials.begin(), vp.credentials.end(), [&](const auto& pc) {
      return std::find(bank.config.accept_kyc.begin(), bank.config.accept_kyc.end(), pc.cred_def_id) !=
                 bank.config.accept_kyc.end() ||
             pc.cred_def_id == bank.kyc_cred_def_id();
    });
    move_to(bank, f, CaseState::ProofVerified, env);
  }

  std::set<std::string> missing;
  for (const auto& a : kKycAttributes)
    if (!f.kase.attributes.count(a)) missing.insert(a);
  env.emit(bank.label(), "coverage",
           {{"case", f.kase.id()}, {"proven", std::to_string(kKycAttributes.size() - missing.size())},
            {"missing", join(std::vector<std::string>(missing.begin(), missing.end()))}});
  if (!missing.empty() && !collect_documents(bank, c, f, env, missing)) return;
  if (!screen_and_assess(bank, c, f, env)) return;
  bool needs_credential = !missing.empty() || !all_full_kyc;
  if (needs_credential && !issue_kyc_credential(bank, c, f, env)) return;
  open_account(bank, f, env);
}

void reassess(Bank& bank, CaseFile& f, Environment& env, const std::string& cause) {
  auto before = f.risk;
  f.risk = assess_risk(f.hits, f.profile, bank.config.risk, f.findings);
  f.kase.note(env.clock.now(), "risk.reassessed " + cause + " score=" + std::to_string(f.risk.score) +
                                   " level=" + std::string(to_string(f.risk.level)));
  env.emit(bank.label(), "risk.reassessed",
           {{"case", f.kase.id()}, {"cause", cause}, {"from", std::string(to_string(before.level))},
            {"to", std::string(to_string(f.risk.level))}, {"score", std::to_string(f.risk.score)}});
}

void enter_monitoring(Bank& bank, CaseFile& f, Environment& env) {
  if (f.kase.state() == CaseState::AccountOpened) move_to(bank, f, CaseState::Monitoring, env);
  if (f.kase.state() != CaseState::Monitoring)
    throw KycError(KycErrc::IllegalTransition, f.kase.id() + " is not an open account");
}

}  // namespace

// ---- configuration ------------------------------------------------------

BankConfig BankConfig::parse(std::string_view yaml) {
  BankConfig c;
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw KycError(KycErrc::BadConfig, e.what());
  }
  if (root.IsNull()) return c;
  using Setter = std::function<void(const YAML::Node&, const std::string&)>;
  auto u64 = [](auto& field) {
    return Setter([&field](const YAML::Node& n, const std::string& k) {
      field = scalar<std::uint64_t>(n, k);
    });
  };
  auto u32 = [](auto& field) {
    return Setter([&field](const YAML::Node& n, const std::string& k) {
      field = scalar<std::uint32_t>(n, k);
    });
  };
  std::map<std::string, Setter> risk = {
      {"terrorism_or_aml", u32(c.risk.terrorism_or_aml)}, {"pep", u32(c.risk.pep)},
      {"negative_press", u32(c.risk.negative_press)},     {"high_risk_country", u32(c.risk.high_risk_country)},
      {"high_volume", u32(c.risk.high_volume)},           {"volume_threshold", u64(c.risk.volume_threshold)},
      {"standard_from", u32(c.risk.standard_from)},       {"high_from", u32(c.risk.high_from)},
      {"failed_reproof", u32(c.risk.failed_reproof)},     {"structuring_alert", u32(c.risk.structuring_alert)},
      {"volume_alert", u32(c.risk.volume_alert)},
  };
  std::map<std::string, Setter> monitoring = {
      {"volume_window", u64(c.monitoring.volume_window)},
      {"volume_multiplier", u64(c.monitoring.volume_multiplier)},
      {"reporting_threshold", u64(c.monitoring.reporting_threshold)},
      {"structuring_count", u64(c.monitoring.structuring_count)},
      {"structuring_window", u64(c.monitoring.structuring_window)},
      {"structuring_band_percent", u64(c.monitoring.structuring_band_percent)},
      {"reproof_interval", u64(c.monitoring.reproof_interval)},
  };
  std::map<std::string, Setter> top = {
      {"accept_kyc", [&](const YAML::Node& n, const std::string& k) { c.accept_kyc = string_list(n, k); }},
      {"accept_partial", [&](const YAML::Node& n, const std::string& k) { c.accept_partial = string_list(n, k); }},
      {"accept_income", [&](const YAML::Node& n, const std::string& k) { c.accept_income = string_list(n, k); }},
      {"retention_ticks", u64(c.retention_ticks)},
      {"reproof_interval", u64(c.monitoring.reproof_interval)},
      {"edd_timeout", u64(c.edd_timeout)},
      {"credential_validity", u64(c.credential_validity)},
      {"registry_capacity", u32(c.registry_capacity)},
      {"fallback_to_new_to_kyc",
       [&](const YAML::Node& n, const std::string& k) { c.fallback_to_new_to_kyc = scalar<bool>(n, k); }},
      {"risk", [&](const YAML::Node& n, const std::string& k) { apply_section(n, k, risk); }},
      {"monitoring", [&](const YAML::Node& n, const std::string& k) { apply_section(n, k, monitoring); }},
  };
  apply_section(root, "config", top);
  if (c.risk.standard_from > c.risk.high_from) throw KycError(KycErrc::BadConfig, "risk.standard_from > risk.high_from");
  return c;
}

void Environment::emit(std::string_view actor, std::string_view event,
                       std::vector<std::pair<std::string, std::string>> details) const {
  if (trace != nullptr) trace->emit(actor, event, std::move(details));
}

// ---- bank ---------------------------------------------------------------

Bank::Bank(std::string label, crypto::Profile profile, BankConfig cfg)
    : config(std::move(cfg)),
      label_(label),
      wallet_(label, profile),
      verifier_(label, crypto::GroupParams::for_profile(profile)) {}

void Bank::bootstrap(ledger::Ledger& ledger, crypto::Rng& rng) {
  connect::create_public_did(wallet_, ledger, {{"agent", endpoint()}}, rng);
  issuer_ = std::make_unique<anoncred::Issuer>(wallet_);
  auto schema = anoncred::register_schema(*issuer_, ledger, "kyc", "1.0", kKycAttributes, rng);
  auto def = anoncred::register_cred_def(*issuer_, ledger, schema, "kyc", true, rng);
  anoncred::create_revocation_registry(*issuer_, ledger, def.cred_def_id, config.registry_capacity, rng);
  kyc_schema_id_ = schema.schema_id;
  kyc_cred_def_id_ = def.cred_def_id;
  home_ = &ledger;
}

anoncred::Issuer& Bank::issuer() {
  if (!issuer_) throw anoncred::AnoncredError(anoncred::AnoncredErrc::NotAnIssuer, label_ + " not bootstrapped");
  return *issuer_;
}

CaseFile& Bank::open_case(const std::string& customer, Tick now) {
  auto id = label_ + "-case-" + std::to_string(next_case_++);
  auto [it, _] = cases_.emplace(id, CaseFile{KycCase(id, customer, now), {}, {}, {}, {}, {}, {}, {}, {}, {}, 0, {}, {}});
  return it->second;
}

CaseFile& Bank::case_file(const std::string& case_id) {
  auto it = cases_.find(case_id);
  if (it == cases_.end()) throw KycError(KycErrc::UnknownCase, case_id);
  return it->second;
}

std::pair<std::string, std::string> establish_connection(connect::Wallet& inviter, const std::string& inviter_endpoint,
                                                         connect::Wallet& invitee, const std::string& invitee_endpoint,
                                                         Environment& env) {
  for (const auto& box : {inviter_endpoint, invitee_endpoint})
    if (!env.network.has(box)) env.network.open(box);
  auto invitation = connect::create_invitation(inviter, inviter_endpoint, env.rng);
  env.emit(inviter.owner(), "invitation.created", {{"public_did", invitation.inviter_public_did}});
  connect::HandshakeOptions opts;
  opts.resolver = &env.resolver;
  opts.trusted_attester = env.trusted_attester;
  opts.trace = env.trace;
  auto [a, b] = connect::connect({inviter, inviter_endpoint}, {invitee, invitee_endpoint}, invitation, opts, env.rng,
                                 &env.network);
  env.emit(invitee.owner(), "connection.established", {{"with", inviter.owner()}});
  return {a.id(), b.id()};
}

const anoncred::HeldCredential& issue_over_connection(anoncred::Issuer& issuer, const std::string& issuer_conn,
                                                      connect::Wallet& holder, const std::string& holder_conn,
                                                      const std::string& cred_def_id,
                                                      const std::map<std::string, std::string>& values,
                                                      Tick expiration, Environment& env) {
  auto& iw = issuer.wallet();
  auto offer = anoncred::create_offer(issuer, cred_def_id, values, expiration, env.rng);
  auto m1 = transmit(env, iw, issuer_conn, holder, holder_conn, "credential_offer", encode(offer));
  holder.ensure_link_secret(env.rng);
  auto request = anoncred::accept_offer(holder, decode<anoncred::CredentialOffer>(m1.body), env.rng);
  auto m2 = transmit(env, holder, holder_conn, iw, issuer_conn, "credential_request", encode(request));
  auto issued = anoncred::issue(issuer, decode<anoncred::CredentialRequest>(m2.body), env.rng);
  auto m3 = transmit(env, iw, issuer_conn, holder, holder_conn, "credential", encode(issued));
  const auto& held = anoncred::store_issued(holder, decode<anoncred::CredentialIssue>(m3.body), env.resolver);
  env.emit(holder.owner(), "credential.stored", {{"cred_def", cred_def_id}});
  return held;
}

// ---- flows --------------------------------------------------------------

CaseFile& run_completely_new_onboarding(Bank& bank, Customer& c, Environment& env) {
  FlowCounter counter{env.resolver};
  auto& f = bank.open_case(c.label, env.clock.now());
  env.emit(bank.label(), "case.opened", {{"case", f.kase.id()}, {"flow", "completely_new"}, {"customer", c.label}});
  c.wallet.ensure_link_secret(env.rng);
  env.emit(c.label, "wallet.provisioned");
  if (connect_customer(bank, c, f, env)) {
    std::set<std::string> all(kKycAttributes.begin(), kKycAttributes.end());
    if (collect_documents(bank, c, f, env, all) && screen_and_assess(bank, c, f, env) &&
        issue_kyc_credential(bank, c, f, env))
      open_account(bank, f, env);
  }
  counter.finish(f);
  return f;
}

CaseFile& run_fast_onboarding(Bank& bank, Customer& c, Environment& env) {
  FlowCounter counter{env.resolver};
  auto& f = bank.open_case(c.label, env.clock.now());
  env.emit(bank.label(), "case.opened", {{"case", f.kase.id()}, {"flow", "fast"}, {"customer", c.label}});
  if (connect_customer(bank, c, f, env)) {
    auto req = bank.verifier().make_request(kyc_items(bank.config.accept_kyc), env.rng, env.clock.now());
    auto reply = customer_presents(bank, c, f, env, req, false);
    if (reply.type == "presentation_error") {
      std::string code(reply.body.begin(), reply.body.end());
      if (code == "NoMatchingCredential" && bank.config.fallback_to_new_to_kyc) {
        f.kase.note(env.clock.now(), "fast.fallback new_to_kyc");
        env.emit(bank.label(), "fast.fallback", {{"case", f.kase.id()}});
        continue_new_to_kyc(bank, c, f, env);
      } else {
        reject(bank, f, RejectReason::ProofInvalid, env, code);
      }
    } else {
      std::string why;
      if (!accept_presentation(bank, f, env, reply.body, req, why)) {
        reject(bank, f, RejectReason::ProofInvalid, env, why);
      } else {
        move_to(bank, f, CaseState::ProofVerified, env);
        if (screen_and_assess(bank, c, f, env)) open_account(bank, f, env);
      }
    }
  }
  counter.finish(f);
  return f;
}

CaseFile& run_new_to_kyc(Bank& bank, Customer& c, Environment& env) {
  FlowCounter counter{env.resolver};
  auto& f = bank.open_case(c.label, env.clock.now());
  env.emit(bank.label(), "case.opened", {{"case", f.kase.id()}, {"flow", "new_to_kyc"}, {"customer", c.label}});
  c.wallet.ensure_link_secret(env.rng);
  if (connect_customer(bank, c, f, env)) continue_new_to_kyc(bank, c, f, env);
  counter.finish(f);
  return f;
}

bool request_edd(Bank& bank, Customer& c, CaseFile& f, Environment& env) {
  const Tick deadline = env.clock.now() + bank.config.edd_timeout;
  std::vector<anoncred::AttributeRequest> items = {{"income", {}, bank.config.accept_income}};
  auto req = bank.verifier().make_request(items, env.rng, env.clock.now());
  env.emit(bank.label(), "edd.requested", {{"case", f.kase.id()}, {"deadline", std::to_string(deadline)}});

  if (!c.edd_response_delay || *c.edd_response_delay > bank.config.edd_timeout) {
    env.clock.advance_to(deadline);
    reject(bank, f, RejectReason::EddTimeout, env);
    return false;
  }
  env.clock.advance(*c.edd_response_delay);

  // Customer agent: an income credential if the wallet has one, else a paper income statement.
  auto m = to_customer(bank, c, f, env, "edd_request", encode(req));
  auto request = decode<anoncred::ProofRequest>(m.body);
  auto proof = anoncred::create_partial_presentation(c.wallet, request, env.resolver, env.rng,
                                                     {bank.label(), env.clock.now(), false, std::nullopt});
  if (proof.vp && proof.missing.empty()) {
    auto reply = to_bank(bank, c, f, env, "presentation", proof.vp->to_bytes());
    std::string why;
    if (!accept_presentation(bank, f, env, reply.body, req, why)) {
      reject(bank, f, RejectReason::ProofInvalid, env, why);
      return false;
    }
    f.kase.note(env.clock.now(), "edd.satisfied credential");
  } else {
    std::vector<AnalogDocument> statements;
    for (const auto& d : c.documents)
      if (d.type == DocType::IncomeStatement) statements.push_back(d);
    if (statements.empty()) {
      env.clock.advance_to(deadline);
      reject(bank, f, RejectReason::EddTimeout, env);
      return false;
    }
    auto reply = to_bank(bank, c, f, env, "documents", encode_documents(statements));
    auto docs = decode_documents(reply.body);
    f.stats.documents_received += docs.size();
    try {
      auto check = verify_documents(docs, env.clock.now());
      if (!check.attributes.count("income")) throw KycError(KycErrc::DocumentCheckFailed, "no income claim");
    } catch (const KycError& e) {
      reject(bank, f, e.code() == KycErrc::ExpiredDocument ? RejectReason::ExpiredDocument : RejectReason::DocumentCheckFailed,
             env, to_string(e.code()));
      return false;
    }
    f.kase.note(env.clock.now(), "edd.satisfied document");
  }
  env.emit(bank.label(), "edd.satisfied", {{"case", f.kase.id()}});
  return true;
}

std::vector<Alert> record_transaction(Bank& bank, const std::string& case_id, const TransactionRecord& tx,
                                      Environment& env) {
  auto& f = bank.case_file(case_id);
  enter_monitoring(bank, f, env);
  f.transactions.push_back(tx);
  auto all = monitor(f.transactions, f.profile.expected_monthly_volume, bank.config.monitoring);
  std::vector<Alert> fresh;
  // Alerts are reported once: compare against those already raised.
  for (const auto& a : all)
    if (std::find(f.alerts.begin(), f.alerts.end(), a) == f.alerts.end()) fresh.push_back(a);
  for (const auto& a : fresh) {
    f.alerts.push_back(a);
    if (a.kind == AlertKind::Structuring) ++f.findings.structuring_alerts;
    if (a.kind == AlertKind::VolumeExceeded) ++f.findings.volume_alerts;
    f.kase.note(env.clock.now(), "alert " + std::string(to_string(a.kind)) + " at " + std::to_string(a.tick));
    env.emit(bank.label(), "monitor.alert", {{"case", case_id}, {"kind", std::string(to_string(a.kind))}});
  }
  if (!fresh.empty()) reassess(bank, f, env, "alert");
  return fresh;
}

bool reproof(Bank& bank, Customer& c, const std::string& case_id, Environment& env) {
  auto& f = bank.case_file(case_id);
  enter_monitoring(bank, f, env);
  auto sources = bank.config.accept_kyc;
  sources.push_back(bank.kyc_cred_def_id());
  auto req = bank.verifier().make_request(kyc_items(sources), env.rng, env.clock.now());
  auto reply = customer_presents(bank, c, f, env, req, false);
  std::string why;
  bool ok = reply.type == "presentation";
  if (ok) {
    f.proof_expiration.reset();
    ok = accept_presentation(bank, f, env, reply.body, req, why);
  } else {
    why.assign(reply.body.begin(), reply.body.end());
  }
  f.kase.note(env.clock.now(), ok ? "reproof.ok" : "reproof.failed " + why);
  env.emit(bank.label(), ok ? "reproof.ok" : "reproof.failed", {{"case", case_id}, {"reasons", why}});
  if (!ok) {
    f.findings.failed_reproof = true;
    reassess(bank, f, env, "reproof");
  }
  return ok;
}

bool reproof_due(const Bank& bank, const CaseFile& file, Tick now) {
  return kyc::reproof_due(now, file.last_proof, file.proof_expiration, bank.config.monitoring);
}

void revoke_case_credential(Bank& bank, const std::string& case_id, Environment& env) {
  auto& f = bank.case_file(case_id);
  if (!f.issued_index) throw KycError(KycErrc::UnknownCase, case_id + " has no issued credential");
  const auto registry = bank.issuer().book(bank.kyc_cred_def_id()).def.registry_id;
  auto reg = anoncred::revoke(bank.issuer(), *bank.home_ledger(), registry, *f.issued_index, env.rng);
  f.kase.note(env.clock.now(), "credential.revoked version=" + std::to_string(reg.version));
  env.emit(bank.label(), "credential.revoked", {{"case", case_id}, {"version", std::to_string(reg.version)}});
}

void purge_record(Bank& bank, const std::string& case_id, Environment& env) {
  bank.records.purge(case_id, env.clock.now());
  env.emit(bank.label(), "record.purged", {{"case", case_id}});
}

}  // namespace ssikyc::kyc
