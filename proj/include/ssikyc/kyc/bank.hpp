#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ssikyc/anoncred/issuance.hpp"
#include "ssikyc/anoncred/presentation.hpp"
#include "ssikyc/clock.hpp"
#include "ssikyc/connect/connection.hpp"
#include "ssikyc/connect/wallet.hpp"
#include "ssikyc/crypto/rng.hpp"
#include "ssikyc/kyc/case.hpp"
#include "ssikyc/kyc/documents.hpp"
#include "ssikyc/kyc/monitoring.hpp"
#include "ssikyc/kyc/records.hpp"
#include "ssikyc/kyc/risk.hpp"
#include "ssikyc/kyc/screening.hpp"
#include "ssikyc/ledger/ledger.hpp"
#include "ssikyc/trace.hpp"

namespace ssikyc::kyc {

// Attributes of the KYC credential, in schema order.
inline const std::vector<std::string> kKycAttributes = {"name", "dob", "address", "id_number"};

struct BankConfig {
  // Credential definitions whose KYC credentials allow fast onboarding.
  std::vector<std::string> accept_kyc;
  // Credential definitions trusted for individual attributes (e.g. a government ID).
  std::vector<std::string> accept_partial;
  // Credential definitions trusted for the income attribute during EDD.
  std::vector<std::string> accept_income;
  RiskWeights risk;
  MonitoringConfig monitoring;
  Tick retention_ticks = kDefaultRetentionTicks;
  Tick edd_timeout = 14;
  Tick credential_validity = 360;
  std::uint32_t registry_capacity = 1024;
  bool fallback_to_new_to_kyc = true;

  // YAML mapping with the keys accept_kyc, accept_partial, accept_income,
  // retention_ticks, reproof_interval, edd_timeout, credential_validity,
  // registry_capacity, fallback_to_new_to_kyc, risk{...}, monitoring{...}.
  // Throws BadConfig on unknown keys or bad values.
  static BankConfig parse(std::string_view yaml);
};

struct Environment {
  LogicalClock& clock;
  const ledger::Resolver& resolver;
  connect::MailboxNetwork& network;
  crypto::Rng& rng;
  Trace* trace = nullptr;
  // Customers require an attestation from this DID on a bank's invitation key.
  std::optional<std::string> trusted_attester;

  void emit(std::string_view actor, std::string_view event,
            std::vector<std::pair<std::string, std::string>> details = {}) const;
};

struct Customer {
  Customer(std::string name, crypto::Profile p) : label(std::move(name)), wallet(label, p) {}

  std::string label;
  connect::Wallet wallet;
  std::vector<AnalogDocument> documents;
  RiskProfile profile;
  // Ticks the customer takes to answer an EDD request; empty means never.
  std::optional<Tick> edd_response_delay = 0;

  std::string endpoint() const { return "mailbox://" + label; }
};

struct FlowStats {
  std::uint64_t ledger_appends = 0;
  std::uint64_t ledger_reads = 0;
  std::vector<DocType> documents_requested;
  std::set<std::string> attributes_requested;  // attributes asked for as analog documents
  std::uint64_t documents_received = 0;
  bool credential_issued = false;
};

// Everything a bank holds about one onboarding case.
struct CaseFile {
  KycCase kase;
  FlowStats stats;
  std::string customer_connection;
  RiskProfile profile;
  std::vector<ScreeningHit> hits;
  RiskAssessment risk;
  MonitoringFindings findings;
  std::vector<Bytes> presentations;
  std::vector<TransactionRecord> transactions;
  std::vector<Alert> alerts;
  Tick last_proof = 0;
  std::optional<Tick> proof_expiration;
  std::optional<std::uint32_t> issued_index;
};

// A bank agent: issuer of its own KYC credential, verifier for fast
// onboarding, and keeper of case files and customer records.
class Bank {
 public:
  Bank(std::string label, crypto::Profile profile, BankConfig config);
  Bank(const Bank&) = delete;
  Bank& operator=(const Bank&) = delete;

  // Public DID with the bank's service endpoint, KYC schema, revocable
  // credential definition and its revocation registry.
  void bootstrap(ledger::Ledger& ledger, crypto::Rng& rng);

  const std::string& label() const { return label_; }
  std::string endpoint() const { return "mailbox://" + label_; }
  connect::Wallet& wallet() { return wallet_; }
  const connect::Wallet& wallet() const { return wallet_; }
  anoncred::Issuer& issuer();
  anoncred::Verifier& verifier() { return verifier_; }
  const std::string& kyc_cred_def_id() const { return kyc_cred_def_id_; }
  const std::string& kyc_schema_id() const { return kyc_schema_id_; }
  ledger::Ledger* home_ledger() const { return home_; }

  BankConfig config;
  ScreeningLists lists;
  RecordStore records;

  CaseFile& open_case(const std::string& customer, Tick now);
  CaseFile& case_file(const std::string& case_id);
  const std::map<std::string, CaseFile>& cases() const { return cases_; }

 private:
  std::string label_;
  connect::Wallet wallet_;
  std::unique_ptr<anoncred::Issuer> issuer_;
  anoncred::Verifier verifier_;
  std::string kyc_schema_id_;
  std::string kyc_cred_def_id_;
  ledger::Ledger* home_ = nullptr;
  std::uint32_t next_case_ = 1;
  std::map<std::string, CaseFile> cases_;
};

// Onboarding choreographies. Every failure ends the case in Rejected with a
// coded reason; none of them throws for an ordinary business outcome.
CaseFile& run_completely_new_onboarding(Bank& bank, Customer& customer, Environment& env);
CaseFile& run_fast_onboarding(Bank& bank, Customer& customer, Environment& env);
CaseFile& run_new_to_kyc(Bank& bank, Customer& customer, Environment& env);

// Enhanced due diligence for a case in EddRequested: asks for an income
// credential or an income statement. Returns true if satisfied in time.
bool request_edd(Bank& bank, Customer& customer, CaseFile& file, Environment& env);

// Ongoing monitoring. The first call moves an opened account to Monitoring.
std::vector<Alert> record_transaction(Bank& bank, const std::string& case_id, const TransactionRecord& tx,
                                      Environment& env);
// Asks the customer for a fresh presentation; a failure triggers a risk
// reassessment (never a freeze). Returns whether the proof verified.
bool reproof(Bank& bank, Customer& customer, const std::string& case_id, Environment& env);
bool reproof_due(const Bank& bank, const CaseFile& file, Tick now);

// Revokes the KYC credential the bank issued in this case.
void revoke_case_credential(Bank& bank, const std::string& case_id, Environment& env);
void purge_record(Bank& bank, const std::string& case_id, Environment& env);

// Issues a credential over an existing connection (offer, request, credential
// messages), validated and stored by the holder.
const anoncred::HeldCredential& issue_over_connection(anoncred::Issuer& issuer, const std::string& issuer_conn,
                                                      connect::Wallet& holder, const std::string& holder_conn,
                                                      const std::string& cred_def_id,
                                                      const std::map<std::string, std::string>& values,
                                                      Tick expiration, Environment& env);

// Establishes a connection from an invitation by `inviter`; returns
// (inviter connection id, invitee connection id).
std::pair<std::string, std::string> establish_connection(connect::Wallet& inviter, const std::string& inviter_endpoint,
                                                         connect::Wallet& invitee, const std::string& invitee_endpoint,
                                                         Environment& env);

}  // namespace ssikyc::kyc
