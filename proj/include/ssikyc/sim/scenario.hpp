#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ssikyc/clock.hpp"
#include "ssikyc/connect/connection.hpp"
#include "ssikyc/crypto/rng.hpp"
#include "ssikyc/kyc/bank.hpp"
#include "ssikyc/ledger/ledger.hpp"
#include "ssikyc/trace.hpp"

namespace ssikyc::sim {

// Malformed or inconsistent scenario file.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IssuerSpec {
  std::string label;
  std::string ledger;
  std::string schema_name;
  std::string schema_version = "1.0";
  std::vector<std::string> attributes;
  std::string tag;
  bool revocable = false;
  std::uint32_t capacity = 64;
};

struct BankSpec {
  std::string label;
  std::string ledger;
  // Labels of banks or issuers, or literal credential definition ids.
  std::vector<std::string> accept_kyc;
  std::vector<std::string> accept_partial;
  std::vector<std::string> accept_income;
  kyc::BankConfig config;
  kyc::ScreeningLists lists;
};

struct CredentialSpec {
  std::string issuer;
  std::map<std::string, std::string> values;
  Tick expiration = 1000;
};

struct CustomerSpec {
  std::string label;
  std::vector<kyc::AnalogDocument> documents;
  std::vector<CredentialSpec> credentials;
  kyc::RiskProfile profile;
  std::optional<Tick> edd_response_delay = 0;
};

struct Step {
  std::string action;
  std::map<std::string, std::string> args;
  // Expected outcome fields; values kept as YAML text and compared per key.
  std::map<std::string, std::string> expect;
  std::map<std::string, std::vector<std::string>> expect_lists;
  std::size_t line = 0;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  crypto::Profile profile = crypto::Profile::Test;
  std::vector<std::string> ledgers;
  std::optional<std::string> trusted_attester;
  std::vector<IssuerSpec> issuers;
  std::vector<BankSpec> banks;
  std::vector<CustomerSpec> customers;
  std::vector<Step> steps;
};

// Parses and validates a scenario (YAML). Throws ScenarioError.
Scenario parse_scenario(std::string_view text);

struct CaseSummary {
  std::string ref;
  std::string bank;
  std::string customer;
  std::string case_id;
  std::string flow;
};

struct RunResult {
  bool passed = true;
  std::size_t checked = 0;
  std::string first_failure;
  nlohmann::json summary;
};

// One isolated, single-threaded execution of a scenario on a logical clock.
class Simulation {
 public:
  explicit Simulation(Scenario scenario);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  RunResult run();

  const Scenario& scenario() const { return scenario_; }
  const Trace& trace() const { return trace_; }
  const LogicalClock& clock() const { return clock_; }
  const ledger::Resolver& resolver() const { return resolver_; }
  ledger::Ledger& ledger(const std::string& id);
  kyc::Bank& bank(const std::string& label);
  kyc::Customer& customer(const std::string& label);
  const std::vector<CaseSummary>& cases() const { return cases_; }
  const kyc::CaseFile& case_file(const std::string& ref);
  // Every attribute value a customer brings into the scenario.
  std::vector<std::string> pii_terms() const;

 private:
  struct IssuerState;

  void execute(const Step& step, RunResult& result);
  void bootstrap();
  void onboard(const Step& step, RunResult& result);
  std::string resolve_cred_def(const std::string& ref) const;
  CaseSummary& case_ref(const std::string& ref);
  void check(RunResult& result, const Step& step, const std::string& key, const std::string& actual);
  void check_list(RunResult& result, const Step& step, const std::string& key, std::vector<std::string> actual);
  void audit(RunResult& result);

  Scenario scenario_;
  LogicalClock clock_;
  crypto::Rng rng_;
  Trace trace_;
  ledger::Resolver resolver_;
  connect::MailboxNetwork network_;
  std::map<std::string, std::unique_ptr<ledger::Ledger>> ledgers_;
  std::map<std::string, std::unique_ptr<kyc::Bank>> banks_;
  std::map<std::string, std::unique_ptr<IssuerState>> issuers_;
  std::map<std::string, std::unique_ptr<kyc::Customer>> customers_;
  std::unique_ptr<connect::Wallet> attester_;
  std::unique_ptr<kyc::Environment> env_;
  std::vector<CaseSummary> cases_;
  bool bootstrapped_ = false;
};

}  // namespace ssikyc::sim
