#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssikyc/clock.hpp"
#include "ssikyc/kyc/errors.hpp"

namespace ssikyc::kyc {

enum class CaseState {
  Initiated,
  ConnectionEstablished,
  DocumentsRequested,
  IdentityVerified,
  ProofVerified,
  Screened,
  RiskAssessed,
  EddRequested,
  AccountOpened,
  Rejected,
  Monitoring,
};
std::string_view to_string(CaseState s);
std::optional<CaseState> case_state_from_string(std::string_view s);

enum class RejectReason {
  ConnectionFailed,
  DocumentCheckFailed,
  ExpiredDocument,
  ProofInvalid,
  ScreeningHit,
  EddTimeout,
  IssuanceFailed,
};
std::string_view to_string(RejectReason r);

// Documented state graph:
//   Initiated             -> ConnectionEstablished
//   ConnectionEstablished -> DocumentsRequested | ProofVerified
//   DocumentsRequested    -> IdentityVerified
//   ProofVerified         -> DocumentsRequested | Screened
//   IdentityVerified      -> Screened
//   Screened              -> RiskAssessed
//   RiskAssessed          -> EddRequested | AccountOpened
//   EddRequested          -> AccountOpened
//   AccountOpened         -> Monitoring
// plus -> Rejected from every state before AccountOpened.
bool allowed_transition(CaseState from, CaseState to);

struct AuditEntry {
  Tick tick = 0;
  std::string event;

  bool operator==(const AuditEntry&) const = default;
};

class KycCase {
 public:
  KycCase(std::string case_id, std::string customer, Tick opened);

  const std::string& id() const { return id_; }
  const std::string& customer() const { return customer_; }
  CaseState state() const { return state_; }
  const std::optional<RejectReason>& reject_reason() const { return reject_reason_; }
  const std::vector<AuditEntry>& audit() const { return audit_; }
  const std::vector<CaseState>& history() const { return history_; }
  bool visited(CaseState s) const;

  // Throws IllegalTransition for edges outside the graph, and for
  // AccountOpened unless the case was Screened and RiskAssessed.
  void transition(CaseState to, Tick tick, std::string_view detail = {});
  void reject(RejectReason reason, Tick tick, std::string_view detail = {});
  void note(Tick tick, std::string event);

  std::string connection_id;
  std::map<std::string, std::string> attributes;

 private:
  std::string id_;
  std::string customer_;
  CaseState state_ = CaseState::Initiated;
  std::optional<RejectReason> reject_reason_;
  std::vector<CaseState> history_;
  std::vector<AuditEntry> audit_;
};

}  // namespace ssikyc::kyc
