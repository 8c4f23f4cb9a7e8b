#include "ssikyc/kyc/case.hpp"

#include <algorithm>
#include <array>

namespace ssikyc::kyc {

std::string_view to_string(KycErrc code) {
  switch (code) {
    case KycErrc::IllegalTransition: return "IllegalTransition";
    case KycErrc::DocumentCheckFailed: return "DocumentCheckFailed";
    case KycErrc::ExpiredDocument: return "ExpiredDocument";
    case KycErrc::RetentionViolation: return "RetentionViolation";
    case KycErrc::NotRecordable: return "NotRecordable";
    case KycErrc::UnknownCase: return "UnknownCase";
    case KycErrc::UnknownRecord: return "UnknownRecord";
    case KycErrc::BadConfig: return "BadConfig";
    case KycErrc::BadScreeningList: return "BadScreeningList";
  }
  return "Unknown";
}

namespace {

constexpr std::array kStateNames = {
    std::pair{CaseState::Initiated, "Initiated"},
    std::pair{CaseState::ConnectionEstablished, "ConnectionEstablished"},
    std::pair{CaseState::DocumentsRequested, "DocumentsRequested"},
    std::pair{CaseState::IdentityVerified, "IdentityVerified"},
    std::pair{CaseState::ProofVerified, "ProofVerified"},
    std::pair{CaseState::Screened, "Screened"},
    std::pair{CaseState::RiskAssessed, "RiskAssessed"},
    std::pair{CaseState::EddRequested, "EddRequested"},
    std::pair{CaseState::AccountOpened, "AccountOpened"},
    std::pair{CaseState::Rejected, "Rejected"},
    std::pair{CaseState::Monitoring, "Monitoring"},
};

}  // namespace

std::string_view to_string(CaseState s) {
  for (const auto& [state, name] : kStateNames)
    if (state == s) return name;
  return "Unknown";
}

std::optional<CaseState> case_state_from_string(std::string_view s) {
  for (const auto& [state, name] : kStateNames)
    if (name == s) return state;
  return std::nullopt;
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::ConnectionFailed: return "ConnectionFailed";
    case RejectReason::DocumentCheckFailed: return "DocumentCheckFailed";
    case RejectReason::ExpiredDocument: return "ExpiredDocument";
    case RejectReason::ProofInvalid: return "ProofInvalid";
    case RejectReason::ScreeningHit: return "ScreeningHit";
    case RejectReason::EddTimeout: return "EddTimeout";
    case RejectReason::IssuanceFailed: return "IssuanceFailed";
  }
  return "Unknown";
}

bool allowed_transition(CaseState from, CaseState to) {
  using S = CaseState;
  if (to == S::Rejected) return from != S::AccountOpened && from != S::Monitoring && from != S::Rejected;
  switch (from) {
    case S::Initiated: return to == S::ConnectionEstablished;
    case S::ConnectionEstablished: return to == S::DocumentsRequested || to == S::ProofVerified;
    case S::DocumentsRequested: return to == S::IdentityVerified;
    case S::ProofVerified: return to == S::DocumentsRequested || to == S::Screened;
    case S::IdentityVerified: return to == S::Screened;
    case S::Screened: return to == S::RiskAssessed;
    case S::RiskAssessed: return to == S::EddRequested || to == S::AccountOpened;
    case S::EddRequested: return to == S::AccountOpened;
    case S::AccountOpened: return to == S::Monitoring;
    case S::Rejected:
    case S::Monitoring: return false;
  }
  return false;
}

KycCase::KycCase(std::string case_id, std::string customer, Tick opened)
    : id_(std::move(case_id)), customer_(std::move(customer)) {
  history_.push_back(state_);
  audit_.push_back({opened, "state Initiated"});
}

bool KycCase::visited(CaseState s) const {
  return std::find(history_.begin(), history_.end(), s) != history_.end();
}

void KycCase::transition(CaseState to, Tick tick, std::string_view detail) {
  if (!allowed_transition(state_, to))
    throw KycError(KycErrc::IllegalTransition, std::string(to_string(state_)) + " -> " + std::string(to_string(to)));
  if (to == CaseState::AccountOpened && !(visited(CaseState::Screened) && visited(CaseState::RiskAssessed)))
    throw KycError(KycErrc::IllegalTransition, "AccountOpened requires Screened and RiskAssessed");
  state_ = to;
  history_.push_back(to);
  std::string event = "state " + std::string(to_string(to));
  if (!detail.empty()) event += " " + std::string(detail);
  audit_.push_back({tick, std::move(event)});
}

void KycCase::reject(RejectReason reason, Tick tick, std::string_view detail) {
  std::string d(to_string(reason));
  if (!detail.empty()) d += " " + std::string(detail);
  transition(CaseState::Rejected, tick, d);
  reject_reason_ = reason;
}

void KycCase::note(Tick tick, std::string event) { audit_.push_back({tick, std::move(event)}); }

}  // namespace ssikyc::kyc
