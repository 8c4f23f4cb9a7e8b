#include "ssikyc/kyc/risk.hpp"

#include <algorithm>

namespace ssikyc::kyc {

std::string_view to_string(RiskLevel l) {
  switch (l) {
    case RiskLevel::Low: return "low";
    case RiskLevel::Standard: return "standard";
    case RiskLevel::High: return "high";
  }
  return "unknown";
}

RiskLevel level_for(std::uint32_t score, const RiskWeights& w) {
  if (score >= w.high_from) return RiskLevel::High;
  if (score >= w.standard_from) return RiskLevel::Standard;
  return RiskLevel::Low;
}

RiskAssessment assess_risk(const std::vector<ScreeningHit>& hits, const RiskProfile& profile,
                           const RiskWeights& w, const MonitoringFindings& findings) {
  auto any = [&](std::initializer_list<ListKind> kinds) {
    return std::any_of(hits.begin(), hits.end(), [&](const auto& h) {
      return std::find(kinds.begin(), kinds.end(), h.kind) != kinds.end();
    });
  };
  RiskAssessment a;
  auto add = [&](bool present, std::uint32_t weight, const char* factor) {
    if (!present) return;
    a.score += weight;
    a.factors.push_back(factor);
  };
  add(any({ListKind::Terrorism, ListKind::Aml}), w.terrorism_or_aml, "sanctions_hit");
  add(any({ListKind::Pep}), w.pep, "pep");
  add(any({ListKind::NegativePress}), w.negative_press, "negative_press");
  add(profile.high_risk_country, w.high_risk_country, "high_risk_country");
  add(profile.expected_monthly_volume > w.volume_threshold, w.high_volume, "high_volume");
  add(findings.failed_reproof, w.failed_reproof, "failed_reproof");
  add(findings.structuring_alerts > 0, w.structuring_alert, "structuring");
  add(findings.volume_alerts > 0, w.volume_alert, "volume_exceeded");
  a.level = level_for(a.score, w);
  a.forced_reject = any({ListKind::Terrorism, ListKind::Aml});
  return a;
}

}  // namespace ssikyc::kyc
