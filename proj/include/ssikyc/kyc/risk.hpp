#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ssikyc/kyc/screening.hpp"

namespace ssikyc::kyc {

enum class RiskLevel { Low, Standard, High };
std::string_view to_string(RiskLevel l);

struct RiskProfile {
  bool high_risk_country = false;
  std::uint64_t expected_monthly_volume = 0;
};

struct RiskWeights {
  std::uint32_t terrorism_or_aml = 100;
  std::uint32_t pep = 30;
  std::uint32_t negative_press = 10;
  std::uint32_t high_risk_country = 15;
  std::uint32_t high_volume = 10;
  std::uint64_t volume_threshold = 10000;
  std::uint32_t standard_from = 20;
  std::uint32_t high_from = 50;
  // Ongoing-monitoring factors used on reassessment.
  std::uint32_t failed_reproof = 50;
  std::uint32_t structuring_alert = 30;
  std::uint32_t volume_alert = 20;
};

// Findings from ongoing monitoring that feed a reassessment.
struct MonitoringFindings {
  bool failed_reproof = false;
  std::size_t structuring_alerts = 0;
  std::size_t volume_alerts = 0;
};

struct RiskAssessment {
  std::uint32_t score = 0;
  RiskLevel level = RiskLevel::Low;
  std::vector<std::string> factors;
  // A terrorism or AML hit rejects the customer whatever the score.
  bool forced_reject = false;

  bool operator==(const RiskAssessment&) const = default;
};

RiskLevel level_for(std::uint32_t score, const RiskWeights& w);

// score = terrorism_or_aml * any(terrorism|aml hit) + pep * any(pep hit)
//       + negative_press * any(negative press hit)
//       + high_risk_country * profile.high_risk_country
//       + high_volume * (expected_monthly_volume > volume_threshold)
//       + monitoring factors (each alert counted once per kind)
RiskAssessment assess_risk(const std::vector<ScreeningHit>& hits, const RiskProfile& profile,
                           const RiskWeights& weights = {}, const MonitoringFindings& findings = {});

}  // namespace ssikyc::kyc
