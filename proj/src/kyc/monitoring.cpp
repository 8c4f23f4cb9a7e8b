#include "ssikyc/kyc/monitoring.hpp"

#include <algorithm>

namespace ssikyc::kyc {

std::string_view to_string(Direction d) { return d == Direction::In ? "in" : "out"; }

std::string_view to_string(AlertKind k) {
  return k == AlertKind::VolumeExceeded ? "VolumeExceeded" : "Structuring";
}

bool near_threshold(std::uint64_t amount, const MonitoringConfig& c) {
  return amount < c.reporting_threshold && amount * 100 >= c.reporting_threshold * (100 - c.structuring_band_percent);
}

std::vector<Alert> monitor(const std::vector<TransactionRecord>& transactions,
                           std::uint64_t expected_monthly_volume, const MonitoringConfig& config) {
  auto txs = transactions;
  std::stable_sort(txs.begin(), txs.end(), [](const auto& a, const auto& b) { return a.tick < b.tick; });
  const std::uint64_t limit = config.volume_multiplier * expected_monthly_volume;

  std::vector<Alert> alerts;
  bool over = false;
  std::size_t structuring_from = 0;
  for (std::size_t i = 0; i < txs.size(); ++i) {
    const Tick t = txs[i].tick;
    std::uint64_t sum = 0;
    for (std::size_t j = 0; j <= i; ++j)
      if (txs[j].tick + config.volume_window > t) sum += txs[j].amount;
    bool now_over = sum > limit;
    if (now_over && !over)
      alerts.push_back({AlertKind::VolumeExceeded, t, "sum " + std::to_string(sum) + " > " + std::to_string(limit)});
    over = now_over;

    if (!near_threshold(txs[i].amount, config)) continue;
    std::size_t count = 0;
    for (std::size_t j = structuring_from; j <= i; ++j)
      if (near_threshold(txs[j].amount, config) && txs[j].tick + config.structuring_window >= t) ++count;
    if (count >= config.structuring_count) {
      alerts.push_back({AlertKind::Structuring, t, std::to_string(count) + " transactions just below " +
                                                      std::to_string(config.reporting_threshold)});
      structuring_from = i + 1;
    }
  }
  return alerts;
}

bool reproof_due(Tick now, Tick last_proof, std::optional<Tick> credential_expiration,
                 const MonitoringConfig& config) {
  if (credential_expiration && now >= *credential_expiration) return true;
  return config.reproof_interval > 0 && now >= last_proof + config.reproof_interval;
}

}  // namespace ssikyc::kyc
