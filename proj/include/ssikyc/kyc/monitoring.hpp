#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssikyc/clock.hpp"

namespace ssikyc::kyc {

enum class Direction { In, Out };
std::string_view to_string(Direction d);

struct TransactionRecord {
  Tick tick = 0;
  std::uint64_t amount = 0;  // > 0, whole currency units
  std::string counterparty;
  Direction direction = Direction::In;

  bool operator==(const TransactionRecord&) const = default;
};

struct MonitoringConfig {
  Tick volume_window = 30;
  std::uint64_t volume_multiplier = 3;
  std::uint64_t reporting_threshold = 10000;
  std::size_t structuring_count = 3;
  Tick structuring_window = 72;
  std::uint64_t structuring_band_percent = 10;
  Tick reproof_interval = 90;
};

enum class AlertKind { VolumeExceeded, Structuring };
std::string_view to_string(AlertKind k);

struct Alert {
  AlertKind kind = AlertKind::VolumeExceeded;
  Tick tick = 0;
  std::string detail;

  bool operator==(const Alert&) const = default;
};

// Just below the reporting threshold: amount in [(100 - band)% of threshold, threshold).
bool near_threshold(std::uint64_t amount, const MonitoringConfig& config);

// Transactions are processed in tick order (stable for equal ticks).
// VolumeExceeded: at transaction t, the sum over ticks (t - volume_window, t]
//   exceeds volume_multiplier * expected_monthly_volume, and did not at the
//   previous transaction (one alert per excursion).
// Structuring: at transaction t, at least structuring_count near-threshold
//   transactions since the last Structuring alert lie within
//   [t - structuring_window, t]. Direction does not matter.
std::vector<Alert> monitor(const std::vector<TransactionRecord>& transactions,
                           std::uint64_t expected_monthly_volume, const MonitoringConfig& config);

// A re-proof is due every reproof_interval ticks and once the credential the
// customer proved with has expired.
bool reproof_due(Tick now, Tick last_proof, std::optional<Tick> credential_expiration,
                 const MonitoringConfig& config);

}  // namespace ssikyc::kyc
