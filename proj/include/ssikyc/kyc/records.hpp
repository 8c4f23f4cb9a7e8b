#pragma once

#include <map>
#include <string>
#include <vector>

#include "ssikyc/clock.hpp"
#include "ssikyc/codec.hpp"
#include "ssikyc/kyc/case.hpp"

namespace ssikyc::kyc {

inline constexpr Tick kDefaultRetentionTicks = 5 * 360;

struct CustomerRecord {
  std::string case_id;
  std::string customer;
  std::map<std::string, std::string> attributes;
  std::vector<Bytes> presentations;  // exactly as received
  std::vector<AuditEntry> audit;
  Tick recorded_at = 0;
  Tick retention_until = 0;
};

// Bank-local store of onboarding records with a retention floor.
class RecordStore {
 public:
  // Only cases that reached AccountOpened, or were rejected after the
  // customer had been identified, are recorded. Throws NotRecordable.
  const CustomerRecord& keep_record(const KycCase& c, std::vector<Bytes> presentations, Tick now,
                                    Tick retention_ticks);
  // Throws RetentionViolation before retention_until, UnknownRecord if absent.
  void purge(const std::string& case_id, Tick now);

  const CustomerRecord* find(const std::string& case_id) const;
  const std::map<std::string, CustomerRecord>& records() const { return records_; }
  const std::vector<AuditEntry>& deletions() const { return deletions_; }

 private:
  std::map<std::string, CustomerRecord> records_;
  std::vector<AuditEntry> deletions_;
};

}  // namespace ssikyc::kyc
