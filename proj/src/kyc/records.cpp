#include "ssikyc/kyc/records.hpp"

namespace ssikyc::kyc {

const CustomerRecord& RecordStore::keep_record(const KycCase& c, std::vector<Bytes> presentations, Tick now,
                                               Tick retention_ticks) {
  bool identified = c.visited(CaseState::IdentityVerified) || c.visited(CaseState::ProofVerified);
  bool opened = c.visited(CaseState::AccountOpened);
  if (!opened && !(c.state() == CaseState::Rejected && identified))
    throw KycError(KycErrc::NotRecordable, c.id() + " in state " + std::string(to_string(c.state())));
  CustomerRecord r;
  r.case_id = c.id();
  r.customer = c.customer();
  r.attributes = c.attributes;
  r.presentations = std::move(presentations);
  r.audit = c.audit();
  r.recorded_at = now;
  r.retention_until = now + retention_ticks;
  return records_[c.id()] = std::move(r);
}

void RecordStore::purge(const std::string& case_id, Tick now) {
  auto it = records_.find(case_id);
  if (it == records_.end()) throw KycError(KycErrc::UnknownRecord, case_id);
  if (now < it->second.retention_until)
    throw KycError(KycErrc::RetentionViolation,
                   case_id + " retained until " + std::to_string(it->second.retention_until));
  records_.erase(it);
  deletions_.push_back({now, "record.purged " + case_id});
}

const CustomerRecord* RecordStore::find(const std::string& case_id) const {
  auto it = records_.find(case_id);
  return it == records_.end() ? nullptr : &it->second;
}

}  // namespace ssikyc::kyc
