#pragma once

#include <string_view>

#include "ssikyc/error.hpp"

namespace ssikyc::kyc {

enum class KycErrc {
  IllegalTransition,
  DocumentCheckFailed,
  ExpiredDocument,
  RetentionViolation,
  NotRecordable,
  UnknownCase,
  UnknownRecord,
  BadConfig,
  BadScreeningList,
};
std::string_view to_string(KycErrc code);
using KycError = CodedError<KycErrc>;

}  // namespace ssikyc::kyc
