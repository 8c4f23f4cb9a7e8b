#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssikyc/clock.hpp"
#include "ssikyc/codec.hpp"
#include "ssikyc/kyc/errors.hpp"

namespace ssikyc::kyc {

enum class DocType { Passport, IdCard, UtilityBill, IncomeStatement };
std::string_view to_string(DocType t);
std::optional<DocType> doc_type_from_string(std::string_view s);

// A paper document the customer hands over. Authenticity is decided by the
// scenario; the bank only sees the outcome of its manual check.
struct AnalogDocument {
  DocType type = DocType::Passport;
  std::vector<std::pair<std::string, std::string>> claims;
  bool authentic = true;
  Tick validity_end = 0;

  bool operator==(const AnalogDocument&) const = default;
  void encode(Writer& w) const;
  static AnalogDocument decode(Reader& r);
};

struct DocumentCheck {
  std::map<std::string, std::string> attributes;
  // "<attr>: <old> -> <new>" for every claim a later document overrode.
  std::vector<std::string> conflicts;
};

// Merged claims iff every document is authentic and valid at `now`
// (validity_end > now). Later documents win conflicts.
DocumentCheck verify_documents(const std::vector<AnalogDocument>& documents, Tick now);

// Which documents establish which attributes.
std::set<std::string> attributes_from(DocType t);
// Smallest document set that covers `missing`, in a fixed order
// (identity document first).
std::vector<DocType> documents_for(const std::set<std::string>& missing);

}  // namespace ssikyc::kyc
