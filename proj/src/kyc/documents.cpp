#include "ssikyc/kyc/documents.hpp"

#include <array>

namespace ssikyc::kyc {

namespace {

constexpr std::array kDocNames = {
    std::pair{DocType::Passport, "passport"},
    std::pair{DocType::IdCard, "id_card"},
    std::pair{DocType::UtilityBill, "utility_bill"},
    std::pair{DocType::IncomeStatement, "income_statement"},
};

}  // namespace

std::string_view to_string(DocType t) {
  for (const auto& [type, name] : kDocNames)
    if (type == t) return name;
  return "unknown";
}

std::optional<DocType> doc_type_from_string(std::string_view s) {
  for (const auto& [type, name] : kDocNames)
    if (name == s) return type;
  return std::nullopt;
}

void AnalogDocument::encode(Writer& w) const {
  w.u8(static_cast<std::uint8_t>(type)).count(claims.size());
  for (const auto& [k, v] : claims) w.str(k).str(v);
  w.boolean(authentic).u64(validity_end);
}

AnalogDocument AnalogDocument::decode(Reader& r) {
  AnalogDocument d;
  auto t = r.u8();
  if (t > static_cast<std::uint8_t>(DocType::IncomeStatement)) throw CodecError(CodecErrc::BadValue, "document type");
  d.type = static_cast<DocType>(t);
  auto n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    auto k = r.str();
    d.claims.emplace_back(std::move(k), r.str());
  }
  d.authentic = r.boolean();
  d.validity_end = r.u64();
  return d;
}

DocumentCheck verify_documents(const std::vector<AnalogDocument>& documents, Tick now) {
  DocumentCheck out;
  for (const auto& d : documents) {
    if (!d.authentic) throw KycError(KycErrc::DocumentCheckFailed, std::string(to_string(d.type)) + " not authentic");
    if (d.validity_end <= now)
      throw KycError(KycErrc::ExpiredDocument,
                     std::string(to_string(d.type)) + " expired at " + std::to_string(d.validity_end));
  }
  for (const auto& d : documents) {
    for (const auto& [k, v] : d.claims) {
      auto it = out.attributes.find(k);
      if (it != out.attributes.end() && it->second != v) out.conflicts.push_back(k + ": " + it->second + " -> " + v);
      out.attributes[k] = v;
    }
  }
  return out;
}

std::set<std::string> attributes_from(DocType t) {
  switch (t) {
    case DocType::Passport:
    case DocType::IdCard: return {"name", "dob", "id_number"};
    case DocType::UtilityBill: return {"name", "address"};
    case DocType::IncomeStatement: return {"name", "income"};
  }
  return {};
}

std::vector<DocType> documents_for(const std::set<std::string>& missing) {
  std::vector<DocType> out;
  std::set<std::string> left = missing;
  for (auto t : {DocType::Passport, DocType::UtilityBill, DocType::IncomeStatement}) {
    auto covers = attributes_from(t);
    bool useful = false;
    for (const auto& a : left) useful = useful || (covers.count(a) && a != "name");
    if (!useful) continue;
    out.push_back(t);
    for (const auto& a : covers) left.erase(a);
  }
  // A name alone still needs an identity document.
  if (left.count("name")) out.insert(out.begin(), DocType::Passport);
  return out;
}

}  // namespace ssikyc::kyc
