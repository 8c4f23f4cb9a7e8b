#include "ssikyc/ledger/identifiers.hpp"

#include <algorithm>

#include "ssikyc/connect/did.hpp"

namespace ssikyc::ledger {

namespace {

bool lower_digit(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

bool segment_char(char c) {
  return lower_digit(c) || (c >= 'A' && c <= 'Z') || c == '.' || c == '_' || c == '-';
}

}  // namespace

std::optional<std::string> owner_of(std::string_view object_id) {
  auto slash = object_id.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto did = connect::Did::parse(object_id.substr(0, slash));
  if (!did || !did->is_public()) return std::nullopt;
  return did->str();
}

bool valid_object_id(std::string_view id) {
  if (id.size() > 256 || !owner_of(id)) return false;
  auto rest = id.substr(id.find('/') + 1);
  std::size_t start = 0;
  for (;;) {
    auto end = rest.find('/', start);
    auto seg = rest.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    if (seg.empty() || !std::all_of(seg.begin(), seg.end(), segment_char)) return false;
    if (end == std::string_view::npos) return true;
    start = end + 1;
  }
}

bool valid_attr_name(std::string_view name) {
  if (name.empty() || name.size() > 64 || !(name[0] >= 'a' && name[0] <= 'z')) return false;
  return std::all_of(name.begin(), name.end(), [](char c) { return lower_digit(c) || c == '_'; });
}

bool valid_label(std::string_view label) {
  if (label.empty() || label.size() > 32) return false;
  return std::all_of(label.begin(), label.end(),
                     [](char c) { return lower_digit(c) || c == '_' || c == '-'; });
}

bool valid_mailbox_address(std::string_view address) {
  constexpr std::string_view kScheme = "mailbox://";
  if (address.substr(0, kScheme.size()) != kScheme) return false;
  auto rest = address.substr(kScheme.size());
  if (rest.empty() || rest.size() > 64) return false;
  return std::all_of(rest.begin(), rest.end(),
                     [](char c) { return lower_digit(c) || c == '.' || c == '_' || c == '-'; });
}

bool valid_version_string(std::string_view version) {
  if (version.empty() || version.size() > 16 || version.front() == '.' || version.back() == '.')
    return false;
  bool prev_dot = false;
  for (char c : version) {
    if (c == '.') {
      if (prev_dot) return false;
      prev_dot = true;
    } else if (c >= '0' && c <= '9') {
      prev_dot = false;
    } else {
      return false;
    }
  }
  return true;
}

}  // namespace ssikyc::ledger
