#include "ssikyc/kyc/screening.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "ssikyc/kyc/errors.hpp"

namespace ssikyc::kyc {

namespace {

constexpr std::array kListNames = {
    std::pair{ListKind::Terrorism, "terrorism"},
    std::pair{ListKind::Aml, "aml"},
    std::pair{ListKind::Pep, "pep"},
    std::pair{ListKind::NegativePress, "negative_press"},
};

// ASCII folding for U+00C0..U+00FF.
constexpr std::array<const char*, 64> kLatin1 = {
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o", " ", "o", "u", "u", "u", "u", "y", "th", "ss",
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o", " ", "o", "u", "u", "u", "u", "y", "th", "y",
};

// ASCII folding for U+0100..U+017F as runs of (count, replacement).
constexpr std::array<std::pair<int, const char*>, 22> kLatinExtA = {{
    {6, "a"}, {8, "c"}, {4, "d"}, {10, "e"}, {8, "g"}, {4, "h"}, {10, "i"}, {2, "ij"}, {2, "j"},
    {3, "k"}, {10, "l"}, {9, "n"}, {6, "o"}, {2, "oe"}, {6, "r"}, {8, "s"}, {6, "t"}, {12, "u"},
    {2, "w"}, {3, "y"}, {6, "z"}, {1, "s"},
}};

const char* fold_extended_a(char32_t cp) {
  int offset = static_cast<int>(cp - 0x100);
  for (const auto& [n, s] : kLatinExtA) {
    if (offset < n) return s;
    offset -= n;
  }
  return nullptr;
}

// Decodes one UTF-8 sequence; malformed bytes come back as themselves.
char32_t next_code_point(std::string_view s, std::size_t& i, std::size_t& len) {
  auto b = static_cast<unsigned char>(s[i]);
  len = 1;
  char32_t cp = b;
  if (b >= 0xC0 && b < 0xE0 && i + 1 < s.size()) {
    len = 2;
    cp = ((b & 0x1F) << 6) | (static_cast<unsigned char>(s[i + 1]) & 0x3F);
  } else if (b >= 0xE0 && b < 0xF0 && i + 2 < s.size()) {
    len = 3;
    cp = ((b & 0x0F) << 12) | ((static_cast<unsigned char>(s[i + 1]) & 0x3F) << 6) |
         (static_cast<unsigned char>(s[i + 2]) & 0x3F);
  } else if (b >= 0xF0 && i + 3 < s.size()) {
    len = 4;
    cp = ((b & 0x07) << 18) | ((static_cast<unsigned char>(s[i + 1]) & 0x3F) << 12) |
         ((static_cast<unsigned char>(s[i + 2]) & 0x3F) << 6) | (static_cast<unsigned char>(s[i + 3]) & 0x3F);
  }
  return cp;
}

}  // namespace

std::string_view to_string(ListKind k) {
  for (const auto& [kind, name] : kListNames)
    if (kind == k) return name;
  return "unknown";
}

std::optional<ListKind> list_kind_from_string(std::string_view s) {
  for (const auto& [kind, name] : kListNames)
    if (name == s) return kind;
  return std::nullopt;
}

std::string_view to_string(MatchGrade g) {
  switch (g) {
    case MatchGrade::Exact: return "exact";
    case MatchGrade::Normalized: return "normalized";
    case MatchGrade::Fuzzy: return "fuzzy";
  }
  return "unknown";
}

std::string normalize_name(std::string_view name) {
  std::string folded;
  for (std::size_t i = 0; i < name.size();) {
    std::size_t len = 1;
    char32_t cp = next_code_point(name, i, len);
    if (cp < 0x80) {
      char c = static_cast<char>(cp);
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      folded += ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) ? c : ' ';
    } else if (cp >= 0xC0 && cp <= 0xFF) {
      folded += kLatin1[cp - 0xC0];
    } else if (cp >= 0x100 && cp <= 0x17F) {
      folded += fold_extended_a(cp);
    } else if (cp >= 0x300 && cp <= 0x36F) {
      // combining marks carry only the diacritic
    } else {
      folded.append(name.substr(i, len));
    }
    i += len;
  }
  std::string out;
  std::istringstream words(folded);
  for (std::string w; words >> w;) out += (out.empty() ? "" : " ") + w;
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

void ScreeningLists::add(ListKind kind, std::string_view name, std::optional<std::string> dob) {
  entries_.push_back({kind, std::string(name), normalize_name(name), std::move(dob)});
}

ScreeningLists ScreeningLists::parse(std::string_view text) {
  ScreeningLists lists;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    for (std::size_t pos = 0;;) {
      auto tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    auto where = "line " + std::to_string(line_no);
    if (fields.size() < 2 || fields.size() > 3) throw KycError(KycErrc::BadScreeningList, where + ": expected 2 or 3 tab-separated fields");
    auto kind = list_kind_from_string(fields[0]);
    if (!kind) throw KycError(KycErrc::BadScreeningList, where + ": unknown list kind " + std::string(fields[0]));
    if (normalize_name(fields[1]).empty()) throw KycError(KycErrc::BadScreeningList, where + ": empty name");
    std::optional<std::string> dob;
    if (fields.size() == 3 && !fields[2].empty()) dob = std::string(fields[2]);
    lists.add(*kind, fields[1], dob);
  }
  return lists;
}

std::vector<ScreeningHit> name_screen(std::string_view name, const std::optional<std::string>& dob,
                                      const ScreeningLists& lists) {
  std::vector<ScreeningHit> hits;
  const auto norm = normalize_name(name);
  for (const auto& e : lists.entries()) {
    if (name == e.listed) {
      hits.push_back({e.kind, e.listed, MatchGrade::Exact});
    } else if (norm == e.normalized) {
      hits.push_back({e.kind, e.listed, MatchGrade::Normalized});
    } else if (edit_distance(norm, e.normalized) <= 1 && (!e.dob || (dob && *dob == *e.dob))) {
      hits.push_back({e.kind, e.listed, MatchGrade::Fuzzy});
    }
  }
  return hits;
}

}  // namespace ssikyc::kyc
