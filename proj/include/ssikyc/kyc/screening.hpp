#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ssikyc::kyc {

enum class ListKind { Terrorism, Aml, Pep, NegativePress };
std::string_view to_string(ListKind k);
std::optional<ListKind> list_kind_from_string(std::string_view s);

enum class MatchGrade { Exact, Normalized, Fuzzy };
std::string_view to_string(MatchGrade g);

struct ScreeningEntry {
  ListKind kind = ListKind::Terrorism;
  std::string listed;      // as published
  std::string normalized;  // normalize_name(listed)
  std::optional<std::string> dob;
};

struct ScreeningHit {
  ListKind kind = ListKind::Terrorism;
  std::string entry;
  MatchGrade grade = MatchGrade::Exact;

  bool operator==(const ScreeningHit&) const = default;
};

class ScreeningLists {
 public:
  void add(ListKind kind, std::string_view name, std::optional<std::string> dob = std::nullopt);
  // Line format: <list_kind>\t<name>[\t<dob>]; blank lines and lines starting
  // with '#' are skipped. Throws BadScreeningList.
  static ScreeningLists parse(std::string_view text);

  const std::vector<ScreeningEntry>& entries() const { return entries_; }

 private:
  std::vector<ScreeningEntry> entries_;
};

// Lowercase, Latin diacritics stripped, punctuation turned into spaces,
// whitespace collapsed.
std::string normalize_name(std::string_view name);
std::size_t edit_distance(std::string_view a, std::string_view b);

// One hit per matching entry, graded exact (identical to the published name),
// normalized (identical after normalization) or fuzzy (normalized edit
// distance 1; only if the entry has no dob or the customer's dob equals it).
std::vector<ScreeningHit> name_screen(std::string_view name, const std::optional<std::string>& dob,
                                      const ScreeningLists& lists);

}  // namespace ssikyc::kyc
