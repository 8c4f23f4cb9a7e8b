#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "ssikyc/clock.hpp"
#include "ssikyc/codec.hpp"
#include "ssikyc/crypto/hash.hpp"

namespace ssikyc::ledger {

// Versioned public record of revoked credential indices. The ledger stamps
// updated_at with the timestamp of the block that carried the version; it is
// not part of the signed payload.
struct RevocationRegistry {
  std::string registry_id;
  std::string cred_def_id;
  std::uint32_t capacity = 0;
  std::uint64_t version = 0;
  std::set<std::uint32_t> revoked;
  crypto::Digest state_hash{};
  Tick updated_at = 0;

  bool is_revoked(std::uint32_t index) const { return revoked.count(index) != 0; }

  // H(canonical(registry_id, version, revoked))
  crypto::Digest compute_state_hash() const;
  // Next version with `index` added; state hash recomputed.
  RevocationRegistry with_revoked(std::uint32_t index) const;

  // Payload encoding (excludes updated_at).
  void encode(Writer& w) const;
  static RevocationRegistry decode(Reader& r);

  bool operator==(const RevocationRegistry&) const = default;
};

}  // namespace ssikyc::ledger
