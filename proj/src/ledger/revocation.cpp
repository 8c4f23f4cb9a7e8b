#include "ssikyc/ledger/revocation.hpp"

namespace ssikyc::ledger {

crypto::Digest RevocationRegistry::compute_state_hash() const {
  Writer w;
  w.str(registry_id).u64(version).count(revoked.size());
  for (auto i : revoked) w.u32(i);
  return crypto::tagged_hash("ssikyc/revreg-state", w.data());
}

RevocationRegistry RevocationRegistry::with_revoked(std::uint32_t index) const {
  RevocationRegistry next = *this;
  next.version = version + 1;
  next.revoked.insert(index);
  next.state_hash = next.compute_state_hash();
  return next;
}

void RevocationRegistry::encode(Writer& w) const {
  w.str(registry_id).str(cred_def_id).u32(capacity).u64(version).count(revoked.size());
  for (auto i : revoked) w.u32(i);
  w.fixed(state_hash);
}

RevocationRegistry RevocationRegistry::decode(Reader& r) {
  RevocationRegistry reg;
  reg.registry_id = r.str();
  reg.cred_def_id = r.str();
  reg.capacity = r.u32();
  reg.version = r.u64();
  auto n = r.count();
  std::int64_t prev = -1;
  for (std::size_t i = 0; i < n; ++i) {
    auto idx = r.u32();
    if (static_cast<std::int64_t>(idx) <= prev)
      throw CodecError(CodecErrc::BadValue, "revoked indices not strictly increasing");
    prev = idx;
    reg.revoked.insert(idx);
  }
  reg.state_hash = r.fixed<32>();
  return reg;
}

}  // namespace ssikyc::ledger
