#include "ssikyc/crypto/transcript.hpp"

namespace ssikyc::crypto {

Transcript& Transcript::absorb(std::string_view label, ByteView data) {
  entries_.emplace_back(std::string(label), Bytes(data.begin(), data.end()));
  return *this;
}

mpz_class Transcript::challenge() const {
  Writer w;
  w.count(entries_.size());
  for (const auto& [label, data] : entries_) w.str(label).bytes(data);
  return digest_to_int(tagged_hash("ssikyc/fiat-shamir", w.data()));
}

}  // namespace ssikyc::crypto
