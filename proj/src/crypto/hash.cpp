#include "ssikyc/crypto/hash.hpp"

#include <openssl/sha.h>

namespace ssikyc::crypto {

Digest sha256(ByteView data) {
  Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest tagged_hash(std::string_view tag, ByteView data) {
  Writer w;
  w.str(tag).bytes(data);
  return sha256(w.data());
}

}  // namespace ssikyc::crypto
