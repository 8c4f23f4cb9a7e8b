#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include <gmpxx.h>

#include "ssikyc/codec.hpp"

namespace ssikyc::crypto {

using Digest = std::array<std::uint8_t, 32>;

// Name of the hash function fixed for this build; reported by `sim crypto vectors`.
inline constexpr std::string_view kHashName = "SHA-256";

Digest sha256(ByteView data);
inline Digest sha256(std::string_view s) { return sha256(as_bytes(s)); }

// Domain-separated hash: H(canonical(tag, data)).
Digest tagged_hash(std::string_view tag, ByteView data);

inline mpz_class digest_to_int(const Digest& d) { return bigint_from_bytes(d); }

}  // namespace ssikyc::crypto
