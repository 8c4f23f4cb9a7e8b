#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "ssikyc/codec.hpp"

namespace ssikyc::crypto {

using Key32 = std::array<std::uint8_t, 32>;
using Nonce12 = std::array<std::uint8_t, 12>;

inline constexpr std::size_t kAeadTagBytes = 16;

// ChaCha20-Poly1305 (RFC 8439). Output is ciphertext || 16-byte tag.
Bytes aead_seal(const Key32& key, const Nonce12& nonce, ByteView ad, ByteView plaintext);
// nullopt on any authentication failure.
std::optional<Bytes> aead_open(const Key32& key, const Nonce12& nonce, ByteView ad,
                               ByteView sealed);

// PBKDF2-HMAC-SHA256 with an explicit iteration count.
Key32 derive_key(std::string_view passphrase, ByteView salt, std::uint32_t iterations);

}  // namespace ssikyc::crypto
