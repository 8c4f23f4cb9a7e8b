#include "ssikyc/crypto/aead.hpp"

#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

namespace ssikyc::crypto {

namespace {

using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)>;

CipherCtx make_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
  if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
  return ctx;
}

}  // namespace

Bytes aead_seal(const Key32& key, const Nonce12& nonce, ByteView ad, ByteView plaintext) {
  auto ctx = make_ctx();
  int len = 0;
  Bytes out(plaintext.size() + kAeadTagBytes);
  if (EVP_EncryptInit_ex(ctx.get(), EVP_chacha20_poly1305(), nullptr, key.data(), nonce.data()) != 1 ||
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, ad.data(), static_cast<int>(ad.size())) != 1 ||
      EVP_EncryptUpdate(ctx.get(), out.data(), &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx.get(), out.data() + len, &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG, kAeadTagBytes,
                          out.data() + plaintext.size()) != 1) {
    throw std::runtime_error("chacha20-poly1305 seal failed");
  }
  return out;
}

std::optional<Bytes> aead_open(const Key32& key, const Nonce12& nonce, ByteView ad,
                               ByteView sealed) {
  if (sealed.size() < kAeadTagBytes) return std::nullopt;
  const std::size_t n = sealed.size() - kAeadTagBytes;
  auto ctx = make_ctx();
  Bytes out(n);
  Bytes tag(sealed.begin() + static_cast<std::ptrdiff_t>(n), sealed.end());
  int len = 0;
  if (EVP_DecryptInit_ex(ctx.get(), EVP_chacha20_poly1305(), nullptr, key.data(), nonce.data()) != 1 ||
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, ad.data(), static_cast<int>(ad.size())) != 1 ||
      EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data(), static_cast<int>(n)) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, kAeadTagBytes, tag.data()) != 1) {
    return std::nullopt;
  }
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &len) != 1) return std::nullopt;
  return out;
}

Key32 derive_key(std::string_view passphrase, ByteView salt, std::uint32_t iterations) {
  Key32 key{};
  if (PKCS5_PBKDF2_HMAC(passphrase.data(), static_cast<int>(passphrase.size()), salt.data(),
                        static_cast<int>(salt.size()), static_cast<int>(iterations), EVP_sha256(),
                        static_cast<int>(key.size()), key.data()) != 1) {
    throw std::runtime_error("PBKDF2 failed");
  }
  return key;
}

}  // namespace ssikyc::crypto
