#include "ssikyc/crypto/rng.hpp"

namespace ssikyc::crypto {

Bytes Rng::bytes(std::size_t n) {
  Bytes out(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 8 == 0) word = engine_();
    out[i] = static_cast<std::uint8_t>(word >> (8 * (i % 8)));
  }
  return out;
}

Salt Rng::salt() {
  Salt s{};
  auto b = bytes(s.size());
  std::copy(b.begin(), b.end(), s.begin());
  return s;
}

mpz_class Rng::below(const mpz_class& bound) {
  std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  std::size_t nbytes = (bits + 7) / 8;
  unsigned excess = static_cast<unsigned>(nbytes * 8 - bits);
  for (;;) {
    auto b = bytes(nbytes);
    b[0] &= static_cast<std::uint8_t>(0xff >> excess);
    mpz_class v = bigint_from_bytes(b);
    if (v < bound) return v;
  }
}

mpz_class Rng::nonzero_below(const mpz_class& bound) {
  for (;;) {
    mpz_class v = below(bound);
    if (v != 0) return v;
  }
}

Rng Rng::fork() { return Rng(engine_()); }

}  // namespace ssikyc::crypto
