#pragma once

#include <array>
#include <cstdint>
#include <random>

#include <gmpxx.h>

#include "ssikyc/codec.hpp"

namespace ssikyc::crypto {

using Salt = std::array<std::uint8_t, 16>;

// Seeded deterministic random source. Every random choice in the simulator
// (keys, blinding factors, salts, nonces) is drawn from one of these, so a
// scenario replays byte-for-byte from its seed. Not a CSPRNG.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  Bytes bytes(std::size_t n);
  Salt salt();
  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound) by rejection sampling over whole bytes.
  mpz_class below(const mpz_class& bound);
  // Uniform in [1, bound).
  mpz_class nonzero_below(const mpz_class& bound);

  // Independent child stream, used to give sub-components their own source
  // without coupling their draw order.
  Rng fork();

 private:
  std::mt19937_64 engine_;
};

}  // namespace ssikyc::crypto
