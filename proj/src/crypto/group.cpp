#include "ssikyc/crypto/group.hpp"

#include <stdexcept>

#include <openssl/bn.h>

#include "ssikyc/crypto/hash.hpp"

namespace ssikyc::crypto {

std::string_view to_string(Profile p) { return p == Profile::Test ? "TEST" : "DEFAULT"; }

Profile profile_from_string(std::string_view s) {
  if (s == "TEST") return Profile::Test;
  if (s == "DEFAULT") return Profile::Default;
  throw std::invalid_argument("unknown group profile '" + std::string(s) + "'");
}

mpz_class powm(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

namespace {

mpz_class rfc3526_prime_2048() {
  BIGNUM* bn = BN_get_rfc3526_prime_2048(nullptr);
  if (bn == nullptr) throw std::runtime_error("BN_get_rfc3526_prime_2048 failed");
  Bytes buf(static_cast<std::size_t>(BN_num_bytes(bn)));
  BN_bn2bin(bn, buf.data());
  BN_free(bn);
  return bigint_from_bytes(buf);
}

GroupParams make_standard() {
  GroupParams gp;
  gp.profile = Profile::Default;
  gp.p = rfc3526_prime_2048();
  gp.q = (gp.p - 1) / 2;
  gp.g = 2;
  gp.h = hash_to_subgroup(gp, "ssikyc/pedersen-h");
  return gp;
}

}  // namespace

const GroupParams& GroupParams::test() {
  static const GroupParams gp{Profile::Test, 23, 11, 2, 3};
  return gp;
}

const GroupParams& GroupParams::standard() {
  static const GroupParams gp = make_standard();
  return gp;
}

const GroupParams& GroupParams::for_profile(Profile p) {
  return p == Profile::Test ? test() : standard();
}

bool GroupParams::valid() const {
  if (mpz_probab_prime_p(p.get_mpz_t(), 32) == 0) return false;
  if (mpz_probab_prime_p(q.get_mpz_t(), 32) == 0) return false;
  if ((p - 1) % q != 0) return false;
  return g != 1 && h != 1 && in_subgroup(g) && in_subgroup(h);
}

bool GroupParams::in_subgroup(const mpz_class& x) const {
  return x > 0 && x < p && powm(x, q, p) == 1;
}

std::size_t GroupParams::element_bytes() const {
  return (mpz_sizeinbase(p.get_mpz_t(), 2) + 7) / 8;
}

mpz_class hash_to_subgroup(const GroupParams& params, std::string_view tag) {
  const std::size_t want = params.element_bytes() + 16;
  const mpz_class cofactor = (params.p - 1) / params.q;
  std::uint32_t counter = 0;
  for (;;) {
    Bytes wide;
    while (wide.size() < want) {
      Writer w;
      w.str(tag).u32(counter++);
      auto d = sha256(w.data());
      wide.insert(wide.end(), d.begin(), d.end());
    }
    wide.resize(want);
    mpz_class x = bigint_from_bytes(wide) % params.p;
    mpz_class h = powm(x, cofactor, params.p);
    if (h != 1 && h != 0) return h;
  }
}

}  // namespace ssikyc::crypto
