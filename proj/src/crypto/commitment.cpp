#include "ssikyc/crypto/commitment.hpp"

namespace ssikyc::crypto {

std::string_view to_string(CryptoErrc code) {
  switch (code) {
    case CryptoErrc::OutOfRange: return "OutOfRange";
    case CryptoErrc::NotInSubgroup: return "NotInSubgroup";
    case CryptoErrc::BadLength: return "BadLength";
  }
  return "Unknown";
}

PedersenCommitment pedersen_commit(const GroupParams& params, const mpz_class& m,
                                   const mpz_class& r) {
  if (!params.is_scalar(m)) throw CryptoError(CryptoErrc::OutOfRange, "message scalar");
  if (!params.is_scalar(r)) throw CryptoError(CryptoErrc::OutOfRange, "blinding scalar");
  return {powm(params.g, m, params.p) * powm(params.h, r, params.p) % params.p};
}

Digest hash_commit_digest(std::string_view name, std::string_view value, const Salt& salt) {
  Writer w;
  w.str(name).str(value).bytes(ByteView(salt.data(), salt.size()));
  return sha256(w.data());
}

void SigmaProof::encode(Writer& w) const {
  w.count(commitments.size());
  for (const auto& c : commitments) w.bigint(c);
  w.bigint(challenge);
  w.count(responses.size());
  for (const auto& z : responses) w.bigint(z);
}

SigmaProof SigmaProof::decode(Reader& r) {
  SigmaProof p;
  auto n = r.count();
  for (std::size_t i = 0; i < n; ++i) p.commitments.push_back(r.bigint());
  p.challenge = r.bigint();
  n = r.count();
  for (std::size_t i = 0; i < n; ++i) p.responses.push_back(r.bigint());
  return p;
}

namespace {

mpz_class mod_q(const GroupParams& params, const mpz_class& x) {
  mpz_class v = x % params.q;
  if (v < 0) v += params.q;
  return v;
}

mpz_class two_base(const GroupParams& params, const mpz_class& a, const mpz_class& b) {
  return powm(params.g, a, params.p) * powm(params.h, b, params.p) % params.p;
}

mpz_class opening_challenge(const Transcript& base, const PedersenCommitment& c,
                            const mpz_class& a) {
  Transcript t = base;
  t.absorb("proof", "pedersen-opening").absorb_int("C", c.value).absorb_int("A", a);
  return t.challenge();
}

mpz_class equality_challenge(const Transcript& base, const PedersenCommitment& c1,
                             const PedersenCommitment& c2, const mpz_class& a1,
                             const mpz_class& a2) {
  Transcript t = base;
  t.absorb("proof", "pedersen-equality")
      .absorb_int("C1", c1.value)
      .absorb_int("C2", c2.value)
      .absorb_int("A1", a1)
      .absorb_int("A2", a2);
  return t.challenge();
}

bool well_formed(const GroupParams& params, const SigmaProof& proof, std::size_t n_commit,
                 std::size_t n_resp) {
  if (proof.commitments.size() != n_commit || proof.responses.size() != n_resp) return false;
  for (const auto& a : proof.commitments)
    if (!params.in_subgroup(a)) return false;
  for (const auto& z : proof.responses)
    if (!params.is_scalar(z)) return false;
  return usable_challenge(params, proof.challenge);
}

}  // namespace

SigmaProof prove_opening(const GroupParams& params, const PedersenCommitment& c,
                         const mpz_class& m, const mpz_class& r, const Transcript& transcript,
                         Rng& rng) {
  for (;;) {
    mpz_class a = rng.below(params.q);
    mpz_class b = rng.below(params.q);
    mpz_class commit = two_base(params, a, b);
    mpz_class ch = opening_challenge(transcript, c, commit);
    if (!usable_challenge(params, ch)) continue;
    mpz_class e = ch % params.q;
    return {{commit}, ch, {mod_q(params, a + e * m), mod_q(params, b + e * r)}};
  }
}

bool verify_opening(const GroupParams& params, const PedersenCommitment& c,
                    const SigmaProof& proof, const Transcript& transcript) {
  if (!params.in_subgroup(c.value) || !well_formed(params, proof, 1, 2)) return false;
  const auto& commit = proof.commitments[0];
  if (opening_challenge(transcript, c, commit) != proof.challenge) return false;
  mpz_class e = proof.challenge % params.q;
  mpz_class lhs = two_base(params, proof.responses[0], proof.responses[1]);
  mpz_class rhs = commit * powm(c.value, e, params.p) % params.p;
  return lhs == rhs;
}

SigmaProof prove_equal(const GroupParams& params, const PedersenCommitment& c1,
                       const PedersenCommitment& c2, const mpz_class& m, const mpz_class& r1,
                       const mpz_class& r2, const Transcript& transcript, Rng& rng) {
  for (;;) {
    mpz_class a = rng.below(params.q);
    mpz_class b1 = rng.below(params.q);
    mpz_class b2 = rng.below(params.q);
    mpz_class a1 = two_base(params, a, b1);
    mpz_class a2 = two_base(params, a, b2);
    mpz_class ch = equality_challenge(transcript, c1, c2, a1, a2);
    if (!usable_challenge(params, ch)) continue;
    mpz_class e = ch % params.q;
    return {{a1, a2},
            ch,
            {mod_q(params, a + e * m), mod_q(params, b1 + e * r1), mod_q(params, b2 + e * r2)}};
  }
}

bool verify_equal(const GroupParams& params, const PedersenCommitment& c1,
                  const PedersenCommitment& c2, const SigmaProof& proof,
                  const Transcript& transcript) {
  if (!params.in_subgroup(c1.value) || !params.in_subgroup(c2.value)) return false;
  if (!well_formed(params, proof, 2, 3)) return false;
  const auto& a1 = proof.commitments[0];
  const auto& a2 = proof.commitments[1];
  if (equality_challenge(transcript, c1, c2, a1, a2) != proof.challenge) return false;
  mpz_class e = proof.challenge % params.q;
  const auto& z = proof.responses;
  bool first = two_base(params, z[0], z[1]) == a1 * powm(c1.value, e, params.p) % params.p;
  bool second = two_base(params, z[0], z[2]) == a2 * powm(c2.value, e, params.p) % params.p;
  return first && second;
}

}  // namespace ssikyc::crypto
