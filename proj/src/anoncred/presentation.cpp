#include "ssikyc/anoncred/presentation.hpp"

#include <algorithm>
#include <functional>

namespace ssikyc::anoncred {

namespace {

void encode_strings(Writer& w, const std::vector<std::string>& v) {
  w.count(v.size());
  for (const auto& s : v) w.str(s);
}

std::vector<std::string> decode_strings(Reader& r) {
  std::vector<std::string> v(r.count());
  for (auto& s : v) s = r.str();
  return v;
}

bool item_matches(const AttributeRequest& item, const HeldCredential& c) {
  return c.value(item.name) != nullptr && item.accepts(c.vc.schema_id, c.vc.cred_def_id);
}

// Which wallet credentials may be shown under the request's revocation
// requirement, and the registry version each one would claim.
struct Usability {
  std::vector<bool> usable;
  std::vector<bool> revoked;
  std::vector<std::optional<std::uint64_t>> version;
};

Usability check_usability(const connect::Wallet& wallet, const ProofRequest& request,
                          const ledger::Resolver& resolver, const PresentationOptions& options) {
  const auto& creds = wallet.credentials();
  Usability u{std::vector<bool>(creds.size(), true), std::vector<bool>(creds.size(), false),
              std::vector<std::optional<std::uint64_t>>(creds.size())};
  if (!request.non_revoked_as_of) return u;
  for (std::size_t i = 0; i < creds.size(); ++i) {
    const auto& rc = creds[i].vc.revocation;
    if (!rc) continue;
    // Only look up registries the request could actually use.
    bool relevant = std::any_of(request.attributes.begin(), request.attributes.end(),
                                [&](const auto& item) { return item_matches(item, creds[i]); });
    if (!relevant) continue;
    auto reg = resolver.registry(rc->registry_id, ledger::AtTick{*request.non_revoked_as_of});
    u.version[i] = options.claim_version.value_or(reg.version);
    if (reg.is_revoked(rc->index)) {
      u.revoked[i] = true;
      u.usable[i] = options.ignore_revocation;
    }
  }
  return u;
}

}  // namespace

bool AttributeRequest::accepts(std::string_view schema_id, std::string_view cred_def_id) const {
  if (!schema_ids.empty() && std::find(schema_ids.begin(), schema_ids.end(), schema_id) == schema_ids.end())
    return false;
  if (!cred_def_ids.empty() && std::find(cred_def_ids.begin(), cred_def_ids.end(), cred_def_id) == cred_def_ids.end())
    return false;
  return true;
}

void ProofRequest::encode(Writer& w) const {
  w.count(attributes.size());
  for (const auto& a : attributes) {
    w.str(a.name);
    encode_strings(w, a.schema_ids);
    encode_strings(w, a.cred_def_ids);
  }
  w.fixed(nonce).boolean(non_revoked_as_of.has_value());
  if (non_revoked_as_of) w.u64(*non_revoked_as_of);
  w.u64(freshness_window);
}

ProofRequest ProofRequest::decode(Reader& r) {
  ProofRequest p;
  p.attributes.resize(r.count());
  for (auto& a : p.attributes) {
    a.name = r.str();
    a.schema_ids = decode_strings(r);
    a.cred_def_ids = decode_strings(r);
  }
  p.nonce = r.fixed<16>();
  if (r.boolean()) p.non_revoked_as_of = r.u64();
  p.freshness_window = r.u64();
  return p;
}

VerifiableCredential PresentedCredential::credential() const {
  VerifiableCredential vc;
  vc.cred_def_id = cred_def_id;
  vc.schema_id = schema_id;
  vc.attribute_commitments = attribute_commitments;
  vc.link_secret_commitment = link_secret_commitment;
  if (revocation) vc.revocation = RevocationCoords{revocation->registry_id, revocation->index};
  vc.expiration = expiration;
  vc.issuer_signature = issuer_signature;
  return vc;
}

void PresentedCredential::encode(Writer& w) const {
  w.str(cred_def_id).str(schema_id).count(attribute_commitments.size());
  for (const auto& d : attribute_commitments) w.fixed(d);
  issuer_signature.encode(w);
  w.u64(expiration).boolean(revocation.has_value());
  if (revocation) {
    w.str(revocation->registry_id).u32(revocation->index).boolean(revocation->version_claimed.has_value());
    if (revocation->version_claimed) w.u64(*revocation->version_claimed);
  }
  w.count(revealed.size());
  for (const auto& a : revealed) w.str(a.name).str(a.value).fixed(a.salt);
  w.bigint(link_secret_commitment.value);
}

PresentedCredential PresentedCredential::decode(Reader& r) {
  PresentedCredential c;
  c.cred_def_id = r.str();
  c.schema_id = r.str();
  c.attribute_commitments.resize(r.count());
  for (auto& d : c.attribute_commitments) d = r.fixed<32>();
  c.issuer_signature = crypto::Signature::decode(r);
  c.expiration = r.u64();
  if (r.boolean()) {
    RevocationClaim rc;
    rc.registry_id = r.str();
    rc.index = r.u32();
    if (r.boolean()) rc.version_claimed = r.u64();
    c.revocation = rc;
  }
  c.revealed.resize(r.count());
  for (auto& a : c.revealed) {
    a.name = r.str();
    a.value = r.str();
    a.salt = r.fixed<16>();
  }
  c.link_secret_commitment.value = r.bigint();
  return c;
}

void VerifiablePresentation::encode(Writer& w) const {
  w.count(credentials.size());
  for (const auto& c : credentials) c.encode(w);
  w.count(assignment.size());
  for (auto a : assignment) w.u32(a);
  opening.encode(w);
  w.count(equalities.size());
  for (const auto& e : equalities) e.encode(w);
}

VerifiablePresentation VerifiablePresentation::decode(Reader& r) {
  VerifiablePresentation vp;
  auto n = r.count();
  for (std::size_t i = 0; i < n; ++i) vp.credentials.push_back(PresentedCredential::decode(r));
  vp.assignment.resize(r.count());
  for (auto& a : vp.assignment) a = r.u32();
  vp.opening = crypto::SigmaProof::decode(r);
  auto m = r.count();
  for (std::size_t i = 0; i < m; ++i) vp.equalities.push_back(crypto::SigmaProof::decode(r));
  return vp;
}

Bytes VerifiablePresentation::to_bytes() const {
  Writer w;
  w.str("VerifiablePresentation");
  encode(w);
  return std::move(w).take();
}

VerifiablePresentation VerifiablePresentation::from_bytes(ByteView b) {
  Reader r(b);
  if (r.str() != "VerifiablePresentation") throw CodecError(CodecErrc::BadTag, "expected VerifiablePresentation");
  auto vp = decode(r);
  r.expect_done();
  return vp;
}

crypto::Transcript presentation_transcript(const ProofRequest& request,
                                           const std::vector<PresentedCredential>& credentials,
                                           const std::vector<std::uint32_t>& assignment) {
  crypto::Transcript t("ssikyc/presentation");
  t.absorb("nonce", request.nonce);
  Writer rw;
  request.encode(rw);
  t.absorb("request", rw.data());
  for (const auto& c : credentials) {
    Writer cw;
    c.encode(cw);
    t.absorb("credential", cw.data());
  }
  Writer aw;
  for (auto a : assignment) aw.u32(a);
  t.absorb("assignment", aw.data());
  return t;
}

namespace {

crypto::Transcript opening_transcript(crypto::Transcript t) {
  t.absorb("proof", "opening");
  return t;
}

crypto::Transcript equality_transcript(crypto::Transcript t, std::size_t i) {
  t.absorb("proof", "equal").absorb("link", std::to_string(i));
  return t;
}

}  // namespace

std::optional<std::vector<std::size_t>> match_credentials(const connect::Wallet& wallet,
                                                          const ProofRequest& request,
                                                          const std::vector<bool>& usable) {
  const auto& creds = wallet.credentials();
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < creds.size(); ++i)
    if (usable[i]) pool.push_back(i);

  std::vector<std::size_t> chosen;
  std::optional<std::vector<std::size_t>> found;
  auto covers = [&] {
    std::vector<std::size_t> assignment;
    for (const auto& item : request.attributes) {
      auto it = std::find_if(chosen.begin(), chosen.end(), [&](auto i) { return item_matches(item, creds[i]); });
      if (it == chosen.end()) return false;
      assignment.push_back(*it);
    }
    found = std::move(assignment);
    return true;
  };
  // Subsets in order of size, then lexicographically by wallet index.
  std::function<bool(std::size_t, std::size_t)> pick = [&](std::size_t from, std::size_t left) {
    if (left == 0) return covers();
    for (std::size_t i = from; i + left <= pool.size(); ++i) {
      chosen.push_back(pool[i]);
      if (pick(i + 1, left - 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (request.attributes.empty()) return std::vector<std::size_t>{};
  for (std::size_t k = 1; k <= pool.size(); ++k)
    if (pick(0, k)) return found;
  return std::nullopt;
}

VerifiablePresentation create_presentation(connect::Wallet& wallet, const ProofRequest& request,
                                           const ledger::Resolver& resolver, crypto::Rng& rng,
                                           const PresentationOptions& options) {
  const auto& creds = wallet.credentials();
  auto u = check_usability(wallet, request, resolver, options);
  auto match = match_credentials(wallet, request, u.usable);
  if (!match) {
    if (match_credentials(wallet, request, std::vector<bool>(creds.size(), true)))
      throw AnoncredError(AnoncredErrc::RevokedCredential, "only revoked credentials satisfy the request");
    std::string missing;
    for (const auto& item : request.attributes) {
      bool ok = false;
      for (std::size_t i = 0; i < creds.size(); ++i) ok = ok || (u.usable[i] && item_matches(item, creds[i]));
      if (!ok) missing += (missing.empty() ? "" : ",") + item.name;
    }
    throw AnoncredError(AnoncredErrc::NoMatchingCredential, missing);
  }

  std::vector<std::size_t> used(match->begin(), match->end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());

  VerifiablePresentation vp;
  std::vector<std::string> disclosed;
  for (auto wi : used) {
    const auto& held = creds[wi];
    PresentedCredential pc;
    pc.cred_def_id = held.vc.cred_def_id;
    pc.schema_id = held.vc.schema_id;
    pc.attribute_commitments = held.vc.attribute_commitments;
    pc.issuer_signature = held.vc.issuer_signature;
    pc.expiration = held.vc.expiration;
    pc.link_secret_commitment = held.vc.link_secret_commitment;
    if (held.vc.revocation) pc.revocation = RevocationClaim{held.vc.revocation->registry_id, held.vc.revocation->index, u.version[wi]};
    for (std::size_t a = 0; a < held.attr_names.size(); ++a) {
      bool wanted = false;
      for (std::size_t i = 0; i < request.attributes.size(); ++i)
        wanted = wanted || ((*match)[i] == wi && request.attributes[i].name == held.attr_names[a]);
      if (!wanted) continue;
      pc.revealed.push_back({held.attr_names[a], held.values[a], held.salts[a]});
      disclosed.push_back(held.attr_names[a]);
    }
    vp.credentials.push_back(std::move(pc));
  }
  for (auto wi : *match)
    vp.assignment.push_back(static_cast<std::uint32_t>(std::find(used.begin(), used.end(), wi) - used.begin()));

  const auto& gp = wallet.params();
  const auto& ls = wallet.link_secret();
  auto t = presentation_transcript(request, vp.credentials, vp.assignment);
  vp.opening = crypto::prove_opening(gp, vp.credentials[0].link_secret_commitment, ls, creds[used[0]].blinding,
                                     opening_transcript(t), rng);
  for (std::size_t i = 0; i + 1 < used.size(); ++i) {
    vp.equalities.push_back(crypto::prove_equal(gp, vp.credentials[i].link_secret_commitment,
                                                vp.credentials[i + 1].link_secret_commitment, ls,
                                                creds[used[i]].blinding, creds[used[i + 1]].blinding,
                                                equality_transcript(t, i), rng));
  }
  wallet.log_disclosure({options.now, options.verifier_label, to_hex(request.nonce), disclosed});
  return vp;
}

PartialPresentation create_partial_presentation(connect::Wallet& wallet, const ProofRequest& request,
                                                const ledger::Resolver& resolver, crypto::Rng& rng,
                                                const PresentationOptions& options) {
  const auto& creds = wallet.credentials();
  auto u = check_usability(wallet, request, resolver, options);
  PartialPresentation out;
  out.answered = request;
  out.answered.attributes.clear();
  for (const auto& item : request.attributes) {
    bool ok = false;
    for (std::size_t i = 0; i < creds.size(); ++i) ok = ok || (u.usable[i] && item_matches(item, creds[i]));
    if (ok)
      out.answered.attributes.push_back(item);
    else
      out.missing.push_back(item.name);
  }
  if (!out.answered.attributes.empty())
    out.vp = create_presentation(wallet, out.answered, resolver, rng, options);
  return out;
}

std::string_view to_string(VerifyReason r) {
  switch (r) {
    case VerifyReason::MalformedPresentation: return "MalformedPresentation";
    case VerifyReason::UnknownIssuer: return "UnknownIssuer";
    case VerifyReason::SignatureInvalid: return "SignatureInvalid";
    case VerifyReason::CommitmentMismatch: return "CommitmentMismatch";
    case VerifyReason::MissingAttribute: return "MissingAttribute";
    case VerifyReason::RestrictionViolated: return "RestrictionViolated";
    case VerifyReason::TranscriptMismatch: return "TranscriptMismatch";
    case VerifyReason::LinkSecretMismatch: return "LinkSecretMismatch";
    case VerifyReason::MissingRevocationClaim: return "MissingRevocationClaim";
    case VerifyReason::StaleRevocationState: return "StaleRevocationState";
    case VerifyReason::Revoked: return "Revoked";
    case VerifyReason::Expired: return "Expired";
    case VerifyReason::NonceUnknown: return "NonceUnknown";
    case VerifyReason::NonceReplayed: return "NonceReplayed";
  }
  return "Unknown";
}

bool VerificationResult::has(VerifyReason r) const {
  return std::find(reasons.begin(), reasons.end(), r) != reasons.end();
}

ProofRequest Verifier::make_request(std::vector<AttributeRequest> attributes, crypto::Rng& rng,
                                    std::optional<Tick> non_revoked_as_of, Tick freshness_window) {
  ProofRequest p;
  p.attributes = std::move(attributes);
  do {
    p.nonce = rng.salt();
  } while (issued(p.nonce));
  p.non_revoked_as_of = non_revoked_as_of;
  p.freshness_window = freshness_window;
  note_issued(p.nonce);
  return p;
}

VerificationResult verify_presentation(Verifier& verifier, const VerifiablePresentation& vp,
                                       const ProofRequest& request, const ledger::Resolver& resolver,
                                       Tick now) {
  VerificationResult res;
  auto fail = [&](VerifyReason r) {
    if (!res.has(r)) res.reasons.push_back(r);
  };
  if (!verifier.issued(request.nonce)) fail(VerifyReason::NonceUnknown);
  if (verifier.consumed(request.nonce)) fail(VerifyReason::NonceReplayed);

  const auto& creds = vp.credentials;
  bool shape_ok = !creds.empty() && vp.assignment.size() == request.attributes.size() &&
                  vp.equalities.size() + 1 == creds.size() &&
                  std::all_of(vp.assignment.begin(), vp.assignment.end(), [&](auto a) { return a < creds.size(); });
  if (!shape_ok) {
    fail(VerifyReason::MalformedPresentation);
    return res;
  }

  std::vector<std::optional<Schema>> schemas(creds.size());
  for (std::size_t ci = 0; ci < creds.size(); ++ci) {
    const auto& pc = creds[ci];
    CredentialDefinition def;
    try {
      def = resolver.cred_def(pc.cred_def_id);
      schemas[ci] = resolver.schema(def.schema_id);
      if (!issuer_signature_valid(pc.credential(), def, resolver)) fail(VerifyReason::SignatureInvalid);
    } catch (const ledger::LedgerError&) {
      fail(VerifyReason::UnknownIssuer);
      continue;
    }
    const auto& schema = *schemas[ci];
    if (pc.schema_id != def.schema_id || pc.attribute_commitments.size() != schema.attr_names.size()) {
      fail(VerifyReason::MalformedPresentation);
      continue;
    }
    for (const auto& a : pc.revealed) {
      auto pos = schema.position(a.name);
      if (!pos) {
        fail(VerifyReason::MalformedPresentation);
        continue;
      }
      if (crypto::hash_commit_digest(a.name, a.value, a.salt) != pc.attribute_commitments[*pos])
        fail(VerifyReason::CommitmentMismatch);
    }
    if (pc.expiration <= now) fail(VerifyReason::Expired);

    if (def.revocation_supported != pc.revocation.has_value() ||
        (pc.revocation && pc.revocation->registry_id != def.registry_id)) {
      fail(VerifyReason::SignatureInvalid);
      continue;
    }
    if (request.non_revoked_as_of && pc.revocation) {
      const auto& claim = *pc.revocation;
      if (!claim.version_claimed) {
        fail(VerifyReason::MissingRevocationClaim);
        continue;
      }
      const Tick as_of = *request.non_revoked_as_of;
      const Tick earliest = as_of >= request.freshness_window ? as_of - request.freshness_window : 0;
      try {
        auto newest = resolver.registry(claim.registry_id, ledger::AtTick{as_of});
        std::uint64_t oldest = newest.version;
        try {
          oldest = resolver.registry(claim.registry_id, ledger::AtTick{earliest}).version;
        } catch (const ledger::LedgerError&) {
          oldest = 0;
        }
        if (*claim.version_claimed < oldest || *claim.version_claimed > newest.version) {
          fail(VerifyReason::StaleRevocationState);
        } else if (resolver.registry(claim.registry_id, ledger::AtVersion{*claim.version_claimed}).is_revoked(claim.index)) {
          fail(VerifyReason::Revoked);
        }
      } catch (const ledger::LedgerError&) {
        fail(VerifyReason::StaleRevocationState);
      }
    }
  }

  for (std::size_t i = 0; i < request.attributes.size(); ++i) {
    const auto& item = request.attributes[i];
    const auto& pc = creds[vp.assignment[i]];
    if (!item.accepts(pc.schema_id, pc.cred_def_id)) fail(VerifyReason::RestrictionViolated);
    auto it = std::find_if(pc.revealed.begin(), pc.revealed.end(), [&](const auto& a) { return a.name == item.name; });
    if (it == pc.revealed.end())
      fail(VerifyReason::MissingAttribute);
    else
      res.attributes[item.name] = it->value;
  }

  const auto& gp = verifier.params();
  auto t = presentation_transcript(request, creds, vp.assignment);
  if (!crypto::verify_opening(gp, creds[0].link_secret_commitment, vp.opening, opening_transcript(t))) {
    fail(VerifyReason::TranscriptMismatch);
  } else {
    for (std::size_t i = 0; i + 1 < creds.size(); ++i)
      if (!crypto::verify_equal(gp, creds[i].link_secret_commitment, creds[i + 1].link_secret_commitment,
                                vp.equalities[i], equality_transcript(t, i)))
        fail(VerifyReason::LinkSecretMismatch);
  }

  res.accepted = res.reasons.empty();
  if (res.accepted)
    verifier.consume(request.nonce);
  else
    res.attributes.clear();
  return res;
}

}  // namespace ssikyc::anoncred
