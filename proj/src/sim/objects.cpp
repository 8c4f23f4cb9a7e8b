#include "ssikyc/sim/objects.hpp"

namespace ssikyc::sim {

namespace {

template <class T>
Bytes tagged(std::string_view tag, const T& o) {
  Writer w;
  w.str(tag);
  o.encode(w);
  return std::move(w).take();
}

std::string hex_int(const mpz_class& v) { return v.get_str(16); }

template <std::size_t N>
std::string hex(const std::array<std::uint8_t, N>& a) {
  return to_hex(ByteView(a.data(), N));
}

nlohmann::ordered_json describe(const crypto::SigmaProof& p) {
  nlohmann::ordered_json j;
  j["commitments"] = nlohmann::ordered_json::array();
  for (const auto& c : p.commitments) j["commitments"].push_back(hex_int(c));
  j["challenge"] = hex_int(p.challenge);
  j["responses"] = nlohmann::ordered_json::array();
  for (const auto& r : p.responses) j["responses"].push_back(hex_int(r));
  return j;
}

nlohmann::ordered_json describe(const crypto::Signature& s) { return {{"c", hex_int(s.c)}, {"s", hex_int(s.s)}}; }

nlohmann::ordered_json describe(const anoncred::Schema& s) {
  return {{"schema_id", s.schema_id}, {"name", s.name}, {"version", s.version}, {"attr_names", s.attr_names}};
}

nlohmann::ordered_json describe(const anoncred::CredentialDefinition& d) {
  return {{"cred_def_id", d.cred_def_id},     {"schema_id", d.schema_id},
          {"issuer_did", d.issuer_did},       {"key_id", d.key_id},
          {"revocation_supported", d.revocation_supported}, {"registry_id", d.registry_id}};
}

nlohmann::ordered_json describe(const anoncred::CredentialOffer& o) {
  nlohmann::ordered_json j = {{"cred_def_id", o.cred_def_id}};
  j["preview"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : o.preview) j["preview"][k] = v;
  j["expiration"] = o.expiration;
  j["registry_id"] = o.registry_id ? nlohmann::ordered_json(*o.registry_id) : nlohmann::ordered_json();
  j["nonce"] = hex(o.nonce);
  return j;
}

nlohmann::ordered_json describe(const anoncred::VerifiableCredential& vc) {
  nlohmann::ordered_json j = {{"cred_def_id", vc.cred_def_id}, {"schema_id", vc.schema_id}};
  j["attribute_commitments"] = nlohmann::ordered_json::array();
  for (const auto& d : vc.attribute_commitments) j["attribute_commitments"].push_back(hex(d));
  j["link_secret_commitment"] = hex_int(vc.link_secret_commitment.value);
  j["revocation"] = vc.revocation ? nlohmann::ordered_json{{"registry_id", vc.revocation->registry_id},
                                                           {"index", vc.revocation->index}}
                                  : nlohmann::ordered_json();
  j["expiration"] = vc.expiration;
  j["issuer_signature"] = describe(vc.issuer_signature);
  return j;
}

nlohmann::ordered_json describe(const anoncred::ProofRequest& r) {
  nlohmann::ordered_json j;
  j["attributes"] = nlohmann::ordered_json::array();
  for (const auto& a : r.attributes)
    j["attributes"].push_back({{"name", a.name}, {"schema_ids", a.schema_ids}, {"cred_def_ids", a.cred_def_ids}});
  j["nonce"] = hex(r.nonce);
  j["non_revoked_as_of"] = r.non_revoked_as_of ? nlohmann::ordered_json(*r.non_revoked_as_of) : nlohmann::ordered_json();
  j["freshness_window"] = r.freshness_window;
  return j;
}

nlohmann::ordered_json describe(const anoncred::VerifiablePresentation& vp) {
  nlohmann::ordered_json j;
  j["credentials"] = nlohmann::ordered_json::array();
  for (const auto& c : vp.credentials) {
    nlohmann::ordered_json cj = {{"cred_def_id", c.cred_def_id}, {"schema_id", c.schema_id}};
    cj["attribute_commitments"] = nlohmann::ordered_json::array();
    for (const auto& d : c.attribute_commitments) cj["attribute_commitments"].push_back(hex(d));
    cj["issuer_signature"] = describe(c.issuer_signature);
    cj["expiration"] = c.expiration;
    if (c.revocation) {
      cj["revocation"] = {{"registry_id", c.revocation->registry_id}, {"index", c.revocation->index}};
      cj["revocation"]["version_claimed"] = c.revocation->version_claimed
                                                ? nlohmann::ordered_json(*c.revocation->version_claimed)
                                                : nlohmann::ordered_json();
    } else {
      cj["revocation"] = nullptr;
    }
    cj["revealed"] = nlohmann::ordered_json::array();
    for (const auto& a : c.revealed)
      cj["revealed"].push_back({{"name", a.name}, {"value", a.value}, {"salt", hex(a.salt)}});
    cj["link_secret_commitment"] = hex_int(c.link_secret_commitment.value);
    j["credentials"].push_back(cj);
  }
  j["assignment"] = vp.assignment;
  j["opening"] = describe(vp.opening);
  j["equalities"] = nlohmann::ordered_json::array();
  for (const auto& e : vp.equalities) j["equalities"].push_back(describe(e));
  return j;
}

template <class T>
nlohmann::ordered_json finish(std::string_view tag, Reader& r) {
  auto o = T::decode(r);
  r.expect_done();
  return {{"type", tag}, {"object", describe(o)}};
}

}  // namespace

Bytes object_file(const anoncred::Schema& o) { return tagged("Schema", o); }
Bytes object_file(const anoncred::CredentialDefinition& o) { return tagged("CredentialDefinition", o); }
Bytes object_file(const anoncred::CredentialOffer& o) { return tagged("CredentialOffer", o); }
Bytes object_file(const anoncred::VerifiableCredential& o) { return tagged("VerifiableCredential", o); }
Bytes object_file(const anoncred::ProofRequest& o) { return tagged("ProofRequest", o); }
Bytes object_file(const anoncred::VerifiablePresentation& o) { return o.to_bytes(); }

nlohmann::ordered_json describe_object(ByteView file) {
  Reader r(file);
  auto tag = r.str();
  if (tag == "Schema") return finish<anoncred::Schema>(tag, r);
  if (tag == "CredentialDefinition") return finish<anoncred::CredentialDefinition>(tag, r);
  if (tag == "CredentialOffer") return finish<anoncred::CredentialOffer>(tag, r);
  if (tag == "VerifiableCredential") return finish<anoncred::VerifiableCredential>(tag, r);
  if (tag == "ProofRequest") return finish<anoncred::ProofRequest>(tag, r);
  if (tag == "VerifiablePresentation") return finish<anoncred::VerifiablePresentation>(tag, r);
  throw CodecError(CodecErrc::BadTag, "unknown object type '" + tag + "'");
}

}  // namespace ssikyc::sim
