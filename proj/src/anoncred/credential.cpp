#include "ssikyc/anoncred/credential.hpp"

namespace ssikyc::anoncred {

namespace {

void encode_unsigned(Writer& w, const VerifiableCredential& vc) {
  w.str(vc.cred_def_id).str(vc.schema_id).count(vc.attribute_commitments.size());
  for (const auto& d : vc.attribute_commitments) w.fixed(d);
  w.bigint(vc.link_secret_commitment.value);
  w.boolean(vc.revocation.has_value());
  if (vc.revocation) w.str(vc.revocation->registry_id).u32(vc.revocation->index);
  w.u64(vc.expiration);
}

}  // namespace

Bytes VerifiableCredential::signed_message() const {
  Writer w;
  w.str("ssikyc/credential");
  encode_unsigned(w, *this);
  return std::move(w).take();
}

void VerifiableCredential::encode(Writer& w) const {
  encode_unsigned(w, *this);
  issuer_signature.encode(w);
}

VerifiableCredential VerifiableCredential::decode(Reader& r) {
  VerifiableCredential vc;
  vc.cred_def_id = r.str();
  vc.schema_id = r.str();
  auto n = r.count();
  for (std::size_t i = 0; i < n; ++i) vc.attribute_commitments.push_back(r.fixed<32>());
  vc.link_secret_commitment.value = r.bigint();
  if (r.boolean()) {
    RevocationCoords rc;
    rc.registry_id = r.str();
    rc.index = r.u32();
    vc.revocation = rc;
  }
  vc.expiration = r.u64();
  vc.issuer_signature = crypto::Signature::decode(r);
  return vc;
}

const std::string* HeldCredential::value(std::string_view attr) const {
  for (std::size_t i = 0; i < attr_names.size(); ++i)
    if (attr_names[i] == attr) return &values[i];
  return nullptr;
}

void HeldCredential::encode(Writer& w) const {
  vc.encode(w);
  w.count(attr_names.size());
  for (std::size_t i = 0; i < attr_names.size(); ++i) {
    w.str(attr_names[i]).str(values[i]).fixed(salts[i]);
  }
  w.bigint(blinding);
}

HeldCredential HeldCredential::decode(Reader& r) {
  HeldCredential h;
  h.vc = VerifiableCredential::decode(r);
  auto n = r.count();
  for (std::size_t i = 0; i < n; ++i) {
    h.attr_names.push_back(r.str());
    h.values.push_back(r.str());
    h.salts.push_back(r.fixed<16>());
  }
  h.blinding = r.bigint();
  return h;
}

}  // namespace ssikyc::anoncred
