#include "ssikyc/anoncred/objects.hpp"

namespace ssikyc::anoncred {

std::optional<std::size_t> Schema::position(std::string_view attr) const {
  for (std::size_t i = 0; i < attr_names.size(); ++i)
    if (attr_names[i] == attr) return i;
  return std::nullopt;
}

void Schema::encode(Writer& w) const {
  w.str(schema_id).str(name).str(version).count(attr_names.size());
  for (const auto& a : attr_names) w.str(a);
}

Schema Schema::decode(Reader& r) {
  Schema s;
  s.schema_id = r.str();
  s.name = r.str();
  s.version = r.str();
  auto n = r.count();
  for (std::size_t i = 0; i < n; ++i) s.attr_names.push_back(r.str());
  return s;
}

void CredentialDefinition::encode(Writer& w) const {
  w.str(cred_def_id).str(schema_id).str(issuer_did).str(key_id).boolean(revocation_supported).str(
      registry_id);
}

CredentialDefinition CredentialDefinition::decode(Reader& r) {
  CredentialDefinition d;
  d.cred_def_id = r.str();
  d.schema_id = r.str();
  d.issuer_did = r.str();
  d.key_id = r.str();
  d.revocation_supported = r.boolean();
  d.registry_id = r.str();
  return d;
}

}  // namespace ssikyc::anoncred
