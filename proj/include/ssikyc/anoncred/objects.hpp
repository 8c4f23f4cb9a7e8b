#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssikyc/codec.hpp"

namespace ssikyc::anoncred {

// Published credential template. Id: <issuer did>/schema/<name>/<version>.
struct Schema {
  std::string schema_id;
  std::string name;
  std::string version;
  std::vector<std::string> attr_names;

  std::optional<std::size_t> position(std::string_view attr) const;

  bool operator==(const Schema&) const = default;
  void encode(Writer& w) const;
  static Schema decode(Reader& r);
};

// Binds an issuer key to a schema. Id: <issuer did>/creddef/<tag>.
struct CredentialDefinition {
  std::string cred_def_id;
  std::string schema_id;
  std::string issuer_did;
  std::string key_id;
  bool revocation_supported = false;
  std::string registry_id;  // empty unless revocation_supported

  bool operator==(const CredentialDefinition&) const = default;
  void encode(Writer& w) const;
  static CredentialDefinition decode(Reader& r);
};

}  // namespace ssikyc::anoncred
