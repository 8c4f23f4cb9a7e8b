#pragma once

#include "json.hpp"

#include "ssikyc/anoncred/credential.hpp"
#include "ssikyc/anoncred/issuance.hpp"
#include "ssikyc/anoncred/objects.hpp"
#include "ssikyc/anoncred/presentation.hpp"
#include "ssikyc/codec.hpp"

namespace ssikyc::sim {

// Object file: str(type tag) followed by the object's canonical encoding.
// Tags: Schema, CredentialDefinition, CredentialOffer, VerifiableCredential,
// ProofRequest, VerifiablePresentation.
Bytes object_file(const anoncred::Schema& o);
Bytes object_file(const anoncred::CredentialDefinition& o);
Bytes object_file(const anoncred::CredentialOffer& o);
Bytes object_file(const anoncred::VerifiableCredential& o);
Bytes object_file(const anoncred::ProofRequest& o);
Bytes object_file(const anoncred::VerifiablePresentation& o);

// Decodes an object file into a readable JSON form. Throws CodecError.
nlohmann::ordered_json describe_object(ByteView file);

}  // namespace ssikyc::sim
