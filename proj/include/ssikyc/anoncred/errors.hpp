#pragma once

#include <string_view>

#include "ssikyc/error.hpp"

namespace ssikyc::anoncred {

enum class AnoncredErrc {
  MissingAttribute,
  UnknownAttribute,
  UnknownCredDef,
  StaleOffer,
  BadRequest,
  RegistryFull,
  UnknownIndex,
  AlreadyRevoked,
  NotAnIssuer,
  InvalidCredential,
  NoMatchingCredential,
  RevokedCredential,
};
std::string_view to_string(AnoncredErrc code);
using AnoncredError = CodedError<AnoncredErrc>;

}  // namespace ssikyc::anoncred
