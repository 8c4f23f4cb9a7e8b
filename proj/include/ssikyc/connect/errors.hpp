#pragma once

#include <string_view>

#include "ssikyc/error.hpp"

namespace ssikyc::connect {

enum class ConnectErrc {
  ResolutionFailed,
  AttestationInvalid,
  HandshakeMismatch,
  AuthFailure,
  ReplayDetected,
  WrongPassphrase,
  CorruptBackup,
  UnknownConnection,
  UnknownKey,
  UnknownInvitation,
  NoLinkSecret,
};
std::string_view to_string(ConnectErrc code);
using ConnectError = CodedError<ConnectErrc>;

}  // namespace ssikyc::connect
