#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssikyc {

// Exception carrying a module-specific error code. Each module defines its
// own enum and a to_string() overload for it.
template <class Code>
class CodedError : public std::runtime_error {
 public:
  CodedError(Code code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) +
                           (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

}  // namespace ssikyc
