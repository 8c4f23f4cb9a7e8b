#pragma once

#include <cstdint>
#include <stdexcept>

namespace ssikyc {

using Tick = std::uint64_t;

// Global logical clock shared by every actor of one scenario. Only the
// harness advances it; nothing reads wall-clock time.
class LogicalClock {
 public:
  Tick now() const { return now_; }
  void advance(Tick by = 1) { now_ += by; }
  void advance_to(Tick t) {
    if (t < now_) throw std::invalid_argument("logical clock cannot move backwards");
    now_ = t;
  }

 private:
  Tick now_ = 0;
};

}  // namespace ssikyc
