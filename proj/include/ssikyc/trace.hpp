#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssikyc/clock.hpp"

namespace ssikyc {

struct TraceEvent {
  Tick tick = 0;
  std::string actor;
  std::string event;
  std::vector<std::pair<std::string, std::string>> details;

  // <tick>\t<actor>\t<event>\t<k=v;...>
  std::string line() const;
};

// Ordered protocol trace of one scenario. One event per protocol step.
class Trace {
 public:
  explicit Trace(const LogicalClock& clock) : clock_(&clock) {}

  void emit(std::string_view actor, std::string_view event,
            std::vector<std::pair<std::string, std::string>> details = {});

  const std::vector<TraceEvent>& events() const { return events_; }
  std::string text() const;

 private:
  const LogicalClock* clock_;
  std::vector<TraceEvent> events_;
};

}  // namespace ssikyc
