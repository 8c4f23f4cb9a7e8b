#include "ssikyc/trace.hpp"

namespace ssikyc {

namespace {

// Keeps the line format parseable: no tabs/newlines, and ';' '=' escaped in values.
std::string sanitize(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\t': case '\n': case '\r': out += ' '; break;
      case ';': out += "%3B"; break;
      case '=': out += "%3D"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string TraceEvent::line() const {
  std::string out = std::to_string(tick) + '\t' + sanitize(actor) + '\t' + sanitize(event) + '\t';
  for (std::size_t i = 0; i < details.size(); ++i) {
    if (i) out += ';';
    out += sanitize(details[i].first) + '=' + sanitize(details[i].second);
  }
  return out;
}

void Trace::emit(std::string_view actor, std::string_view event,
                 std::vector<std::pair<std::string, std::string>> details) {
  events_.push_back({clock_->now(), std::string(actor), std::string(event), std::move(details)});
}

std::string Trace::text() const {
  std::string out;
  for (const auto& e : events_) out += e.line() + '\n';
  return out;
}

}  // namespace ssikyc
