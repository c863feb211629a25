#pragma once

#include "dca/cell.hpp"
#include "dca/signals.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dca {

/// An antigen sighting attributed to a named source (e.g. a process).
struct AntigenEvent {
  AntigenLabel label;
  std::string process;

  friend bool operator==(const AntigenEvent&, const AntigenEvent&) = default;
};

/// One timestamped input: either a full signal update or one antigen.
struct Event {
  double timestamp = 0.0;
  std::variant<SignalVector, AntigenEvent> payload;

  bool is_signal() const { return std::holds_alternative<SignalVector>(payload); }
  bool is_antigen() const { return std::holds_alternative<AntigenEvent>(payload); }
  const SignalVector& signals() const { return std::get<SignalVector>(payload); }
  const AntigenEvent& antigen() const { return std::get<AntigenEvent>(payload); }

  friend bool operator==(const Event&, const Event&) = default;
};

Event signal_event(double t, const SignalVector& s);
Event antigen_event(double t, std::string label, std::string process);

// Event log format, one event per line, single-tab separated:
//   <timestamp> S <pamp> <danger> <safe> <inflammation>
//   <timestamp> A <label> <process>
// Reals are written in shortest round-trip form, so reading a written log
// reproduces every value bit for bit.

/// Serialises one event without the trailing newline.
std::string format_event(const Event& e);

/// Parses one line (no newline). Throws ParseError tagged with `line_no`.
Event parse_event(std::string_view line, std::size_t line_no = 0);

/// Throws std::invalid_argument if timestamps decrease.
void write_log(std::ostream& os, const std::vector<Event>& events);

/// Throws ParseError on a malformed line or a decreasing timestamp, naming
/// the offending line.
std::vector<Event> read_log(std::istream& is);

std::vector<Event> read_log_file(const std::string& path);
void write_log_file(const std::string& path, const std::vector<Event>& events);

}  // namespace dca
