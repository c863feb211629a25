#include "dca/event.hpp"

#include "dca/text.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace dca {

Event signal_event(double t, const SignalVector& s) { return Event{t, s}; }

Event antigen_event(double t, std::string label, std::string process) {
  return Event{t, AntigenEvent{AntigenLabel(std::move(label)), std::move(process)}};
}

namespace {

bool valid_process_name(std::string_view p) {
  return !p.empty() && p.find_first_of("\t\r\n") == std::string_view::npos;
}

}  // namespace

std::string format_event(const Event& e) {
  std::string out = format_double(e.timestamp);
  if (e.is_signal()) {
    const auto& s = e.signals();
    out += "\tS";
    for (double v : {s.pamp, s.danger, s.safe, s.inflammation}) {
      out += '\t';
      out += format_double(v);
    }
  } else {
    const auto& a = e.antigen();
    if (!valid_process_name(a.process)) {
      throw std::invalid_argument("process name must be non-empty and tab-free");
    }
    out += "\tA\t";
    out += a.label.str();
    out += '\t';
    out += a.process;
  }
  return out;
}

Event parse_event(std::string_view line, std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto f = split(line, '\t');
  try {
    if (f.size() < 2) throw std::invalid_argument("missing event kind");
    const double t = parse_double(f[0]);
    if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("bad timestamp");
    if (f[1] == "S") {
      if (f.size() != 6) throw std::invalid_argument("signal event needs 4 values");
      SignalVector s{parse_double(f[2]), parse_double(f[3]), parse_double(f[4]),
                     parse_double(f[5])};
      if (!s.valid()) throw std::invalid_argument("signal values out of range");
      return signal_event(t, s);
    }
    if (f[1] == "A") {
      if (f.size() != 4) throw std::invalid_argument("antigen event needs label and process");
      if (!valid_process_name(f[3])) throw std::invalid_argument("empty process name");
      return antigen_event(t, std::string(f[2]), std::string(f[3]));
    }
    throw std::invalid_argument("unknown event kind '" + std::string(f[1]) + "'");
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
}

void write_log(std::ostream& os, const std::vector<Event>& events) {
  double last = -INFINITY;
  for (const auto& e : events) {
    if (e.timestamp < last) throw std::invalid_argument("event timestamps must not decrease");
    last = e.timestamp;
    os << format_event(e) << '\n';
  }
}

std::vector<Event> read_log(std::istream& is) {
  std::vector<Event> out;
  std::string line;
  std::size_t n = 0;
  double last = -INFINITY;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    Event e = parse_event(line, n);
    if (e.timestamp < last) throw ParseError(n, "timestamp decreases");
    last = e.timestamp;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Event> read_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open event log '" + path + "'");
  return read_log(in);
}

void write_log_file(const std::string& path, const std::vector<Event>& events) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write event log '" + path + "'");
  write_log(out, events);
}

}  // namespace dca
