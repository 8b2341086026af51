#pragma once

// Scenario files use a flat grammar:
//
//   document := line*
//   line     := blank | comment | section | entry
//   comment  := '#' <anything to end of line>
//   section  := '[' name ']'
//   entry    := key '=' value [comment]
//   key      := [A-Za-z0-9_]+
//   name     := [A-Za-z0-9_-]+
//   value    := bare text without '#', or a "double-quoted" string
//
// Entries before the first section are top-level (name, kind, output).
// A document has a [system] section, exactly one task section
// ([spectrum], [branch-scan], [field-scan], [evolve], [deuteration]) and,
// for [spectrum] only, an optional [isotope] section.

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "zenospin/error.hpp"
#include "zenospin/liouville.hpp"
#include "zenospin/magnetics.hpp"
#include "zenospin/sensitivity.hpp"

namespace zenospin {

struct ConfigEntry {
  std::string value;
  int line = 0;
  int column = 0;  // column of the value
};

struct ConfigSection {
  std::string name;  // empty for the top level
  int line = 0;
  std::map<std::string, ConfigEntry> entries;
};

struct ConfigDocument {
  std::vector<ConfigSection> sections;  // [0] is the top level

  const ConfigSection* find(std::string_view name) const {
    for (const auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline bool is_key_char(char c, bool allow_dash) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         (allow_dash && c == '-');
}

}  // namespace detail

inline ConfigDocument parse_config(std::string_view text) {
  using detail::trim;
  ConfigDocument doc;
  doc.sections.push_back({});
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    const auto indent = raw.find_first_not_of(" \t\r");
    if (indent == std::string_view::npos || raw[indent] == '#') continue;
    const int col0 = static_cast<int>(indent) + 1;
    const std::string_view body = raw.substr(indent);

    if (body.front() == '[') {
      const auto close = body.find(']');
      if (close == std::string_view::npos) throw ParseError(line_no, col0, "unterminated section header");
      const std::string_view name = trim(body.substr(1, close - 1));
      if (name.empty()) throw ParseError(line_no, col0 + 1, "empty section name");
      for (std::size_t i = 0; i < name.size(); ++i)
        if (!detail::is_key_char(name[i], true))
          throw ParseError(line_no, col0 + 1, "invalid character in section name");
      const std::string_view rest = trim(body.substr(close + 1));
      if (!rest.empty() && rest.front() != '#')
        throw ParseError(line_no, col0 + static_cast<int>(close) + 1, "unexpected text after section header");
      if (doc.find(name) != nullptr)
        throw ParseError(line_no, col0, "duplicate section [" + std::string(name) + "]");
      doc.sections.push_back({std::string(name), line_no, {}});
      continue;
    }

    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, col0, "expected 'key = value'");
    const std::string_view key = trim(body.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, col0, "missing key before '='");
    for (char c : key)
      if (!detail::is_key_char(c, false))
        throw ParseError(line_no, col0, "invalid character in key '" + std::string(key) + "'");

    std::string_view value_part = body.substr(eq + 1);
    const auto value_start = value_part.find_first_not_of(" \t");
    const int value_col = col0 + static_cast<int>(eq) + 1 +
                          static_cast<int>(value_start == std::string_view::npos ? 0 : value_start);
    std::string value;
    if (value_start != std::string_view::npos && value_part[value_start] == '"') {
      const auto close = value_part.find('"', value_start + 1);
      if (close == std::string_view::npos) throw ParseError(line_no, value_col, "unterminated string");
      value = std::string(value_part.substr(value_start + 1, close - value_start - 1));
      const std::string_view rest = trim(value_part.substr(close + 1));
      if (!rest.empty() && rest.front() != '#')
        throw ParseError(line_no, value_col, "unexpected text after string");
    } else {
      const auto hash = value_part.find('#');
      value = std::string(trim(value_part.substr(0, hash)));
      if (value.empty()) throw ParseError(line_no, value_col, "missing value for '" + std::string(key) + "'");
    }

    auto& section = doc.sections.back();
    if (section.entries.contains(std::string(key)))
      throw ParseError(line_no, col0, "duplicate key '" + std::string(key) + "'");
    section.entries.emplace(std::string(key), ConfigEntry{std::move(value), line_no, value_col});
  }
  return doc;
}

enum class Task { spectrum, branch_scan, field_scan, evolve, deuteration };

inline std::string_view to_string(Task t) {
  switch (t) {
    case Task::spectrum: return "spectrum";
    case Task::branch_scan: return "branch-scan";
    case Task::field_scan: return "field-scan";
    case Task::evolve: return "evolve";
    case Task::deuteration: return "deuteration";
  }
  return "?";
}

enum class Spacing { linear, log };

/// Grid axis units. Which ones a task accepts is checked at parse time.
enum class GridUnits {
  omega,          // multiples of the Larmor frequency (branch-scan)
  absolute,       // us^-1 or us
  gauss,          // magnetic field (field-scan, deuteration)
  inverse_omega,  // time in units of 1/omega (evolve)
};

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  Spacing spacing = Spacing::linear;

  std::vector<double> values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
      v[0] = start;
      return v;
    }
    for (int i = 0; i < count; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(count - 1);
      v[static_cast<std::size_t>(i)] =
          spacing == Spacing::linear
              ? start + (stop - start) * f
              : std::exp(std::log(start) + (std::log(stop) - std::log(start)) * f);
    }
    v.front() = start;
    v.back() = stop;
    return v;
  }
};

struct DeuterationSettings {
  double a_pyrene = 0.0;
  double a_dma = 0.0;
  double deuterium_scale = kDeuteriumCouplingScale;
};

struct Scenario {
  std::string name;
  std::string output;  // path prefix
  LiouvillianKind kind = LiouvillianKind::quantum;
  Task task = Task::spectrum;
  SpinSystem system;  // omega, kS, kT resolved where the task fixes them
  std::optional<double> field_gauss;
  double kT_ratio = 0.2;
  std::optional<double> kT;  // absolute kT when given instead of the ratio
  GridSpec grid;
  GridUnits units = GridUnits::absolute;
  std::optional<IsotopeSubstitution> isotope;
  DeuterationSettings deuteration;
};

namespace detail {

class SectionReader {
 public:
  SectionReader(const ConfigSection* section, std::string label)
      : section_(section), label_(std::move(label)) {}

  bool has(const std::string& key) const {
    return section_ != nullptr && section_->entries.contains(key);
  }

  std::optional<std::string> text(const std::string& key) {
    used_.insert(key);
    if (!has(key)) return std::nullopt;
    return section_->entries.at(key).value;
  }

  std::optional<double> number(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    double v = 0.0;
    auto r = std::from_chars(t->data(), t->data() + t->size(), v);
    if (r.ec != std::errc{} || r.ptr != t->data() + t->size() || !std::isfinite(v))
      throw fail(key, "expected a finite number, got '" + *t + "'");
    return v;
  }

  std::optional<int> integer(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    int v = 0;
    auto r = std::from_chars(t->data(), t->data() + t->size(), v);
    if (r.ec != std::errc{} || r.ptr != t->data() + t->size())
      throw fail(key, "expected an integer, got '" + *t + "'");
    return v;
  }

  std::optional<Spin> spin(const std::string& key) {
    auto t = text(key);
    if (!t) return std::nullopt;
    try {
      return Spin::parse(*t);
    } catch (const InvalidArgument& e) {
      throw fail(key, e.what());
    }
  }

  double required_number(const std::string& key) {
    auto v = number(key);
    if (!v) throw fail(key, "required");
    return *v;
  }

  void forbid(const std::string& key, const std::string& why) {
    if (has(key)) throw fail(key, why);
  }

  /// Rejects any key that was never read.
  void finish() const {
    if (section_ == nullptr) return;
    for (const auto& [key, entry] : section_->entries)
      if (!used_.contains(key))
        throw InvalidArgument("validation error: " + qualified(key) + " (line " +
                              std::to_string(entry.line) + "): unknown key");
  }

  InvalidArgument fail(const std::string& key, const std::string& what) const {
    std::string where = qualified(key);
    if (has(key)) where += " (line " + std::to_string(section_->entries.at(key).line) + ")";
    return InvalidArgument("validation error: " + where + ": " + what);
  }

 private:
  std::string qualified(const std::string& key) const {
    return label_.empty() ? key : label_ + "." + key;
  }

  const ConfigSection* section_;
  std::string label_;
  std::set<std::string> used_;
};

inline GridSpec read_grid(SectionReader& r, bool allow_log) {
  GridSpec g;
  g.start = r.required_number("start");
  g.stop = r.required_number("stop");
  const auto count = r.integer("count");
  if (!count) throw r.fail("count", "required");
  if (*count < 1) throw r.fail("count", "must be >= 1");
  g.count = *count;
  if (auto sp = r.text("spacing")) {
    if (*sp == "linear") g.spacing = Spacing::linear;
    else if (*sp == "log" && allow_log) g.spacing = Spacing::log;
    else throw r.fail("spacing", "expected 'linear'" + std::string(allow_log ? " or 'log'" : ""));
  }
  if (g.count > 1 && !(g.stop > g.start)) throw r.fail("stop", "must exceed start");
  if (g.spacing == Spacing::log && !(g.start > 0.0)) throw r.fail("start", "log spacing needs start > 0");
  return g;
}

}  // namespace detail

inline Scenario parse_scenario(std::string_view text) {
  using detail::SectionReader;
  const ConfigDocument doc = parse_config(text);

  static const std::map<std::string, Task, std::less<>> task_names{
      {"spectrum", Task::spectrum},
      {"branch-scan", Task::branch_scan},
      {"field-scan", Task::field_scan},
      {"evolve", Task::evolve},
      {"deuteration", Task::deuteration},
  };
  const ConfigSection* task_section = nullptr;
  Scenario s;
  for (const auto& sec : doc.sections) {
    if (sec.name.empty() || sec.name == "system" || sec.name == "isotope") continue;
    auto it = task_names.find(sec.name);
    if (it == task_names.end())
      throw InvalidArgument("validation error: unknown section [" + sec.name + "] (line " +
                            std::to_string(sec.line) + ")");
    if (task_section != nullptr)
      throw InvalidArgument("validation error: more than one task section ([" + task_section->name +
                            "] and [" + sec.name + "])");
    task_section = &sec;
    s.task = it->second;
  }
  if (task_section == nullptr) throw InvalidArgument("validation error: no task section");

  SectionReader top(doc.find(""), "");
  auto name = top.text("name");
  if (!name || name->empty()) throw top.fail("name", "required");
  s.name = *name;
  s.output = top.text("output").value_or(s.name);
  if (auto kind = top.text("kind")) {
    if (*kind == "quantum") s.kind = LiouvillianKind::quantum;
    else if (*kind == "classical") s.kind = LiouvillianKind::classical;
    else throw top.fail("kind", "expected 'quantum' or 'classical'");
  }
  top.finish();

  const ConfigSection* system_section = doc.find("system");
  if (system_section == nullptr) throw InvalidArgument("validation error: missing [system] section");
  SectionReader sys(system_section, "system");
  SectionReader task(task_section, task_section->name);

  // Which system keys each task fixes itself.
  const bool needs_field = s.task == Task::spectrum || s.task == Task::evolve;
  const bool needs_kS = s.task != Task::branch_scan;
  const bool needs_nuclei = s.task != Task::deuteration;

  if (needs_nuclei) {
    s.system.I1 = sys.spin("I1").value_or(kSpinHalf);
    s.system.I2 = sys.spin("I2").value_or(kSpinHalf);
    s.system.a1 = sys.number("a1").value_or(0.0);
    s.system.a2 = sys.number("a2").value_or(0.0);
  } else {
    for (const char* k : {"I1", "I2", "a1", "a2"})
      sys.forbid(k, "set per pair in [deuteration]");
  }

  if (sys.has("omega") && sys.has("B_gauss"))
    throw sys.fail("B_gauss", "omega and B_gauss are mutually exclusive");
  if (s.task == Task::field_scan || s.task == Task::deuteration) {
    sys.forbid("omega", "the field is set by the scan grid");
    sys.forbid("B_gauss", "the field is set by the scan grid");
  } else if (auto b = sys.number("B_gauss")) {
    s.field_gauss = *b;
    try {
      s.system.omega = larmor_frequency(*b);
    } catch (const InvalidArgument& e) {
      throw sys.fail("B_gauss", e.what());
    }
  } else if (auto w = sys.number("omega")) {
    s.system.omega = *w;
  }
  const bool have_field = sys.has("omega") || sys.has("B_gauss");
  if ((needs_field || s.task == Task::branch_scan) && !have_field) throw sys.fail("omega", "required");
  if (have_field && !(s.system.omega > 0.0))
    throw sys.fail(sys.has("omega") ? "omega" : "B_gauss", "must be > 0");

  if (sys.has("kT") && sys.has("kT_ratio"))
    throw sys.fail("kT_ratio", "kT and kT_ratio are mutually exclusive");
  if (needs_kS) {
    s.system.kS = sys.required_number("kS");
    if (s.system.kS < 0.0) throw sys.fail("kS", "must be >= 0");
  } else {
    sys.forbid("kS", "the recombination rate is set by the scan grid");
    sys.forbid("kT", "use kT_ratio; kT follows the kS grid");
  }
  if (auto kt = sys.number("kT")) {
    if (*kt < 0.0) throw sys.fail("kT", "must be >= 0");
    s.kT = *kt;
    s.system.kT = *kt;
  } else {
    s.kT_ratio = sys.number("kT_ratio").value_or(0.2);
    if (s.kT_ratio < 0.0) throw sys.fail("kT_ratio", "must be >= 0");
    s.system.kT = s.kT_ratio * s.system.kS;
  }
  sys.finish();

  switch (s.task) {
    case Task::spectrum:
      break;
    case Task::branch_scan: {
      s.grid = detail::read_grid(task, true);
      const auto units = task.text("units").value_or("omega");
      if (units == "omega") s.units = GridUnits::omega;
      else if (units == "absolute") s.units = GridUnits::absolute;
      else throw task.fail("units", "expected 'omega' or 'absolute'");
      if (!(s.grid.start > 0.0)) throw task.fail("start", "kS grid must be > 0");
      break;
    }
    case Task::field_scan:
    case Task::deuteration: {
      s.grid = detail::read_grid(task, true);
      const auto fallback = s.task == Task::deuteration ? "gauss" : "absolute";
      const auto units = task.text("units").value_or(fallback);
      if (units == "gauss") s.units = GridUnits::gauss;
      else if (units == "absolute" && s.task == Task::field_scan) s.units = GridUnits::absolute;
      else throw task.fail("units", s.task == Task::deuteration ? "expected 'gauss'"
                                                                : "expected 'absolute' or 'gauss'");
      if (!(s.grid.start > 0.0)) throw task.fail("start", "field grid must be > 0");
      if (s.task == Task::deuteration) {
        s.deuteration.a_pyrene = task.required_number("a_pyrene");
        s.deuteration.a_dma = task.required_number("a_dma");
        s.deuteration.deuterium_scale = task.number("deuterium_scale").value_or(kDeuteriumCouplingScale);
        if (!(s.deuteration.deuterium_scale > 0.0)) throw task.fail("deuterium_scale", "must be > 0");
      }
      break;
    }
    case Task::evolve: {
      s.grid.start = 0.0;
      s.grid.stop = task.required_number("t_stop");
      const auto count = task.integer("count");
      if (!count) throw task.fail("count", "required");
      if (*count < 2) throw task.fail("count", "must be >= 2");
      s.grid.count = *count;
      if (!(s.grid.stop > 0.0)) throw task.fail("t_stop", "must be > 0");
      const auto units = task.text("units").value_or("absolute");
      if (units == "absolute") s.units = GridUnits::absolute;
      else if (units == "inverse_omega") s.units = GridUnits::inverse_omega;
      else throw task.fail("units", "expected 'absolute' or 'inverse_omega'");
      break;
    }
  }
  task.finish();

  if (const ConfigSection* iso = doc.find("isotope")) {
    SectionReader r(iso, "isotope");
    if (s.task != Task::spectrum) throw r.fail("nucleus", "[isotope] is only valid with [spectrum]");
    IsotopeSubstitution sub;
    const auto nucleus = r.integer("nucleus");
    if (!nucleus) throw r.fail("nucleus", "required");
    if (*nucleus != 1 && *nucleus != 2) throw r.fail("nucleus", "must be 1 or 2");
    sub.nucleus = *nucleus;
    sub.spin_after = r.spin("spin").value_or(Spin::from_twice(2));
    sub.coupling_scale = r.number("coupling_scale").value_or(kDeuteriumCouplingScale);
    if (!(sub.coupling_scale > 0.0)) throw r.fail("coupling_scale", "must be > 0");
    r.finish();
    s.isotope = sub;
  }
  return s;
}

}  // namespace zenospin
