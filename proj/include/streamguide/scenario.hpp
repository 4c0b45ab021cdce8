#ifndef STREAMGUIDE_SCENARIO_HPP
#define STREAMGUIDE_SCENARIO_HPP

#include <string>
#include <vector>

#include "streamguide/simulator.hpp"

namespace streamguide {

/// Parse failure with the location inside the source text. `line` and
/// `column` are 1-based; both are 0 for semantic errors, which name the
/// offending key path instead.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, int line, int column)
      : ConfigError(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Reads a scenario document. Sections grid, target, vessel and obstacles are
/// required; planner, path, controller and sim fall back to the defaults.
/// Unknown keys are rejected.
Scenario parse_scenario(const std::string& text);

/// Inverse of parse_scenario; parse_scenario(serialize_scenario(s)) == s for
/// scenarios with diagonal gain matrices.
std::string serialize_scenario(const Scenario& sc);

Scenario load_scenario_file(const std::string& path);

/// The six bundled case studies.
const std::vector<Scenario>& builtin_scenarios();

/// Looks up a bundled case by name. Returns nullptr when unknown.
const Scenario* find_builtin(const std::string& name);

}  // namespace streamguide

#endif  // STREAMGUIDE_SCENARIO_HPP
