#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tentlab {

// Scenario configs are plain sectioned key-value text:
//
//   # comment
//   [scenario]
//   seed = 12345
//   out = out
//   format = csv          # csv | jsonl | both
//
//   [grid]
//   id = main
//   lo = 1e-3
//   hi = 1e3
//   nodes = 96
//
//   [fixture]
//   id = TP               # catalog name; `name = ...` overrides the catalog key
//
//   [check]
//   id = TP-axioms
//   family = semigroup-axioms
//   fixture = TP
//   grid = main
//   samples = 200         # family-specific parameters are free-form keys
//
// Blocks may repeat; ids must be unique per block type.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  std::string id;
  double lo = 1e-3, hi = 1e3;
  int nodes = 96;
};

struct FixtureSpec {
  std::string id;
  std::string name;  // catalog name (defaults to id)
};

struct CheckSpecCfg {
  std::string id;
  std::string family;
  std::string fixture;
  std::string grid;
  std::map<std::string, std::string> params;

  double paramD(const std::string& key, double dflt) const {
    auto it = params.find(key);
    return it == params.end() ? dflt : std::stod(it->second);
  }
  long paramI(const std::string& key, long dflt) const {
    auto it = params.find(key);
    return it == params.end() ? dflt : std::stol(it->second);
  }
  std::string paramS(const std::string& key, const std::string& dflt) const {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  }
};

struct ScenarioConfig {
  std::uint64_t seed = 12345;
  std::string outDir = "out";
  std::string format = "csv";
  bool strict = false;
  std::vector<GridSpec> grids;
  std::vector<FixtureSpec> fixtures;
  std::vector<CheckSpecCfg> checks;
};

namespace detail {
inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace detail

inline ScenarioConfig parseConfig(const std::string& text) {
  ScenarioConfig cfg;
  std::string section;
  GridSpec grid;
  FixtureSpec fixture;
  CheckSpecCfg check;
  bool haveGrid = false, haveFixture = false, haveCheck = false;

  auto flush = [&]() {
    if (haveGrid) {
      if (grid.id.empty()) throw ConfigError("grid block without id");
      cfg.grids.push_back(grid);
    }
    if (haveFixture) {
      if (fixture.id.empty()) throw ConfigError("fixture block without id");
      if (fixture.name.empty()) fixture.name = fixture.id;
      cfg.fixtures.push_back(fixture);
    }
    if (haveCheck) {
      if (check.id.empty() || check.family.empty())
        throw ConfigError("check block needs id and family");
      cfg.checks.push_back(check);
    }
    grid = GridSpec{};
    fixture = FixtureSpec{};
    check = CheckSpecCfg{};
    haveGrid = haveFixture = haveCheck = false;
  };

  size_t pos = 0;
  int lineNo = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("bad section header at line " + std::to_string(lineNo));
      flush();
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section == "grid") haveGrid = true;
      else if (section == "fixture") haveFixture = true;
      else if (section == "check") haveCheck = true;
      else if (section != "scenario")
        throw ConfigError("unknown section [" + section + "] at line " + std::to_string(lineNo));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineNo));
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    try {
      if (section == "scenario") {
        if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "out") cfg.outDir = val;
        else if (key == "format") cfg.format = val;
        else if (key == "strict") cfg.strict = (val == "1" || val == "true");
        else throw ConfigError("unknown scenario key " + key);
      } else if (section == "grid") {
        if (key == "id") grid.id = val;
        else if (key == "lo") grid.lo = std::stod(val);
        else if (key == "hi") grid.hi = std::stod(val);
        else if (key == "nodes") grid.nodes = std::stoi(val);
        else throw ConfigError("unknown grid key " + key);
      } else if (section == "fixture") {
        if (key == "id") fixture.id = val;
        else if (key == "name") fixture.name = val;
        else throw ConfigError("unknown fixture key " + key);
      } else if (section == "check") {
        if (key == "id") check.id = val;
        else if (key == "family") check.family = val;
        else if (key == "fixture") check.fixture = val;
        else if (key == "grid") check.grid = val;
        else check.params[key] = val;
      } else {
        throw ConfigError("key outside any section at line " + std::to_string(lineNo));
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad value for " + key + " at line " + std::to_string(lineNo));
    } catch (const std::out_of_range&) {
      throw ConfigError("value out of range for " + key + " at line " + std::to_string(lineNo));
    }
  }
  flush();

  for (size_t i = 0; i < cfg.checks.size(); ++i)
    for (size_t j = i + 1; j < cfg.checks.size(); ++j)
      if (cfg.checks[i].id == cfg.checks[j].id)
        throw ConfigError("duplicate check id " + cfg.checks[i].id);
  return cfg;
}

}  // namespace tentlab
