#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tentlab/config.hpp"
#include "tentlab/registry.hpp"

namespace tentlab {

struct ScenarioResult {
  std::vector<CheckReport> reports;
  int exitCode = 0;  // 0 pass, 1 exact-check failure, 2 config error, 3 numerical error (strict)
  int passCount = 0, failCount = 0, erroredCount = 0;
};

// Validate that every referenced fixture, grid and family resolves; throws
// ConfigError before any check executes.
inline void validateConfig(const ScenarioConfig& cfg) {
  for (const auto& g : cfg.grids) TimeGrid::geometric(g.lo, g.hi, g.nodes);
  for (const auto& f : cfg.fixtures) {
    try {
      makeFixture(f.name);
    } catch (const std::exception& e) {
      throw ConfigError("fixture " + f.id + ": " + e.what());
    }
  }
  for (const auto& c : cfg.checks) {
    if (!findFamily(c.family)) throw ConfigError("check " + c.id + ": unknown family " + c.family);
    if (!c.fixture.empty()) {
      bool declared = false;
      for (const auto& f : cfg.fixtures) declared = declared || f.id == c.fixture;
      if (!declared) {
        try {
          makeFixture(c.fixture);  // builtin names resolve implicitly
        } catch (const std::exception&) {
          throw ConfigError("check " + c.id + ": unresolved fixture " + c.fixture);
        }
      }
    }
    if (!c.grid.empty() && c.grid != "default") {
      bool declared = false;
      for (const auto& g : cfg.grids) declared = declared || g.id == c.grid;
      if (!declared) throw ConfigError("check " + c.id + ": unresolved grid " + c.grid);
    }
  }
}

inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  validateConfig(cfg);
  RunContext ctx;
  ctx.seed = cfg.seed;
  ctx.grids.emplace("default", TimeGrid::geometric(1e-3, 1e3, 96));
  for (const auto& g : cfg.grids) ctx.grids.emplace(g.id, TimeGrid::geometric(g.lo, g.hi, g.nodes));
  for (const auto& f : cfg.fixtures) ctx.fixtures.emplace(f.id, makeFixture(f.name));

  ScenarioResult result;
  for (const auto& spec : cfg.checks) {
    CheckSpecCfg resolved = spec;
    if (resolved.grid.empty()) resolved.grid = "default";
    const CheckFamily* family = findFamily(resolved.family);
    std::vector<CheckReport> reports;
    try {
      reports = family->run(ctx, resolved);
    } catch (const std::exception& e) {
      CheckReport r = makeReport(resolved.id, resolved.fixture, "errored", 0, 0, 0, false,
                                 cfg.seed, e.what());
      r.errored = true;
      reports.push_back(r);
    }
    for (auto& r : reports) {
      r.seed = cfg.seed;
      if (r.errored) {
        ++result.erroredCount;
        if (cfg.strict) result.exitCode = std::max(result.exitCode, 3);
        continue;
      }
      if (r.pass) {
        ++result.passCount;
      } else {
        ++result.failCount;
        if (family->policy == ConstantPolicy::ExactConstant) result.exitCode = std::max(result.exitCode, 1);
      }
    }
    result.reports.insert(result.reports.end(), reports.begin(), reports.end());
  }
  std::sort(result.reports.begin(), result.reports.end(),
            [](const CheckReport& a, const CheckReport& b) {
              if (a.checkId != b.checkId) return a.checkId < b.checkId;
              if (a.fixture != b.fixture) return a.fixture < b.fixture;
              return a.sweepKey < b.sweepKey;
            });
  return result;
}

inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline void emit_csv(const std::vector<CheckReport>& reports, std::ostream& os) {
  os << "checkId,fixture,sweepKey,lhs,rhs,ratio,budget,pass,seed\n";
  for (const auto& r : reports) {
    os << r.checkId << ',' << r.fixture << ',' << r.sweepKey << ',' << fmt12(r.lhs) << ','
       << fmt12(r.rhs) << ',' << fmt12(r.ratio) << ',' << fmt12(r.budget) << ','
       << (r.pass ? "true" : "false") << ',' << r.seed << '\n';
  }
}

inline void emit_jsonl(const std::vector<CheckReport>& reports, std::ostream& os) {
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["checkId"] = r.checkId;
    j["fixture"] = r.fixture;
    j["sweepKey"] = r.sweepKey;
    j["lhs"] = fmt12(r.lhs);
    j["rhs"] = fmt12(r.rhs);
    j["ratio"] = fmt12(r.ratio);
    j["budget"] = fmt12(r.budget);
    j["pass"] = r.pass;
    j["errored"] = r.errored;
    j["seed"] = r.seed;
    j["notes"] = r.notes;
    os << j.dump() << '\n';
  }
}

inline void emit_reports(const ScenarioResult& result, const ScenarioConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.outDir);
  if (cfg.format == "csv" || cfg.format == "both") {
    std::ofstream os(fs::path(cfg.outDir) / "reports.csv", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + cfg.outDir + "/reports.csv");
    emit_csv(result.reports, os);
  }
  if (cfg.format == "jsonl" || cfg.format == "both") {
    std::ofstream os(fs::path(cfg.outDir) / "reports.jsonl", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + cfg.outDir + "/reports.jsonl");
    emit_jsonl(result.reports, os);
  }
}

}  // namespace tentlab
