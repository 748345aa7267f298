// tentlab command line: validate and run scenario configs, list the check
// registry and the fixture catalog.
//
// Exit codes: 0 all checks pass, 1 an exact-constant check failed,
// 2 configuration error, 3 numerical error under --strict.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tentlab/tentlab.hpp"

namespace {

std::string readFile(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw tentlab::ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int threadCountFromEnv() {
  const char* env = std::getenv("TENTLAB_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tentlab: numerical checks for semigroup tent spaces and H1-BMO duality"};
  app.require_subcommand(1);

  std::string configPath;
  std::string outDir;
  std::string format;
  std::uint64_t seed = 0;
  bool seedSet = false, strict = false;

  auto* validate = app.add_subcommand("validate", "parse and resolve a scenario config");
  validate->add_option("config", configPath, "scenario config file")->required();

  auto* run = app.add_subcommand("run", "execute a scenario and emit reports");
  run->add_option("config", configPath, "scenario config file")->required();
  run->add_option("--seed", seed, "override the scenario seed")->each([&](const std::string&) {
    seedSet = true;
  });
  run->add_option("--out", outDir, "output directory");
  run->add_option("--format", format, "csv | jsonl | both");
  run->add_flag("--strict", strict, "exit 3 on numerical errors inside checks");

  auto* listChecks = app.add_subcommand("list-checks", "print the check family registry");
  auto* listFixtures = app.add_subcommand("list-fixtures", "print the fixture catalog");

  CLI11_PARSE(app, argc, argv);

  try {
    if (listChecks->parsed()) {
      for (const auto& f : tentlab::checkFamilies()) {
        const char* pol = f.policy == tentlab::ConstantPolicy::ExactConstant ? "exact"
                          : f.policy == tentlab::ConstantPolicy::RecordEmpirical
                              ? "empirical"
                              : "uniformity";
        std::cout << f.id << "  [" << pol << "]  " << f.reference << "\n";
      }
      return 0;
    }
    if (listFixtures->parsed()) {
      for (const auto& name : tentlab::builtinFixtureNames()) std::cout << name << "\n";
      std::cout << "(CYC_N, TORUS_N, LINE_{HEAT|POISSON|HEAVY}_N, LINE_FILT_N and *_POISSON "
                   "resolve for other sizes)\n";
      return 0;
    }

    tentlab::ScenarioConfig cfg = tentlab::parseConfig(readFile(configPath));
    if (seedSet) cfg.seed = seed;
    if (!outDir.empty()) cfg.outDir = outDir;
    if (!format.empty()) cfg.format = format;
    cfg.strict = cfg.strict || strict;

    if (validate->parsed()) {
      tentlab::validateConfig(cfg);
      std::cout << "config ok: " << cfg.checks.size() << " checks, " << cfg.fixtures.size()
                << " fixtures, " << cfg.grids.size() << " grids\n";
      return 0;
    }

    (void)threadCountFromEnv();  // checks run sequentially for bit-stable reports
    const tentlab::ScenarioResult result = tentlab::run_scenario(cfg);
    tentlab::emit_reports(result, cfg);
    std::cout << "checks: " << result.passCount << " passed, " << result.failCount
              << " failed, " << result.erroredCount << " errored; reports in " << cfg.outDir
              << "\n";
    return result.exitCode;
  } catch (const tentlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
