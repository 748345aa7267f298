#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace tentlab {

// How a check's constant is judged:
//   ExactConstant       -- the bound's constant is pinned; any violation fails.
//   RecordEmpirical     -- the constant is measured and must stay within a budget.
//   UniformityAcrossSweep -- the measured constants must be uniform over a sweep.
enum class ConstantPolicy { ExactConstant, RecordEmpirical, UniformityAcrossSweep };

// One inequality check outcome.  ratio is lhs/rhs when both are meaningful;
// witness-style checks put the witness in lhs and the tolerance in rhs.
struct CheckReport {
  std::string checkId;
  std::string fixture;
  std::string sweepKey;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double budget = 0.0;
  bool pass = true;
  bool errored = false;
  std::uint64_t seed = 0;
  std::string notes;
};

inline CheckReport makeReport(std::string id, std::string fixture, std::string sweep, double lhs,
                              double rhs, double budget, bool pass, std::uint64_t seed = 0,
                              std::string notes = {}) {
  CheckReport r;
  r.checkId = std::move(id);
  r.fixture = std::move(fixture);
  r.sweepKey = std::move(sweep);
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = (rhs != 0.0) ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  r.budget = budget;
  r.pass = pass;
  r.seed = seed;
  r.notes = std::move(notes);
  return r;
}

}  // namespace tentlab
