#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "tentlab/dyadic.hpp"
#include "tentlab/generator.hpp"
#include "tentlab/semigroup.hpp"

namespace tentlab {

// Named fixtures:
//   TP          two-point chain, L = [[-1,1],[1,-1]], uniform mass 1/2
//   CYC_N       N-cycle, L = A/2 - I, uniform mass 1/N
//   TORUS_N     Z/N with a Gaussian-derived Markov kernel, L = W - I
//   SM2, SM3    Schur-multiplier fixtures on M_2 / M_3
//   ID_2        identity semigroup (L = 0)
//   *_POISSON   the subordinated Poisson semigroup of the base fixture
//   LINE_HEAT_N / LINE_POISSON_N / LINE_HEAVY_N   discretized line kernels
struct FixtureHandle {
  std::string name;
  std::variant<Generator, LineFixture> payload;

  bool isGenerator() const { return std::holds_alternative<Generator>(payload); }
  const Generator& generator() const {
    if (!isGenerator()) throw std::invalid_argument("fixture " + name + " is not a generator");
    return std::get<Generator>(payload);
  }
  const LineFixture& line() const {
    if (isGenerator()) throw std::invalid_argument("fixture " + name + " is not a line fixture");
    return std::get<LineFixture>(payload);
  }
  ContextPtr context() const {
    return isGenerator() ? generator().context() : line().ctx;
  }
};

inline Generator makeTwoPoint() {
  auto ctx = AlgebraContext::commutative(VecD::Constant(2, 0.5));
  MatD L(2, 2);
  L << -1.0, 1.0, 1.0, -1.0;
  return Generator::markov(ctx, L);
}

inline Generator makeCycle(int n) {
  auto ctx = AlgebraContext::commutative(VecD::Constant(n, 1.0 / n));
  MatD L = MatD::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    L(i, (i + 1) % n) = 0.5;
    L(i, (i + n - 1) % n) = 0.5;
    L(i, i) = -1.0;
  }
  return Generator::markov(ctx, L);
}

// Row-normalized periodized Gaussian kernel W on Z/N; L = W - I.
inline Generator makeTorus(int n, double sigmaCells = 2.0) {
  auto ctx = AlgebraContext::commutative(VecD::Constant(n, 1.0 / n));
  MatD W(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double d = std::abs(i - j);
      d = std::min(d, n - d);
      W(i, j) = std::exp(-d * d / (2.0 * sigmaCells * sigmaCells));
    }
  for (int i = 0; i < n; ++i) W.row(i) /= W.row(i).sum();
  W = 0.5 * (W + MatD(W.transpose()));  // circulant, so this is a no-op up to rounding
  return Generator::markov(ctx, W - MatD::Identity(n, n));
}

inline Generator makeSchur2() {
  auto ctx = AlgebraContext::matrixAlgebra(2);
  MatD psi(2, 2);
  psi << 0.0, 1.0, 1.0, 0.0;
  return Generator::schur(ctx, psi);
}

// psi_ij = (a_i - a_j)^2, a = (0, 1, 2): a conditionally negative symbol.
inline Generator makeSchur3() {
  auto ctx = AlgebraContext::matrixAlgebra(3);
  const double a[3] = {0.0, 1.0, 2.0};
  MatD psi(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) psi(i, j) = (a[i] - a[j]) * (a[i] - a[j]);
  return Generator::schur(ctx, psi);
}

inline Generator makeIdentity(int n = 2) {
  auto ctx = AlgebraContext::commutative(VecD::Constant(n, 1.0 / n));
  return Generator::markov(ctx, MatD::Zero(n, n));
}

// Domain length 25.6 so kernels up to t ~ 10 stay well inside the wrap.
inline LineFixture makeLine(const std::string& kernelName, int n) {
  const double h = 25.6 / n;
  if (kernelName == "HEAT") return LineFixture::make(n, h, LineKernel::Heat);
  if (kernelName == "POISSON") return LineFixture::make(n, h, LineKernel::Poisson);
  if (kernelName == "HEAVY") return LineFixture::make(n, h, LineKernel::HeavyTail);
  throw std::invalid_argument("unknown line kernel " + kernelName);
}

// Filtration fixture: the block structure must nest exactly, so the cell
// count is n0 * 4^p with n0 = 24 cells per finest atom.
inline LineFixture makeLineFiltration(int n) {
  const double h = 2.0 / 24.0;  // finest atom spans phi(1) = 2 exactly
  return LineFixture::make(n, h, LineKernel::Heat);
}

inline FixtureHandle makeFixture(const std::string& name) {
  auto poissonOf = [](Generator g) { return g.subordinatedPoisson(); };
  const bool wantPoisson = name.size() > 8 && name.substr(name.size() - 8) == "_POISSON" &&
                           name.rfind("LINE_", 0) != 0;
  const std::string base = wantPoisson ? name.substr(0, name.size() - 8) : name;

  std::optional<Generator> gen;
  if (base == "TP") gen = makeTwoPoint();
  else if (base == "SM2") gen = makeSchur2();
  else if (base == "SM3") gen = makeSchur3();
  else if (base == "ID_2") gen = makeIdentity(2);
  else if (base.rfind("CYC_", 0) == 0) gen = makeCycle(std::stoi(base.substr(4)));
  else if (base.rfind("TORUS_", 0) == 0) gen = makeTorus(std::stoi(base.substr(6)));

  if (gen) return FixtureHandle{name, wantPoisson ? poissonOf(*gen) : *gen};

  if (name.rfind("LINE_FILT_", 0) == 0)
    return FixtureHandle{name, makeLineFiltration(std::stoi(name.substr(10)))};
  if (name.rfind("LINE_", 0) == 0) {
    const auto rest = name.substr(5);
    const auto us = rest.find('_');
    if (us == std::string::npos) throw std::invalid_argument("bad line fixture name " + name);
    return FixtureHandle{name, makeLine(rest.substr(0, us), std::stoi(rest.substr(us + 1)))};
  }
  throw std::invalid_argument("unknown fixture " + name);
}

inline std::vector<std::string> builtinFixtureNames() {
  return {"TP",       "TP_POISSON",       "CYC_8",   "CYC_8_POISSON", "CYC_16",
          "CYC_16_POISSON", "TORUS_16", "TORUS_16_POISSON", "SM2",   "SM2_POISSON",
          "SM3",      "ID_2",             "LINE_HEAT_1024", "LINE_HEAT_2048",
          "LINE_POISSON_1024", "LINE_HEAVY_1024", "LINE_FILT_1536", "LINE_FILT_3072"};
}

}  // namespace tentlab
