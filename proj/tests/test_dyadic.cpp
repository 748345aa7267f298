#include <doctest.h>

#include <cmath>
#include <set>

#include "tentlab/dyadic.hpp"
#include "tentlab/fixtures.hpp"

using namespace tentlab;

namespace {

// 1-D oracle for the heat kernel bound with phi = 2 sqrt t, r = 2, n = 1:
// the ratio reduces to e^{-z^2} (1 + z^3) / sqrt(pi), maximal at z = 0.
double heatKernelBoundOracle() {
  double best = 0.0;
  for (int i = 0; i <= 400000; ++i) {
    const double z = i * 2.5e-5 * 8.0;
    best = std::max(best, std::exp(-z * z) * (1.0 + z * z * z) / std::sqrt(M_PI));
    if (z > 8.0) break;
  }
  return best;
}

}  // namespace

TEST_CASE("heat kernel bound: oracle value 1/sqrt(pi) and the grid maximum") {
  const double oracle = heatKernelBoundOracle();
  CHECK(oracle == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-9));

  const LineFixture fx = makeLine("HEAT", 512);
  const auto res = kernel_bound_check(fx, 1.0, 2.0, 1.0);
  CHECK(res.pass);
  CHECK(res.maxRatio == doctest::Approx(oracle).epsilon(1e-3));

  // scale invariance: t -> 4t with phi rescaled leaves the maximum unchanged
  const auto res4 = kernel_bound_check(fx, 4.0, 2.0, 1.0);
  CHECK(res4.maxRatio == doctest::Approx(res.maxRatio).epsilon(1e-2));

  CHECK_THROWS_AS((void)kernel_bound_check(fx, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("conditional expectation basics") {
  const LineFixture fx = LineFixture::make(16, 0.25, LineKernel::Heat);
  const DyadicFiltration E0 = DyadicFiltration::plain(16, 4, 0, true);

  // indicator of one atom is fixed
  VecC ind = VecC::Zero(16);
  for (int i = 4; i < 8; ++i) ind[i] = 1.0;
  const Element f = Element::fromVector(fx.ctx, ind);
  CHECK((E0.conditionalExpectation(f) - f).maxAbs() <= 1e-15);

  // linear ramp averages to the four cell means
  VecC ramp(16);
  for (int i = 0; i < 16; ++i) ramp[i] = (i + 0.5) / 16.0;
  const Element r = Element::fromVector(fx.ctx, ramp);
  const Element er = E0.conditionalExpectation(r);
  for (int a = 0; a < 4; ++a) {
    double mean = 0.0;
    for (int i = 4 * a; i < 4 * a + 4; ++i) mean += ramp[i].real() / 4.0;
    for (int i = 4 * a; i < 4 * a + 4; ++i) CHECK(er.vec()[i].real() == doctest::Approx(mean));
  }

  // idempotent, positive, trace preserving
  CHECK((E0.conditionalExpectation(er) - er).maxAbs() <= 1e-15);
  Rng rng(61);
  const Element x = randomPositive(fx.ctx, rng);
  CHECK(positivityValue(E0.conditionalExpectation(x)) >= -1e-15);
  CHECK(trace(E0.conditionalExpectation(x)).real() ==
        doctest::Approx(trace(x).real()).epsilon(1e-12));
}

TEST_CASE("point-mass nesting: E_k <= 4 E_{k-1} holds with equality generically") {
  const int n = 384;  // 24 * 16, exact 4-to-1 nesting for two refinements
  const LineFixture fx = LineFixture::make(n, 1.0 / 12.0, LineKernel::Heat);
  const DyadicFiltration fine = DyadicFiltration::plain(n, 24, 0, true);
  const DyadicFiltration coarse = DyadicFiltration::plain(n, 24, -1, true);
  const Element pm = Element::pointMass(fx.ctx, 100);
  const Element ef = fine.conditionalExpectation(pm);
  const Element ec = coarse.conditionalExpectation(pm);
  const Element diff = ec.scaled(4.0) - ef;
  CHECK(positivityValue(diff) >= -1e-12);
  // generic interior point: exact equality of the peak values
  CHECK(ec.vec()[100].real() * 4.0 == doctest::Approx(ef.vec()[100].real()).epsilon(1e-12));
}

TEST_CASE("filtration inequalities: sharp constants in the exact construction") {
  const LineFixture fx = makeLineFiltration(1536);
  Rng rng(62);
  const auto res = filtration_inequalities(fx, 1.0, 2.0, -8, 24, /*exact=*/true, rng);
  CHECK(res.worstA2 >= -1e-12);
  CHECK(res.worstA3 >= -1e-12);
  CHECK(std::isfinite(res.a4EmpiricalC));
  CHECK(res.a4EmpiricalC > 0.0);

  // vector-probe spot checks on a small exact configuration
  const int n = 384;
  const LineFixture small = LineFixture::make(n, 2.0 / 24.0, LineKernel::Heat);
  for (int lv = 0; lv >= -2; --lv) {
    const DyadicFiltration fine = DyadicFiltration::plain(n, 24, lv, true);
    const DyadicFiltration coarse = DyadicFiltration::plain(n, 24, lv - 1, true);
    const DyadicFiltration fineS = DyadicFiltration::shifted(n, 24, lv, true);
    for (int probe = 0; probe < 6; ++probe) {
      const Element f = randomPositive(small.ctx, rng);
      const Element a2 =
          coarse.conditionalExpectation(f).scaled(4.0) - fine.conditionalExpectation(f);
      CHECK(positivityValue(a2) >= -1e-12 * std::max(1.0, f.maxAbs()));
      const Element ek = fine.conditionalExpectation(f);
      const Element a3 = fineS.conditionalExpectation(ek).scaled(3.0) - ek;
      CHECK(positivityValue(a3) >= -1e-12 * std::max(1.0, f.maxAbs()));
    }
  }
}

TEST_CASE("every plain atom meets at most two shifted atoms per level") {
  const int n = 1536;
  for (int lv = 0; lv >= -3; --lv) {
    const DyadicFiltration P = DyadicFiltration::plain(n, 24, lv, true);
    const DyadicFiltration S = DyadicFiltration::shifted(n, 24, lv, true);
    std::map<int, std::set<int>> meets;
    for (int c = 0; c < n; ++c) meets[P.atomOf(c)].insert(S.atomOf(c));
    for (const auto& [atom, set] : meets) CHECK(set.size() <= 2);
  }
}

TEST_CASE("the domination constant is nonincreasing as r decreases to the tail") {
  // larger r shrinks the 4^{kr} weights, so the empirical constant grows
  const LineFixture fx = makeLineFiltration(1536);
  double prev = 0.0;
  for (double r : {1.5, 2.0, 3.0}) {
    Rng rng(63);
    const auto res = filtration_inequalities(fx, 1.0, r, -8, 24, true, rng);
    CHECK(res.a4EmpiricalC >= prev * (1.0 - 1e-9));
    prev = res.a4EmpiricalC;
  }
}

TEST_CASE("cyclic exact mode validates its divisibility requirements") {
  CHECK_THROWS_AS((void)DyadicFiltration::plain(1000, 24, 0, true), std::invalid_argument);
  CHECK_THROWS_AS((void)DyadicFiltration::shifted(384, 16, 0, true), std::invalid_argument);
  CHECK_NOTHROW((void)DyadicFiltration::plain(384, 16, 0, true));  // plain needs no thirds
  CHECK_NOTHROW((void)DyadicFiltration::plain(1000, 25, 0, false));  // clipped mode is lax
}

TEST_CASE("heavy-tailed control violates the kernel bound") {
  const LineFixture fx = makeLine("HEAVY", 256);
  const auto res = kernel_bound_check(fx, 1.0, 2.0, 1.0);
  CHECK_FALSE(res.pass);  // tail exponent 1/2 cannot satisfy r = 2
}

TEST_CASE("wrapped kernels are exactly unital and mu-symmetric") {
  const LineFixture fx = makeLine("HEAT", 128);
  for (double t : {0.05, 1.0, 20.0}) {
    const MatD M = fx.kernelMatrix(t);
    CHECK((M.rowwise().sum() - VecD::Ones(128)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(M.minCoeff() >= 0.0);
  }
}
