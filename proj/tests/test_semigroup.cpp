#include <doctest.h>

#include <cmath>

#include "tentlab/fixtures.hpp"
#include "tentlab/semigroup.hpp"

using namespace tentlab;

namespace {

// Oracle for the two-point heat index: the least alpha with y^a T_y rising is
// sup_y 2 y e^{-2y} / (1 + e^{-2y}); its critical point solves e^u (u-1) = 1
// in u = 2y, giving alpha* = u* - 1.
double tpHeatAlphaRootOracle() {
  double lo = 1.0, hi = 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::exp(mid) * (mid - 1.0) - 1.0 < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) - 1.0;
}

double tpHeatAlphaScanOracle() {
  double best = 0.0;
  for (int i = 0; i <= 2000000; ++i) {
    const double y = 1e-4 + i * 1e-5 * 2.5;
    if (y > 25.0) break;
    best = std::max(best, 2.0 * y * std::exp(-2.0 * y) / (1.0 + std::exp(-2.0 * y)));
  }
  return best;
}

Element phiOf(const Generator& gen) {
  Element phi = gen.eigenElement(0);  // eigenvalues ascend, so index 0 is -2
  if (phi.vec()[0].real() < 0) phi = phi.scaled(-1.0);
  return phi;
}

}  // namespace

TEST_CASE("two-point kernel matches the closed form 1/2 (1 +- e^{-2t})") {
  const Generator tp = makeTwoPoint();
  const SemigroupOperator T = tp.at(1.0);
  const double a = std::exp(-2.0);
  CHECK(T.data(0, 0) == doctest::Approx(0.5 * (1 + a)).epsilon(1e-12));
  CHECK(T.data(0, 1) == doctest::Approx(0.5 * (1 - a)).epsilon(1e-12));
  CHECK(T.data(0, 0) == doctest::Approx(0.567668).epsilon(1e-6));

  const SemigroupOperator I = tp.at(0.0);
  CHECK((I.data - MatD::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK_THROWS_AS((void)tp.at(-1.0), std::invalid_argument);
}

TEST_CASE("Schur fixture symbol is the entrywise exponential") {
  const Generator sm = makeSchur2();
  const SemigroupOperator T = sm.at(1.0);
  CHECK(T.data(0, 0) == doctest::Approx(1.0));
  CHECK(T.data(0, 1) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("apply: eigenvector decay, fixed constants, Schur action") {
  const Generator tp = makeTwoPoint();
  const Element phi = phiOf(tp);
  const Element y = tp.apply(1.0, phi);
  CHECK(y.vec()[0].real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(y.vec()[1].real() == doctest::Approx(-std::exp(-2.0)).epsilon(1e-12));

  const Element ones = Element::one(tp.context());
  CHECK((tp.apply(3.7, ones) - ones).maxAbs() < 1e-13);

  const Generator sm = makeSchur2();
  MatC x = MatC::Zero(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  const Element out = sm.apply(1.0, Element::fromMatrix(sm.context(), x));
  CHECK(out.mat()(0, 1).real() == doctest::Approx(std::exp(-1.0)));
  CHECK(out.mat()(0, 0).real() == doctest::Approx(0.0));
}

TEST_CASE("spectral time derivatives: eigenvalue calculus and FD agreement") {
  const Generator tp = makeTwoPoint();
  const Element phi = phiOf(tp);
  const Element d1 = tp.applyDerivative(1.0, phi);
  CHECK(d1.vec()[0].real() == doctest::Approx(-2.0 * std::exp(-2.0)).epsilon(1e-12));
  const Element d2 = tp.applyDerivative(0.5, phi, 2);
  CHECK(d2.vec()[0].real() == doctest::Approx(4.0 * std::exp(-1.0)).epsilon(1e-12));

  const Element ones = Element::one(tp.context());
  CHECK(tp.applyDerivative(0.3, ones).maxAbs() < 1e-13);

  Rng rng(3);
  for (const char* name : {"TP", "CYC_8", "TORUS_16", "SM2"}) {
    const Generator gen = makeFixture(name).generator();
    for (int i = 0; i < 5; ++i) {
      const Element x = randomElement(gen.context(), rng);
      for (double t : {0.3, 1.0, 4.0}) {
        CHECK(derivativeFdRelError(gen, t, x, 1) <= 1e-6);
        CHECK(derivativeFdRelError(gen, t, x, 2) <= 1e-6);
      }
    }
  }
}

TEST_CASE("Kadison-Schwarz witnesses") {
  const Generator tp = makeTwoPoint();
  const Element phi = phiOf(tp);
  const auto rep = check_kadison_schwarz(tp.at(1.0), phi);
  // T(phi^2) = 1, |T phi|^2 = e^{-4}: the defect is (1 - e^{-4}) at both atoms
  CHECK(rep.lhs == doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-9));
  CHECK(rep.lhs == doctest::Approx(0.981684).epsilon(1e-5));
  CHECK(rep.pass);

  const auto repOne = check_kadison_schwarz(tp.at(2.0), Element::one(tp.context()));
  CHECK(std::abs(repOne.lhs) < 1e-13);

  const Generator sm = makeSchur2();
  MatC x = MatC::Zero(2, 2);
  x(0, 1) = 1.0;  // |x|^2 = diag(0,1) is fixed; |Tx|^2 = e^{-2} diag(0,1)
  const Element xe = Element::fromMatrix(sm.context(), x);
  const Element diff = sm.at(1.0).apply(xe.modulusSquared()) - sm.at(1.0).apply(xe).modulusSquared();
  CHECK(diff.mat()(0, 0).real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(diff.mat()(1, 1).real() == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  CHECK(positivityValue(diff) >= -1e-12);
}

TEST_CASE("operator order: reflexive, Poisson ordering, Schur counterexample") {
  const Generator tp = makeTwoPoint();
  const auto same = operatorOrder(tp.at(0.7), tp.at(0.7));
  CHECK(same.positive);
  CHECK(std::abs(same.witness) < 1e-14);

  // subordinated Poisson is quasi-decreasing with alpha = 1: (t/s) P_s >= P_t
  const Generator tpP = tp.subordinatedPoisson();
  const auto ord = operatorOrder(tpP.at(0.5).scaled(1.0 / 0.5), tpP.at(1.0));
  CHECK(ord.positive);

  // SM2 at alpha = 0: T_{0.5} - T_1 has symbol difference with a negative eigenvalue
  const Generator sm = makeSchur2();
  const auto bad = operatorOrder(sm.at(0.5), sm.at(1.0));
  CHECK_FALSE(bad.positive);
  CHECK(bad.witness == doctest::Approx(-(std::exp(-0.5) - std::exp(-1.0))).epsilon(1e-9));
}

TEST_CASE("minimal quasi-monotonicity index: oracles and engine agree") {
  const double alphaRoot = tpHeatAlphaRootOracle();
  const double alphaScan = tpHeatAlphaScanOracle();
  CHECK(alphaRoot == doctest::Approx(alphaScan).epsilon(1e-7));
  CHECK(alphaRoot == doctest::Approx(0.27846).epsilon(1e-4));

  const Generator tp = makeTwoPoint();
  const auto rep = find_min_alpha(tp, MonotoneDirection::QuasiIncreasing, 1e-3, 50.0, 128);
  CHECK(rep.direction == MonotoneDirection::QuasiIncreasing);
  CHECK(std::abs(rep.minimalAlpha - alphaRoot) <= 1e-3);

  const auto repP = find_min_alpha(tp.subordinatedPoisson(), MonotoneDirection::QuasiDecreasing,
                                   1e-3, 50.0, 128);
  CHECK(repP.direction == MonotoneDirection::QuasiDecreasing);
  CHECK(std::abs(repP.minimalAlpha - 1.0) <= 1e-3);

  const Generator id = makeIdentity(2);
  for (auto dir : {MonotoneDirection::QuasiDecreasing, MonotoneDirection::QuasiIncreasing}) {
    const auto repI = find_min_alpha(id, dir, 1e-3, 50.0, 32);
    CHECK(repI.direction == dir);
    CHECK(repI.minimalAlpha == 0.0);
  }
}

TEST_CASE("minimal index is stable under doubling the scan density") {
  const Generator tp = makeTwoPoint();
  const auto a = find_min_alpha(tp, MonotoneDirection::QuasiIncreasing, 1e-3, 50.0, 128);
  const auto b = find_min_alpha(tp, MonotoneDirection::QuasiIncreasing, 1e-3, 50.0, 256);
  CHECK(std::abs(a.minimalAlpha - b.minimalAlpha) <= 1e-3);
  // re-checking slightly above the minimum passes on the scan grid
  const auto w = quasiOrderWitness(tp, MonotoneDirection::QuasiIncreasing,
                                   a.minimalAlpha + 1e-6, a.worstPair.first, a.worstPair.second);
  CHECK(w.witness >= -1e-9);
}

TEST_CASE("semigroup law, symmetry, unitality, positivity, continuity") {
  Rng rng(17);
  for (const char* name : {"TP", "CYC_8", "TORUS_16", "SM2"}) {
    const Generator gen = makeFixture(name).generator();
    for (int i = 0; i < 8; ++i) {
      const double s = std::exp(rng.uniform(std::log(0.01), std::log(10.0)));
      const double t = std::exp(rng.uniform(std::log(0.01), std::log(10.0)));
      CHECK(semigroupLawResidual(gen, s, t) <= 1e-10);
      const Element f = randomElement(gen.context(), rng);
      const Element g = randomElement(gen.context(), rng);
      CHECK(selfAdjointnessResidual(gen, t, f, g) <= 1e-12 * l2norm(f) * l2norm(g) + 1e-15);
    }
    for (double t : {1e-3, 0.1, 1.0, 10.0}) {
      CHECK(gen.at(t).unitalResidual() <= 1e-13);
      CHECK(gen.at(t).positivityValue() >= -1e-12);
    }
    const Element f = randomElement(gen.context(), rng);
    double prev = kPInf;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      const double d = l2norm(gen.apply(t, f) - f);
      CHECK(d <= prev + 1e-12);
      prev = d;
    }
  }
}

TEST_CASE("generator validation rejects malformed inputs") {
  auto ctx = AlgebraContext::commutative(VecD::Constant(2, 0.5));
  MatD bad(2, 2);
  bad << -1.0, 0.5, 0.5, -1.0;  // rows do not sum to zero
  CHECK_THROWS_AS((void)Generator::markov(ctx, bad), std::invalid_argument);
  MatD negOff(2, 2);
  negOff << 1.0, -1.0, -1.0, 1.0;  // negative off-diagonal rates
  CHECK_THROWS_AS((void)Generator::markov(ctx, negOff), std::invalid_argument);

  auto m2 = AlgebraContext::matrixAlgebra(2);
  MatD psi(2, 2);
  psi << 1.0, 1.0, 1.0, 1.0;  // nonzero diagonal
  CHECK_THROWS_AS((void)Generator::schur(m2, psi), std::invalid_argument);
}
