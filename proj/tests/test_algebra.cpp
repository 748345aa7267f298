#include <doctest.h>

#include "tentlab/algebra.hpp"
#include "tentlab/fixtures.hpp"

using namespace tentlab;

namespace {

ContextPtr twoPointCtx() { return AlgebraContext::commutative(VecD::Constant(2, 0.5)); }

Element tp(const ContextPtr& ctx, double a, double b) {
  VecC v(2);
  v << Cplx(a, 0), Cplx(b, 0);
  return Element::fromVector(ctx, v);
}

}  // namespace

TEST_CASE("trace on the two-point space and M2") {
  auto ctx = twoPointCtx();
  CHECK(trace(tp(ctx, 1, -1)).real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(trace(tp(ctx, 1, 1)).real() == doctest::Approx(1.0));

  auto m2 = AlgebraContext::matrixAlgebra(2);
  MatC d = MatC::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  // normalized trace: (3 + 1) / 2 by hand
  CHECK(trace(Element::fromMatrix(m2, d)).real() == doctest::Approx(2.0));
  CHECK(trace(Element::one(m2)).real() == doctest::Approx(1.0));
  CHECK(trace(Element::one(ctx)).real() == doctest::Approx(ctx->totalMass));
}

TEST_CASE("trace is conjugate-linear under adjoints and rejects mismatches") {
  auto ctx = twoPointCtx();
  Rng rng(11);
  const Element x = randomElement(ctx, rng);
  CHECK(std::abs(trace(x.adjoint()) - std::conj(trace(x))) < 1e-14);
  auto other = AlgebraContext::commutative(VecD::Constant(3, 1.0 / 3));
  CHECK_THROWS_AS((void)x.mul(randomElement(other, rng)), std::invalid_argument);
}

TEST_CASE("lp quasi-norms: hand values and edge cases") {
  auto ctx = twoPointCtx();
  const Element x = tp(ctx, 2, 0);
  CHECK(lp_quasinorm(x, 1.0) == doctest::Approx(1.0));
  // p = 1/2 returns the quasi-norm itself: (tau |x|^{1/2})^2 = (0.5 sqrt 2)^2
  CHECK(lp_quasinorm(x, 0.5) == doctest::Approx(0.5));
  CHECK(lp_quasinorm(Element::zero(ctx), 0.7) == doctest::Approx(0.0));
  CHECK(lp_quasinorm(x, kPInf) == doctest::Approx(2.0));
  CHECK_THROWS_AS((void)lp_quasinorm(x, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)lp_quasinorm(x, -1.0), std::invalid_argument);
}

TEST_CASE("positivity witnesses") {
  auto ctx = twoPointCtx();
  auto w = is_positive(tp(ctx, 1.0, 0.5));
  CHECK(w.positive);
  CHECK(w.witness == doctest::Approx(0.5));

  auto m2 = AlgebraContext::matrixAlgebra(2);
  MatC m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1 by hand
  auto wm = is_positive(Element::fromMatrix(m2, m));
  CHECK_FALSE(wm.positive);
  CHECK(wm.witness == doctest::Approx(-1.0));

  auto wz = is_positive(tp(ctx, 0.0, 0.0), 0.0);
  CHECK(wz.positive);

  // non-self-adjoint input is rejected with the defect reported
  MatC ns(2, 2);
  ns << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS((void)is_positive(Element::fromMatrix(m2, ns)), std::invalid_argument);
}

TEST_CASE("traciality: tau(xy) = tau(yx) in both contexts") {
  Rng rng(5);
  for (const char* name : {"TP", "SM3"}) {
    auto ctx = makeFixture(name).context();
    for (int i = 0; i < 25; ++i) {
      const Element x = randomElement(ctx, rng);
      const Element y = randomElement(ctx, rng);
      const Cplx a = trace(x.mul(y)), b = trace(y.mul(x));
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("Jensen ordering of the p-norms for normalized traces") {
  // On a probability context ||x||_p increases with p:
  // ||x||_{1/2} <= ||x||_1 <= ||x||_2 <= ||x||_inf.
  Rng rng(6);
  for (const char* name : {"TP", "CYC_8", "SM2"}) {
    auto ctx = makeFixture(name).context();
    for (int i = 0; i < 20; ++i) {
      const Element x = randomElement(ctx, rng);
      const double ph = lp_quasinorm(x, 0.5), p1 = lp_quasinorm(x, 1.0);
      const double p2 = lp_quasinorm(x, 2.0), pi = lp_quasinorm(x, kPInf);
      CHECK(ph <= p1 * (1 + 1e-12));
      CHECK(p1 <= p2 * (1 + 1e-12));
      CHECK(p2 <= pi * (1 + 1e-12));
    }
  }
}

TEST_CASE("modulus is positive and ||x||_2^2 matches direct summation") {
  Rng rng(7);
  for (const char* name : {"CYC_8", "SM3"}) {
    auto ctx = makeFixture(name).context();
    for (int i = 0; i < 20; ++i) {
      const Element x = randomElement(ctx, rng);
      CHECK(positivityValue(x.modulus()) >= -1e-12);
      const double direct = trace(x.modulusSquared()).real();
      const double n2 = l2norm(x);
      CHECK(n2 * n2 == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("homogeneity of the quasi-norms") {
  Rng rng(8);
  auto ctx = makeFixture("SM2").context();
  const Element x = randomElement(ctx, rng);
  for (double p : {0.5, 1.0, 2.0, kPInf})
    CHECK(lp_quasinorm(x.scaled(3.0), p) == doctest::Approx(3.0 * lp_quasinorm(x, p)));
}

TEST_CASE("point masses are positive with unit trace") {
  for (const char* name : {"TP", "CYC_8", "SM2"}) {
    auto ctx = makeFixture(name).context();
    for (int i = 0; i < ctx->dim; ++i) {
      const Element p = Element::pointMass(ctx, i);
      CHECK(trace(p).real() == doctest::Approx(1.0));
      CHECK(positivityValue(p) >= 0.0);
    }
  }
}
