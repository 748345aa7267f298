#include <doctest.h>

#include <cmath>
#include <memory>

#include "tentlab/fixtures.hpp"
#include "tentlab/hardy_bmo.hpp"

using namespace tentlab;

namespace {
Element phiOf(const Generator& gen) {
  Element phi = gen.eigenElement(0);
  if (phi.vec()[0].real() < 0) phi = phi.scaled(-1.0);
  return phi;
}
const TimeGrid& mainGrid() {
  static const TimeGrid g = TimeGrid::geometric(1e-3, 1e3, 96);
  return g;
}
}  // namespace

TEST_CASE("BMO seminorm: closed form, constants, homogeneity") {
  const Generator tp = makeTwoPoint();
  const Element phi = phiOf(tp);
  // profile is (1 - e^{-sqrt 2 y})^2 with supremum 1 approached as y -> inf
  CHECK(bmo_norm(tp, phi, mainGrid()) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(bmo_norm(tp, Element::one(tp.context()), mainGrid()) == doctest::Approx(0.0));
  CHECK(bmo_norm(tp, phi.scaled(2.0), mainGrid()) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("heat-variant BMO equivalence") {
  const Generator tp = makeTwoPoint();
  const Element phi = phiOf(tp);
  const double heat = bmo_heat_variant(tp, phi, mainGrid());
  CHECK(heat == doctest::Approx(1.0).epsilon(1e-9));  // constant profile again
  const double ratio = bmo_norm(tp, phi, mainGrid()) / heat;
  CHECK(ratio == doctest::Approx(1.0).epsilon(1e-9));

  Rng rng(41);
  const Generator cyc = makeCycle(8);
  for (int i = 0; i < 5; ++i) {
    const Element x = centered(cyc, randomElement(cyc.context(), rng));
    const double a = bmo_norm(cyc, x, mainGrid());
    const double b = bmo_heat_variant(cyc, x, mainGrid());
    CHECK(a / b <= 8.0);
    CHECK(b / a <= 8.0);
  }
}

TEST_CASE("H1 norm: closed form 1/2 and refinement stability") {
  const Generator tp = makeTwoPoint();
  const Element phi = phiOf(tp);
  CHECK(h1_norm(tp, phi, mainGrid()) == doctest::Approx(0.5).epsilon(5e-3));
  CHECK(h1_norm(tp, Element::one(tp.context()), mainGrid()) == doctest::Approx(0.0));
  const TimeGrid halved = TimeGrid::geometric(1e-3, 1e3, 48);
  CHECK(h1_norm(tp, phi, halved) == doctest::Approx(0.5).epsilon(5e-3));
}

TEST_CASE("Carleson embedding of the BMO gradient tent") {
  const Generator tp = makeTwoPoint();
  auto grid = std::make_shared<TimeGrid>(mainGrid());
  const Element phi = phiOf(tp);
  const auto res = carleson_embedding_check(tp, phi, grid);
  CHECK(std::isfinite(res.ratio));
  CHECK(res.ratio <= 16.0);
  const auto zero = carleson_embedding_check(tp, Element::one(tp.context()), grid);
  CHECK(zero.tentNorm <= 1e-12);

  Rng rng(42);
  const Generator cyc = makeCycle(8);
  for (int i = 0; i < 3; ++i) {
    const Element x = centered(cyc, randomElement(cyc.context(), rng));
    const auto r = carleson_embedding_check(cyc, x, grid);
    CHECK(r.ratio <= 16.0);
  }
}

TEST_CASE("H1-BMO duality ratios") {
  const Generator tp = makeTwoPoint();
  const Element phi = phiOf(tp);
  const auto res = duality_check_thm35(tp, phi, phi, mainGrid());
  CHECK(res.pairing == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.h1 == doctest::Approx(0.5).epsilon(5e-3));
  CHECK(res.bmo == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.ratio == doctest::Approx(2.0).epsilon(1e-2));

  // orthogonal centered modes pair to zero
  const Generator cyc = makeCycle(8);
  const Element f = cyc.eigenElement(0);
  const Element g = cyc.eigenElement(1);
  const auto ortho = duality_check_thm35(cyc, f, g, mainGrid());
  CHECK(ortho.pairing <= 1e-10);

  // constants are degenerate and skipped
  const auto degen = duality_check_thm35(tp, Element::one(tp.context()),
                                         Element::one(tp.context()), mainGrid());
  CHECK(degen.degenerate);
}

TEST_CASE("atom apparatus: normalization and the trivial atom") {
  const Generator tp = makeTwoPoint();
  const auto& ctx = tp.context();
  const Element a = Element::pointMass(ctx, 0);
  const Element one = Element::one(ctx);
  const AtomPair atom = make_atom(tp, 1.0, a, one);
  CHECK(lp_quasinorm(atom.f, 1.0) <= 1.0 + 1e-9);

  // a = b = 1 gives f = 1, so g = f - P_t f = 0 and all quantities vanish
  const AtomPair triv = make_atom(tp, 1.0, one, one);
  const auto res = atom_h1_bound(tp, triv, 1.0, mainGrid());
  CHECK(res.inner <= 1e-12);
  CHECK(res.outer <= 1e-12);
  CHECK(res.full <= 1e-12);

  CHECK_THROWS_AS((void)make_atom(tp, 1.0, one.scaled(3.0), one), std::invalid_argument);
}

TEST_CASE("atom quantities stay bounded over the t sweep") {
  const Generator tp = makeTwoPoint();
  Rng rng(43);
  double worst = 0.0;
  for (double t : {0.05, 0.2, 1.0, 5.0, 20.0}) {
    const AtomPair atom = make_atom(
        tp, t, Element::pointMass(tp.context(), 0),
        Element::one(tp.context()).scaled(1.0 / std::sqrt(tp.context()->totalMass)));
    const auto res = atom_h1_bound(tp, atom, 1.0, mainGrid());
    worst = std::max({worst, res.inner, res.outer, res.full});
  }
  CHECK(std::isfinite(worst));
  CHECK(worst <= 16.0);
}

TEST_CASE("dual characterization of BMO through atoms") {
  const Generator tp = makeTwoPoint();
  const Element phi = phiOf(tp);
  Rng rng(44);
  std::vector<double> sweep{0.1, 0.3, 1.0, 3.0, 10.0, 40.0};
  const auto res = bmo_dual_characterization(tp, phi, mainGrid(), sweep, rng);
  CHECK(res.bmo == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.ratio >= 0.25);
  CHECK(res.ratio <= 4.0);

  const auto zero = bmo_dual_characterization(tp, Element::one(tp.context()), mainGrid(), sweep, rng);
  CHECK(zero.atomSup <= 1e-9);
}

TEST_CASE("two-sided derivative bounds with the explicit constant") {
  const TimeGrid grid = TimeGrid::geometric(1e-2, 1e2, 33);
  // falling case on the subordinated Poisson semigroup, alpha = 1:
  // the constant 3(3^a a + 2^a) evaluates to 15
  const Generator tpP = makeTwoPoint().subordinatedPoisson();
  const auto resP = derivative_bounds_check(tpP, MonotoneDirection::QuasiDecreasing, 1.0, grid);
  CHECK(resP.cAlpha == doctest::Approx(15.0));
  CHECK(resP.worstUpper >= -1e-9);
  CHECK(resP.worstLower >= -1e-9);

  // rising case on the heat fixture with the measured index
  const Generator tp = makeTwoPoint();
  const auto rep = find_min_alpha(tp, MonotoneDirection::QuasiIncreasing, 1e-3, 50.0, 128);
  const auto resH = derivative_bounds_check(tp, MonotoneDirection::QuasiIncreasing,
                                            rep.minimalAlpha, grid);
  CHECK(resH.worstUpper >= -1e-9);
  CHECK(resH.worstLower >= -1e-9);

  // identity semigroup: dT = 0, both orders hold trivially
  const Generator id = makeIdentity(2);
  const auto resI = derivative_bounds_check(id, MonotoneDirection::QuasiDecreasing, 0.0, grid);
  CHECK(resI.worstUpper >= -1e-12);
  CHECK(resI.worstLower >= -1e-12);
}

TEST_CASE("gradient form positivity and the flow identity") {
  Rng rng(45);
  for (const char* name : {"TP", "CYC_8", "SM2"}) {
    const Generator gen = makeFixture(name).generator();
    const Generator P = gen.subordinatedPoisson();
    for (int i = 0; i < 30; ++i) {
      const Element x = randomElement(gen.context(), rng);
      const Element g = gammaForm(gen, x, x);
      CHECK(positivityValue(g) >= -1e-10 * std::max(1.0, g.maxAbs()));
    }
    for (int i = 0; i < 4; ++i) {
      const Element x = randomElement(gen.context(), rng);
      const Element y = randomElement(gen.context(), rng);
      const auto res = gamma_tilde_identity(gen, P, 0.8, x, y);
      CHECK(res.spectralResidual <= 1e-8);
      CHECK(res.fdResidual <= 1e-5);
    }
  }
}

TEST_CASE("subharmonicity bound for the flow gradient") {
  Rng rng(46);
  const TimeGrid grid = TimeGrid::geometric(1e-2, 1e2, 64);
  for (const char* name : {"TP", "CYC_8", "SM2"}) {
    const Generator gen = makeFixture(name).generator();
    for (int i = 0; i < 10; ++i) {
      const Element phi = randomElement(gen.context(), rng);
      for (double y : {0.1, 1.0, 4.0}) {
        const auto w = lemma32_check(gen, phi, y, grid);
        CHECK(w.witness >= -1e-9 * std::max(1.0, phi.maxAbs() * phi.maxAbs()));
      }
    }
  }
}

TEST_CASE("smoothed square function dominated by the shifted plain one") {
  const Generator tp = makeTwoPoint();
  Rng rng(47);
  const double k = largestAdmissibleK(0.3, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    const Element g = centered(tp, randomElement(tp.context(), rng));
    const auto res = lemma312_check(tp, g, k, mainGrid());
    if (res.rhs > 1e-14) worst = std::max(worst, res.empiricalC);
  }
  CHECK(std::isfinite(worst));
  CHECK(worst <= 16.0);
}
