#include <doctest.h>

#include <cmath>
#include <memory>

#include "tentlab/fixtures.hpp"
#include "tentlab/tent.hpp"

using namespace tentlab;

namespace {

Element phiOf(const Generator& gen) {
  Element phi = gen.eigenElement(0);
  if (phi.vec()[0].real() < 0) phi = phi.scaled(-1.0);
  return phi;
}

// Grid with nodes landing exactly on 1 and 2 so indicator tents are clean.
std::shared_ptr<TimeGrid> indicatorGrid() {
  return std::make_shared<TimeGrid>(TimeGrid::geometric(0.25, 4.0, 257));
}

TentElement indicatorTent(const Generator& gen, std::shared_ptr<const TimeGrid> grid,
                          const Element& value, double lo, double hi) {
  TentElement t;
  t.grid = grid;
  for (int i = 0; i < grid->size(); ++i) {
    const double y = grid->nodes[i];
    t.samples.push_back(y >= lo * (1 - 1e-12) && y <= hi * (1 + 1e-12)
                            ? value
                            : Element::zero(gen.context()));
  }
  return t;
}

}  // namespace

TEST_CASE("T1 norm of the eigenvector indicator tent: sqrt(log 2)") {
  const Generator tp = makeTwoPoint();
  auto grid = indicatorGrid();
  const Element phi = phiOf(tp);
  const TentElement f = indicatorTent(tp, grid, phi, 1.0, 2.0);
  // T_y(phi^2) = 1 so the norm is (int_1^2 dy/y)^{1/2}
  CHECK(t1_norm(tp, f) == doctest::Approx(std::sqrt(std::log(2.0))).epsilon(0.02));
  CHECK(t1_norm(tp, TentElement::zero(tp.context(), grid)) == doctest::Approx(0.0));
  CHECK(t1_norm(tp, f.scaled(3.0)) == doctest::Approx(3.0 * t1_norm(tp, f)).epsilon(1e-12));
}

TEST_CASE("Tinf norm: indicator value and the single-node normalization") {
  const Generator tp = makeTwoPoint();
  auto grid = indicatorGrid();
  const Element phi = phiOf(tp);
  const TentElement f = indicatorTent(tp, grid, phi, 1.0, 2.0);
  CHECK(tinf_norm(tp, f) == doctest::Approx(std::sqrt(std::log(2.0))).epsilon(0.02));
  CHECK(tinf_norm(tp, TentElement::zero(tp.context(), grid)) == doctest::Approx(0.0));

  // unit L^2(dy/y) mass at one node: T_t of the constant gives exactly 1
  TentElement single = TentElement::zero(tp.context(), grid);
  const int mid = grid->size() / 2;
  single.samples[mid] = phi.scaled(1.0 / std::sqrt(grid->wMult[mid]));
  CHECK(tinf_norm(tp, single) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pairing: closed form, zero, orthogonal supports") {
  const Generator tp = makeTwoPoint();
  auto grid = indicatorGrid();
  const Element phi = phiOf(tp);
  const TentElement f = indicatorTent(tp, grid, phi, 1.0, 2.0);
  CHECK(pairing(f, f).real() == doctest::Approx(std::log(2.0)).epsilon(0.02));
  CHECK(std::abs(pairing(f, TentElement::zero(tp.context(), grid))) == doctest::Approx(0.0));
  const TentElement g = indicatorTent(tp, grid, phi, 2.5, 3.5);
  CHECK(std::abs(pairing(f, g)) == doctest::Approx(0.0));
  CHECK(l2TentNorm(f) == doctest::Approx(std::sqrt(std::log(2.0))).epsilon(0.02));
}

TEST_CASE("truncated square functions of the indicator tent") {
  const Generator tp = makeTwoPoint();
  auto grid = indicatorGrid();
  const Element phi = phiOf(tp);
  const TentElement f = indicatorTent(tp, grid, phi, 1.0, 2.0);
  const auto tsf = truncated_square(tp, f, MonotoneDirection::QuasiDecreasing, 1.0);
  // S~ at s = 1.5 is sqrt(log(2 / 1.5)) times the constant function
  const Element s15 = tsf.Stilde(1.5);
  CHECK(s15.vec()[0].real() == doctest::Approx(std::sqrt(std::log(2.0 / 1.5))).epsilon(0.03));
  CHECK(s15.vec()[0].real() == doctest::Approx(0.536).epsilon(0.03));
  // beyond the support the tail is empty
  CHECK(tsf.Stilde(3.0).maxAbs() <= 1e-14);
}

TEST_CASE("falling-case comparison S~ <= 2^{a/2} S on the Poisson fixture") {
  const Generator tpP = makeTwoPoint().subordinatedPoisson();
  auto grid = std::make_shared<TimeGrid>(TimeGrid::geometric(1e-2, 1e2, 48));
  Rng rng(9);
  for (int rep = 0; rep < 4; ++rep) {
    const TentElement a = randomTent(tpP.context(), grid, rng);
    const auto tsf = truncated_square(tpP, a, MonotoneDirection::QuasiDecreasing, 1.0);
    for (int i = 0; i < grid->size(); ++i) {
      const Element diff = tsf.Svalues[i].scaled(std::sqrt(2.0)) - tsf.StildeValues[i];
      CHECK(positivityValue(diff) >= -1e-12);
    }
  }
}

TEST_CASE("weighted Cauchy-Schwarz") {
  const Generator tp = makeTwoPoint();
  auto grid = indicatorGrid();
  const Element phi = phiOf(tp);
  const TentElement a = indicatorTent(tp, grid, phi, 1.0, 2.0);

  // S = 1 with a = b gives equality
  std::vector<Element> ones(grid->size(), Element::one(tp.context()));
  const auto eq = weighted_cauchy_schwarz(tp, a, a, ones);
  CHECK(eq.ratio == doctest::Approx(1.0).epsilon(1e-8));

  // S = S~(a): the inequality direction with the ratio at most one
  const auto tsf = truncated_square(tp, a, MonotoneDirection::QuasiDecreasing, 1.0);
  const auto res = weighted_cauchy_schwarz(tp, a, a, tsf.StildeValues);
  CHECK(res.ratio <= 1.0 + 1e-8);

  // disjoint supports: zero left side
  const TentElement b = indicatorTent(tp, grid, phi, 2.5, 3.5);
  const auto dis = weighted_cauchy_schwarz(tp, a, b, tsf.StildeValues);
  CHECK(dis.lhs == doctest::Approx(0.0));

  Rng rng(21);
  for (const char* name : {"CYC_8", "SM2"}) {
    const Generator gen = makeFixture(name).generator();
    auto g2 = std::make_shared<TimeGrid>(TimeGrid::geometric(1e-2, 1e2, 40));
    for (int i = 0; i < 4; ++i) {
      const TentElement x = randomTent(gen.context(), g2, rng);
      const TentElement y = randomTent(gen.context(), g2, rng, &gen);
      const auto tsfx = truncated_square(gen, x, MonotoneDirection::QuasiIncreasing, 1.0);
      const auto r = weighted_cauchy_schwarz(gen, x, y, tsfx.StildeValues);
      CHECK(r.ratio <= 1.0 + 1e-8);
    }
  }
}

TEST_CASE("tent norms are stable under grid refinement for smooth tents") {
  const Generator tp = makeTwoPoint();
  auto grid = std::make_shared<TimeGrid>(TimeGrid::geometric(1e-3, 1e3, 96));
  auto fine = std::make_shared<TimeGrid>(grid->refined());
  const Element phi = phiOf(tp);
  const Generator P = tp.subordinatedPoisson();
  auto gradient = [&](std::shared_ptr<const TimeGrid> g) {
    TentElement t;
    t.grid = g;
    for (int i = 0; i < g->size(); ++i) {
      const double y = g->nodes[i];
      t.samples.push_back(P.applyDerivative(y, phi).scaled(y));
    }
    return t;
  };
  const TentElement f0 = gradient(grid), f1 = gradient(fine);
  CHECK(t1_norm(tp, f0) == doctest::Approx(t1_norm(tp, f1)).epsilon(5e-3));
  CHECK(tinf_norm(tp, f0) == doctest::Approx(tinf_norm(tp, f1)).epsilon(5e-3));
}

TEST_CASE("grid mismatch is rejected") {
  const Generator tp = makeTwoPoint();
  auto g1 = std::make_shared<TimeGrid>(TimeGrid::geometric(1e-2, 1e2, 16));
  auto g2 = std::make_shared<TimeGrid>(TimeGrid::geometric(1e-2, 1e2, 24));
  const TentElement a = TentElement::zero(tp.context(), g1);
  const TentElement b = TentElement::zero(tp.context(), g2);
  CHECK_THROWS_AS((void)pairing(a, b), std::invalid_argument);
}

TEST_CASE("malformed truncated-square requests are rejected") {
  const Generator tp = makeTwoPoint();
  auto grid = std::make_shared<TimeGrid>(TimeGrid::geometric(1e-2, 1e2, 16));
  const TentElement a = TentElement::zero(tp.context(), grid);
  CHECK_THROWS_AS((void)truncated_square(tp, a, MonotoneDirection::Neither, 1.0),
                  std::invalid_argument);
  std::vector<Element> tooFew(3, Element::one(tp.context()));
  CHECK_THROWS_AS((void)weighted_cauchy_schwarz(tp, a, a, tooFew), std::invalid_argument);
}
