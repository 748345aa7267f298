#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "tentlab/generator.hpp"
#include "tentlab/semigroup.hpp"
#include "tentlab/subordination.hpp"
#include "tentlab/tent.hpp"
#include "tentlab/time_grid.hpp"

namespace tentlab {

// Section-3 objects for the subordinated Poisson semigroup P_y of (T_y):
//   ||phi||_BMO      = sup_y || P_y |phi - P_y phi|^2 ||_inf^{1/2}
//   S(f)             = ( int_0^inf T_{y^2} |dP_y f / dy|^2  y dy )^{1/2}
//   ||f||_H1         = || S(f) ||_{L^1}
// plus the gradient forms and the atom apparatus.

// 2 Gamma(x,y) = L(x*y) - L(x*)y - x*L(y).
inline Element gammaForm(const Generator& gen, const Element& x, const Element& y) {
  const Element xs = x.adjoint();
  const Element a = gen.applyL(xs.mul(y));
  const Element b = gen.applyL(xs).mul(y);
  const Element c = xs.mul(gen.applyL(y));
  return (a - b - c).scaled(0.5);
}

// GammaTilde along the Poisson flow at time s:
//   GammaTilde(P_s x, P_s y) = Gamma(P_s x, P_s y) + (dP_s x)* (dP_s y).
inline Element gammaTildeFlow(const Generator& gen, const Generator& poisson, double s,
                              const Element& x, const Element& y) {
  const Element u = poisson.apply(s, x), v = poisson.apply(s, y);
  const Element du = poisson.applyDerivative(s, x), dv = poisson.applyDerivative(s, y);
  return gammaForm(gen, u, v) + du.adjoint().mul(dv);
}

// Residual of the flow identity GammaTilde(P_s x, P_s y) =
// (1/2)[ L((P_s x)* P_s y) + d^2/ds^2 ((P_s x)* P_s y) ], the second
// derivative expanded by the product rule with spectral factors.
struct GammaTildeIdentityResult {
  double spectralResidual = 0.0;  // against the spectrally expanded route
  double fdResidual = 0.0;        // flow second difference vs the product rule
};

inline GammaTildeIdentityResult gamma_tilde_identity(const Generator& gen,
                                                     const Generator& poisson, double s,
                                                     const Element& x, const Element& y) {
  GammaTildeIdentityResult out;
  const Element u = poisson.apply(s, x), v = poisson.apply(s, y);
  const Element du = poisson.applyDerivative(s, x), dv = poisson.applyDerivative(s, y);
  const Element d2u = poisson.applyDerivative(s, x, 2), d2v = poisson.applyDerivative(s, y, 2);
  const Element lhs = gammaTildeFlow(gen, poisson, s, x, y);
  const Element prodSecond =
      d2u.adjoint().mul(v) + du.adjoint().mul(dv).scaled(2.0) + u.adjoint().mul(d2v);
  const Element rhs = (gen.applyL(u.adjoint().mul(v)) + prodSecond).scaled(0.5);
  const double scale = std::max(lhs.maxAbs() + rhs.maxAbs(), 1e-30);
  out.spectralResidual = (lhs - rhs).maxAbs() / scale;

  // Cross-check the second-derivative block by differencing the flow itself.
  double lamMax = 1.0;
  if (gen.form() == GeneratorForm::MarkovMatrix)
    lamMax = std::max(1e-12, gen.eigenvalues().cwiseAbs().maxCoeff());
  else
    lamMax = std::max(1e-12, gen.symbol().maxCoeff());
  const double h = std::min(0.4 * s, 0.1 / std::sqrt(lamMax));
  auto prodAt = [&](double t) {
    return poisson.apply(t, x).adjoint().mul(poisson.apply(t, y));
  };
  auto secondDiff = [&](double step) {
    return (prodAt(s + step) + prodAt(s - step) - prodAt(s).scaled(2.0))
        .scaled(1.0 / (step * step));
  };
  const Element rich = (secondDiff(0.5 * h).scaled(4.0) - secondDiff(h)).scaled(1.0 / 3.0);
  const double scale2 = std::max(prodSecond.maxAbs(), 1e-12);
  out.fdResidual = (rich - prodSecond).maxAbs() / scale2;
  return out;
}

// sup_y || P_y |phi - P_y phi|^2 ||_inf^{1/2} over the grid plus the ergodic
// y = inf endpoint (strong continuity makes y -> 0 contribute nothing).
inline double bmo_norm(const Generator& gen, const Element& phi, const TimeGrid& grid) {
  const Generator P = gen.subordinatedPoisson();
  double best = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double y = grid.nodes[i];
    const Element diff = phi - P.apply(y, phi);
    best = std::max(best, lp_quasinorm(P.apply(y, diff.modulusSquared()), kPInf));
  }
  const SemigroupOperator E = P.ergodicProjection();
  const Element diff = phi - E.apply(phi);
  best = std::max(best, lp_quasinorm(E.apply(diff.modulusSquared()), kPInf));
  return std::sqrt(best);
}

// Heat-kernel variant sup_t || T_{t^2} |phi - P_t phi|^2 ||_inf^{1/2}.
inline double bmo_heat_variant(const Generator& gen, const Element& phi, const TimeGrid& grid) {
  const Generator P = gen.subordinatedPoisson();
  double best = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double t = grid.nodes[i];
    const Element diff = phi - P.apply(t, phi);
    best = std::max(best, lp_quasinorm(gen.at(t * t).apply(diff.modulusSquared()), kPInf));
  }
  const SemigroupOperator E = gen.ergodicProjection();
  const Element diff = phi - P.ergodicProjection().apply(phi);
  best = std::max(best, lp_quasinorm(E.apply(diff.modulusSquared()), kPInf));
  return std::sqrt(best);
}

// S(f) = ( sum_i wLin_i T_{y_i^2} |dP_{y_i} f / dy|^2 )^{1/2} as an element.
inline Element poissonSquareFunction(const Generator& gen, const Element& f,
                                     const TimeGrid& grid) {
  const Generator P = gen.subordinatedPoisson();
  Element acc = Element::zero(f.context());
  for (int i = 0; i < grid.size(); ++i) {
    const double y = grid.nodes[i];
    if (grid.wLin[i] == 0.0) continue;
    const Element d = P.applyDerivative(y, f);
    acc = acc + gen.at(y * y).apply(d.modulusSquared()).scaled(grid.wLin[i]);
  }
  return acc.sqrtPositive();
}

inline double h1_norm(const Generator& gen, const Element& f, const TimeGrid& grid) {
  return trace(poissonSquareFunction(gen, f, grid)).real();
}

// Corollary-style majorized square function || (int P_y |dP_y f|^2 y dy)^{1/2} ||_1.
inline double cor33_norm(const Generator& gen, const Element& f, const TimeGrid& grid) {
  const Generator P = gen.subordinatedPoisson();
  Element acc = Element::zero(f.context());
  for (int i = 0; i < grid.size(); ++i) {
    const double y = grid.nodes[i];
    if (grid.wLin[i] == 0.0) continue;
    const Element d = P.applyDerivative(y, f);
    acc = acc + P.apply(y, d.modulusSquared()).scaled(grid.wLin[i]);
  }
  return trace(acc.sqrtPositive()).real();
}

// Center an element: remove its ergodic (constant) part.
inline Element centered(const Generator& gen, const Element& x) {
  return x - gen.ergodicProjection().apply(x);
}

// Carleson embedding: the tent s -> s dP_s/ds (phi - P_s phi) measured in
// Tinf over the Poisson semigroup, against ||phi||_BMO.
struct CarlesonResult {
  double tentNorm = 0.0;
  double bmo = 0.0;
  double ratio = 0.0;
};

inline CarlesonResult carleson_embedding_check(const Generator& gen, const Element& phi,
                                               std::shared_ptr<const TimeGrid> grid) {
  CarlesonResult out;
  const Generator P = gen.subordinatedPoisson();
  TentElement tent;
  tent.grid = grid;
  tent.samples.reserve(grid->size());
  for (int i = 0; i < grid->size(); ++i) {
    const double s = grid->nodes[i];
    // dP_s/ds applied to (phi - P_s phi): the operator hits P_s phi at time 2s.
    tent.samples.push_back(
        (P.applyDerivative(s, phi) - P.applyDerivative(2.0 * s, phi)).scaled(s));
  }
  out.tentNorm = tinf_norm(P, tent);
  out.bmo = bmo_norm(gen, phi, *grid);
  out.ratio = out.bmo > 0.0 ? out.tentNorm / out.bmo : (out.tentNorm == 0.0 ? 0.0 : kPInf);
  return out;
}

struct DualityResult {
  double pairing = 0.0;
  double h1 = 0.0, bmo = 0.0, cor33 = 0.0;
  double ratio = 0.0;       // |tau f phi*| / (h1 * bmo)
  double ratioCor33 = 0.0;  // |tau f phi*| / (cor33 * bmo)
  bool degenerate = false;
};

inline DualityResult duality_check_thm35(const Generator& gen, const Element& f,
                                         const Element& phi, const TimeGrid& grid) {
  DualityResult out;
  const Element fc = centered(gen, f), pc = centered(gen, phi);
  out.pairing = std::abs(trace(fc.mul(pc.adjoint())));
  out.h1 = h1_norm(gen, fc, grid);
  out.bmo = bmo_norm(gen, pc, grid);
  out.cor33 = cor33_norm(gen, fc, grid);
  if (out.h1 < 1e-14 || out.bmo < 1e-14) {
    out.degenerate = true;
    return out;
  }
  out.ratio = out.pairing / (out.h1 * out.bmo);
  out.ratioCor33 = out.cor33 > 1e-14 ? out.pairing / (out.cor33 * out.bmo) : 0.0;
  return out;
}

// Atom pair: f = b (T_{t^2} a)^{1/2} with a, b >= 0, tau a <= 1, tau b^2 <= 1.
struct AtomPair {
  double t = 0.0;
  Element a, b, f;
};

inline AtomPair make_atom(const Generator& gen, double t, const Element& a, const Element& b) {
  if (trace(a).real() > 1.0 + 1e-9 || trace(b.modulusSquared()).real() > 1.0 + 1e-9)
    throw std::invalid_argument("make_atom: normalization violated");
  AtomPair atom;
  atom.t = t;
  atom.a = a;
  atom.b = b;
  atom.f = b.mul(gen.at(t * t).apply(a).sqrtPositive());
  return atom;
}

// The three truncated quantities behind the atom H1 bound:
//   inner:  tau ( T_{t^2} int_0^t |dP_s f|^2 s ds )^{1/2}
//   outer:  tau ( int_t^inf |T_{k s^2} dP_s g|^2 s ds )^{1/2}   (g = f - P_t f)
//   full:   || g ||_{H1}
struct AtomH1Result {
  double inner = 0.0, outer = 0.0, full = 0.0;
};

inline AtomH1Result atom_h1_bound(const Generator& gen, const AtomPair& atom, double k,
                                  const TimeGrid& grid) {
  AtomH1Result out;
  const Generator P = gen.subordinatedPoisson();
  const double t = atom.t;
  const Element g = atom.f - P.apply(t, atom.f);

  Element accInner = Element::zero(atom.f.context());
  const VecD wTo = grid.weightsTo(TimeMeasure::Lin, t);
  for (int i = 0; i < grid.size(); ++i) {
    if (wTo[i] == 0.0) continue;
    accInner = accInner +
               P.applyDerivative(grid.nodes[i], atom.f).modulusSquared().scaled(wTo[i]);
  }
  out.inner = trace(gen.at(t * t).apply(accInner).sqrtPositive()).real();

  Element accOuter = Element::zero(atom.f.context());
  const VecD wFrom = grid.weightsFrom(TimeMeasure::Lin, t);
  for (int i = 0; i < grid.size(); ++i) {
    if (wFrom[i] == 0.0) continue;
    const double s = grid.nodes[i];
    const Element q = gen.at(k * s * s).apply(P.applyDerivative(s, g));
    accOuter = accOuter + q.modulusSquared().scaled(wFrom[i]);
  }
  out.outer = trace(accOuter.sqrtPositive()).real();

  out.full = h1_norm(gen, g, grid);
  return out;
}

// Square-function domination lemma: compares
//   tau ( int T_{s^2} |dP_s g|^2 s ds )^{1/2}
// against c tau ( int |T_{k s^2 / 8} dP_s g|^2 s ds )^{1/2}; returns both sides.
struct Lemma312Result {
  double lhs = 0.0, rhs = 0.0, empiricalC = 0.0;
};

inline Lemma312Result lemma312_check(const Generator& gen, const Element& g, double k,
                                     const TimeGrid& grid) {
  Lemma312Result out;
  const Generator P = gen.subordinatedPoisson();
  Element accL = Element::zero(g.context());
  Element accR = Element::zero(g.context());
  for (int i = 0; i < grid.size(); ++i) {
    if (grid.wLin[i] == 0.0) continue;
    const double s = grid.nodes[i];
    const Element d = P.applyDerivative(s, g);
    accL = accL + gen.at(s * s).apply(d.modulusSquared()).scaled(grid.wLin[i]);
    accR = accR + gen.at(k * s * s / 8.0).apply(d).modulusSquared().scaled(grid.wLin[i]);
  }
  out.lhs = trace(accL.sqrtPositive()).real();
  out.rhs = trace(accR.sqrtPositive()).real();
  out.empiricalC = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

// Atom-sup characterization of BMO: sup_{t, f} |tau[phi* (f - P_t f)]| over
// atoms f = b (T_{t^2} a)^{1/2}.  The b-step is optimized in closed form per
// phase; a ranges over point masses, the uniform density and random probes.
struct BmoDualResult {
  double atomSup = 0.0;
  double bmo = 0.0;
  double ratio = 0.0;
};

inline double bestOverB(const Generator& gen, double t, const Element& a, const Element& phi) {
  const Generator P = gen.subordinatedPoisson();
  const Element root = gen.at(t * t).apply(a).sqrtPositive();
  const Element resid = (phi - P.apply(t, phi)).adjoint();
  const Element Y = root.mul(resid);  // tau[b Y] over b >= 0, tau b^2 <= 1
  double best = 0.0;
  const int phases = Y.context()->kind == AlgebraKind::Commutative ? 2 : 16;
  for (int p = 0; p < phases; ++p) {
    const double th = 2.0 * M_PI * p / phases;
    const Element part = Y.scaled(Cplx(std::cos(th), std::sin(th))).selfAdjointPart().positivePart();
    best = std::max(best, l2norm(part));
  }
  return best;
}

inline BmoDualResult bmo_dual_characterization(const Generator& gen, const Element& phi,
                                               const TimeGrid& grid,
                                               const std::vector<double>& tSweep, Rng& rng,
                                               int randomProbes = 8) {
  BmoDualResult out;
  const ContextPtr ctx = phi.context();
  std::vector<Element> probes;
  for (int i = 0; i < ctx->dim; ++i) probes.push_back(Element::pointMass(ctx, i));
  probes.push_back(Element::one(ctx).scaled(1.0 / ctx->totalMass));
  for (int r = 0; r < randomProbes; ++r) {
    Element a = randomPositive(ctx, rng);
    const double m = trace(a).real();
    if (m > 0) probes.push_back(a.scaled(1.0 / m));
  }
  for (double t : tSweep)
    for (const auto& a : probes) out.atomSup = std::max(out.atomSup, bestOverB(gen, t, a, phi));
  out.bmo = bmo_norm(gen, phi, grid);
  out.ratio = out.bmo > 0.0 ? out.atomSup / out.bmo : (out.atomSup == 0.0 ? 0.0 : kPInf);
  return out;
}

// Two-sided derivative bounds with the explicit constant 3(3^a a + 2^a):
//   quasi-decreasing:  -c_a T_{2y/3} / y <= dT_y/dy <= a T_y / y
//   quasi-increasing:  -a T_y / y <= dT_y/dy <= c_a T_{2y} / y
struct DerivativeBoundsResult {
  double worstUpper = kPInf, worstLower = kPInf;
  double cAlpha = 0.0;
};

inline DerivativeBoundsResult derivative_bounds_check(const Generator& gen,
                                                      MonotoneDirection dir, double alpha,
                                                      const TimeGrid& grid) {
  DerivativeBoundsResult out;
  out.cAlpha = 3.0 * (std::pow(3.0, alpha) * alpha + std::pow(2.0, alpha));
  for (int i = 0; i < grid.size(); ++i) {
    const double y = grid.nodes[i];
    const SemigroupOperator D = gen.derivative(y);
    if (dir == MonotoneDirection::QuasiDecreasing) {
      out.worstUpper =
          std::min(out.worstUpper, operatorOrder(gen.at(y).scaled(alpha / y), D).witness);
      out.worstLower = std::min(
          out.worstLower,
          operatorOrder(D, gen.at(2.0 * y / 3.0).scaled(-out.cAlpha / y)).witness);
    } else {
      out.worstUpper =
          std::min(out.worstUpper, operatorOrder(gen.at(2.0 * y).scaled(out.cAlpha / y), D).witness);
      out.worstLower =
          std::min(out.worstLower, operatorOrder(D, gen.at(y).scaled(-alpha / y)).witness);
    }
  }
  return out;
}

// int_0^inf P_{s+y} GammaTilde(P_s phi, P_s phi) s y/(s+y) ds <= P_y(|phi|^2).
inline PositivityWitness lemma32_check(const Generator& gen, const Element& phi, double y,
                                       const TimeGrid& grid, double tol = 1e-9) {
  const Generator P = gen.subordinatedPoisson();
  Element acc = Element::zero(phi.context());
  for (int i = 0; i < grid.size(); ++i) {
    if (grid.wFlat[i] == 0.0) continue;
    const double s = grid.nodes[i];
    const Element gt = gammaTildeFlow(gen, P, s, phi, phi);
    acc = acc + P.apply(s + y, gt).scaled(grid.wFlat[i] * s * y / (s + y));
  }
  const Element rhs = P.apply(y, phi.modulusSquared());
  PositivityWitness w;
  w.tolerance = tol;
  w.witness = positivityValue(rhs - acc);
  w.positive = w.witness >= -tol * std::max(1.0, rhs.maxAbs());
  return w;
}

}  // namespace tentlab
