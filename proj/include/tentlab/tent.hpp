#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tentlab/generator.hpp"
#include "tentlab/report.hpp"
#include "tentlab/time_grid.hpp"

namespace tentlab {

// A time-indexed family (f_y)_y sampled on a grid; the object carrying the
// tent norms
//   ||f||_T1   = || (int T_y |f_y|^2 dy/y)^{1/2} ||_{L^1}
//   ||f||_Tinf = sup_t || T_t int_0^t |f_y|^2 dy/y ||_inf^{1/2}
// and the duality pairing tau int f_y g_y^* dy/y.
struct TentElement {
  std::shared_ptr<const TimeGrid> grid;
  std::vector<Element> samples;

  static TentElement zero(const ContextPtr& ctx, std::shared_ptr<const TimeGrid> g) {
    TentElement t;
    t.grid = std::move(g);
    t.samples.assign(t.grid->size(), Element::zero(ctx));
    return t;
  }

  static TentElement fromMap(const ContextPtr& ctx, std::shared_ptr<const TimeGrid> g,
                             const std::function<Element(double)>& f) {
    TentElement t;
    t.grid = std::move(g);
    t.samples.reserve(t.grid->size());
    for (int i = 0; i < t.grid->size(); ++i) t.samples.push_back(f(t.grid->nodes[i]));
    (void)ctx;
    return t;
  }

  const ContextPtr& context() const { return samples.front().context(); }
  TentElement scaled(Cplx a) const {
    TentElement t = *this;
    for (auto& s : t.samples) s = s.scaled(a);
    return t;
  }
};

using TimeWarp = std::function<double(double)>;
inline TimeWarp identityWarp() {
  return [](double y) { return y; };
}

inline void requireSameGrid(const TentElement& a, const TentElement& b) {
  if (a.grid.get() != b.grid.get() &&
      (a.grid->size() != b.grid->size() ||
       (a.grid->nodes - b.grid->nodes).cwiseAbs().maxCoeff() > 0.0))
    throw std::invalid_argument("tent: grid mismatch");
  if (!sameContext(a.context(), b.context()))
    throw std::invalid_argument("tent: context mismatch");
}

// tau of the spectral square root of  sum_i w_i T_{warp(y_i)} (|f_{y_i}|^2).
inline double t1_norm(const Generator& gen, const TentElement& f,
                      const TimeWarp& warp = identityWarp()) {
  const auto& g = *f.grid;
  Element acc = Element::zero(f.context());
  for (int i = 0; i < g.size(); ++i) {
    if (g.wMult[i] == 0.0) continue;
    acc = acc + gen.at(warp(g.nodes[i])).apply(f.samples[i].modulusSquared()).scaled(g.wMult[i]);
  }
  return trace(acc.sqrtPositive()).real();
}

// sup over grid times (nodes, geometric midpoints, and the ergodic t = inf
// endpoint) of || T_{warp(t)} int_0^t |f_y|^2 dmu ||_inf^{1/2}.
inline double tinf_norm(const Generator& gen, const TentElement& f,
                        const TimeWarp& warp = identityWarp(),
                        TimeMeasure inner = TimeMeasure::Mult, bool includeInfinity = true) {
  const auto& g = *f.grid;
  std::vector<Element> msq;
  msq.reserve(g.size());
  for (const auto& s : f.samples) msq.push_back(s.modulusSquared());

  double best = 0.0;
  for (double t : g.supCandidates()) {
    const VecD w = g.weightsTo(inner, t);
    Element acc = Element::zero(f.context());
    for (int i = 0; i < g.size(); ++i)
      if (w[i] != 0.0) acc = acc + msq[i].scaled(w[i]);
    best = std::max(best, lp_quasinorm(gen.at(warp(t)).apply(acc), kPInf));
  }
  if (includeInfinity) {
    Element acc = Element::zero(f.context());
    const VecD& w = g.weights(inner);
    for (int i = 0; i < g.size(); ++i) acc = acc + msq[i].scaled(w[i]);
    best = std::max(best, lp_quasinorm(gen.ergodicProjection().apply(acc), kPInf));
  }
  return std::sqrt(best);
}

// tau int f_y g_y^* dy/y.
inline Cplx pairing(const TentElement& f, const TentElement& g) {
  requireSameGrid(f, g);
  const auto& gr = *f.grid;
  Cplx acc = 0.0;
  for (int i = 0; i < gr.size(); ++i)
    acc += gr.wMult[i] * trace(f.samples[i].mul(g.samples[i].adjoint()));
  return acc;
}

inline double l2TentNorm(const TentElement& f) {
  return std::sqrt(std::abs(pairing(f, f)));
}

// Truncated square functions.  Quasi-decreasing pair:
//   S_s     = ( int_s^inf T_y(|A_y|^2) y^{a-1} (y+s)^{-a} dy )^{1/2}
//   S~_s    = ( int_s^inf T_y(|A_y|^2) dy/y )^{1/2}
// quasi-increasing pair replaces S_s by
//   ( int_s^inf T_{2y-s}(|A_y|^2) ((2y-s)/y)^a dy/y )^{1/2};
// the no-monotonicity variant built from a single f uses
//   S_s = ( int_s^inf T_{y-s/2}(|d/dy T_{y+s/2} f|^2) y dy )^{1/2}
//   G_s = ( int_s^inf |L T_{2y} f|^2 y dy )^{1/2}.
struct TruncatedSquareFunction {
  std::function<Element(double)> S;       // main square function at truncation s
  std::function<Element(double)> Stilde;  // companion (S~ or G)
  std::vector<Element> Svalues, StildeValues;  // at the grid nodes
  std::shared_ptr<const TimeGrid> grid;
};

inline TruncatedSquareFunction truncated_square(const Generator& gen, const TentElement& f,
                                                MonotoneDirection dir, double alpha) {
  if (dir == MonotoneDirection::Neither)
    throw std::invalid_argument("truncated_square: needs a monotone direction");
  auto grid = f.grid;
  auto msq = std::make_shared<std::vector<Element>>();
  auto smoothed = std::make_shared<std::vector<Element>>();  // T_y(|A_y|^2)
  for (int i = 0; i < grid->size(); ++i) {
    msq->push_back(f.samples[i].modulusSquared());
    smoothed->push_back(gen.at(grid->nodes[i]).apply(msq->back()));
  }
  const ContextPtr ctx = f.context();

  TruncatedSquareFunction out;
  out.grid = grid;
  out.Stilde = [grid, smoothed, ctx](double s) {
    const VecD w = grid->weightsFrom(TimeMeasure::Mult, s, WindowRule::Monotone);
    Element acc = Element::zero(ctx);
    for (int i = 0; i < grid->size(); ++i)
      if (w[i] != 0.0) acc = acc + (*smoothed)[i].scaled(w[i]);
    return acc.sqrtPositive();
  };
  if (dir == MonotoneDirection::QuasiDecreasing) {
    out.S = [grid, smoothed, ctx, alpha](double s) {
      const VecD w = grid->weightsFrom(TimeMeasure::Mult, s, WindowRule::Monotone);
      Element acc = Element::zero(ctx);
      for (int i = 0; i < grid->size(); ++i) {
        if (w[i] == 0.0) continue;
        const double y = grid->nodes[i];
        acc = acc + (*smoothed)[i].scaled(w[i] * std::pow(y / (y + s), alpha));
      }
      return acc.sqrtPositive();
    };
  } else {
    auto genCopy = std::make_shared<Generator>(gen);
    out.S = [grid, msq, ctx, alpha, genCopy](double s) {
      const VecD w = grid->weightsFrom(TimeMeasure::Mult, s, WindowRule::Monotone);
      Element acc = Element::zero(ctx);
      for (int i = 0; i < grid->size(); ++i) {
        if (w[i] == 0.0) continue;
        const double y = grid->nodes[i];
        const double u = 2.0 * y - s;
        if (!(u > 0.0)) continue;
        acc = acc + genCopy->at(u).apply((*msq)[i]).scaled(w[i] * std::pow(u / y, alpha));
      }
      return acc.sqrtPositive();
    };
  }
  out.Svalues.reserve(grid->size());
  out.StildeValues.reserve(grid->size());
  for (int i = 0; i < grid->size(); ++i) {
    out.Svalues.push_back(out.S(grid->nodes[i]));
    out.StildeValues.push_back(out.Stilde(grid->nodes[i]));
  }
  return out;
}

// The no-monotonicity (general semigroup) pair built from one element.
inline TruncatedSquareFunction truncated_square_general(const Generator& gen, const Element& f,
                                                        std::shared_ptr<const TimeGrid> grid) {
  auto genCopy = std::make_shared<Generator>(gen);
  const ContextPtr ctx = f.context();
  auto gSamples = std::make_shared<std::vector<Element>>();  // |L T_{2y} f|^2
  for (int i = 0; i < grid->size(); ++i) {
    const double y = grid->nodes[i];
    gSamples->push_back(genCopy->applyDerivative(2.0 * y, f).modulusSquared());
  }
  auto fCopy = std::make_shared<Element>(f);

  TruncatedSquareFunction out;
  out.grid = grid;
  out.Stilde = [grid, gSamples, ctx](double s) {  // G_s
    const VecD w = grid->weightsFrom(TimeMeasure::Lin, s, WindowRule::Monotone);
    Element acc = Element::zero(ctx);
    for (int i = 0; i < grid->size(); ++i)
      if (w[i] != 0.0) acc = acc + (*gSamples)[i].scaled(w[i]);
    return acc.sqrtPositive();
  };
  out.S = [grid, fCopy, ctx, genCopy](double s) {
    const VecD w = grid->weightsFrom(TimeMeasure::Lin, s, WindowRule::Monotone);
    Element acc = Element::zero(ctx);
    for (int i = 0; i < grid->size(); ++i) {
      if (w[i] == 0.0) continue;
      const double y = grid->nodes[i];  // window keeps y >= s, so y - s/2 >= s/2 > 0
      const Element inner = genCopy->applyDerivative(y + 0.5 * s, *fCopy).modulusSquared();
      acc = acc + genCopy->at(y - 0.5 * s).apply(inner).scaled(w[i]);
    }
    return acc.sqrtPositive();
  };
  out.Svalues.reserve(grid->size());
  out.StildeValues.reserve(grid->size());
  for (int i = 0; i < grid->size(); ++i) {
    out.Svalues.push_back(out.S(grid->nodes[i]));
    out.StildeValues.push_back(out.Stilde(grid->nodes[i]));
  }
  return out;
}

// Weighted Cauchy-Schwarz:
//  |tau int a_s b_s^* ds/s|
//    <= [tau int T_s(S_s^{-1}) |a_s|^2 ds/s]^{1/2} [tau int T_s(S_s) |b_s|^2 ds/s]^{1/2},
// with S regularized by eps = 1e-8 ||S at the first node||_inf.
struct WeightedCSResult {
  double lhs = 0.0, rhs = 0.0, ratio = 0.0, epsilon = 0.0;
};

inline WeightedCSResult weighted_cauchy_schwarz(const Generator& gen, const TentElement& a,
                                                const TentElement& b,
                                                const std::vector<Element>& S) {
  requireSameGrid(a, b);
  const auto& g = *a.grid;
  if (static_cast<int>(S.size()) != g.size())
    throw std::invalid_argument("weighted_cauchy_schwarz: S values per node required");
  WeightedCSResult out;
  out.epsilon = 1e-8 * std::max(lp_quasinorm(S.front(), kPInf), 1e-30);
  out.lhs = std::abs(pairing(a, b));
  double I = 0.0, II = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    if (g.wMult[i] == 0.0) continue;
    const Element sReg = S[i].positivePart() + Element::one(a.context()).scaled(out.epsilon);
    const Element sInv = S[i].invRegularized(out.epsilon);
    const auto& T = gen.at(g.nodes[i]);
    I += g.wMult[i] * trace(T.apply(sInv).mul(a.samples[i].modulusSquared())).real();
    II += g.wMult[i] * trace(T.apply(sReg).mul(b.samples[i].modulusSquared())).real();
  }
  out.rhs = std::sqrt(std::max(I, 0.0)) * std::sqrt(std::max(II, 0.0));
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : (out.lhs == 0.0 ? 0.0 : kPInf);
  return out;
}

// Random tents for seeded sweeps: i.i.d. node samples, optionally smoothed
// along a Poisson flow so sweeps also exercise correlated-in-y families.
inline TentElement randomTent(const ContextPtr& ctx, std::shared_ptr<const TimeGrid> grid,
                              Rng& rng, const Generator* smoother = nullptr) {
  TentElement t;
  t.grid = std::move(grid);
  t.samples.reserve(t.grid->size());
  if (smoother) {
    const Element f = randomElement(ctx, rng);
    const Generator P = smoother->subordinatedPoisson();
    for (int i = 0; i < t.grid->size(); ++i) {
      const double y = t.grid->nodes[i];
      t.samples.push_back(P.applyDerivative(y, f).scaled(y));
    }
  } else {
    for (int i = 0; i < t.grid->size(); ++i) t.samples.push_back(randomElement(ctx, rng));
  }
  return t;
}

}  // namespace tentlab
