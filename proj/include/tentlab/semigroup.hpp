#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tentlab/generator.hpp"
#include "tentlab/report.hpp"

namespace tentlab {

enum class MonotoneDirection { QuasiDecreasing, QuasiIncreasing, Neither };

inline const char* directionName(MonotoneDirection d) {
  switch (d) {
    case MonotoneDirection::QuasiDecreasing: return "quasi-decreasing";
    case MonotoneDirection::QuasiIncreasing: return "quasi-increasing";
    default: return "neither";
  }
}

struct MonotonicityReport {
  MonotoneDirection direction = MonotoneDirection::Neither;
  double minimalAlpha = 0.0;
  std::pair<double, double> worstPair{0.0, 0.0};
  double residual = 0.0;  // worst violation at minimalAlpha - 1e-3
};

// Order condition at exponent alpha for a time pair u < v:
//   quasi-decreasing (T_y / y^a falls):  (v/u)^a T_u - T_v >= 0,
//   quasi-increasing (y^a T_y rises):    (v/u)^a T_v - T_u >= 0.
// The convention matches the heat-semigroup statement T_t <= (s/t)^{n/2} T_s
// for t < s.
inline PositivityWitness quasiOrderWitness(const Generator& gen, MonotoneDirection dir,
                                           double alpha, double u, double v,
                                           double tol = 1e-10) {
  if (!(u < v)) std::swap(u, v);
  const double factor = std::pow(v / u, alpha);
  if (dir == MonotoneDirection::QuasiDecreasing)
    return operatorOrder(gen.at(u).scaled(factor), gen.at(v), tol);
  return operatorOrder(gen.at(v).scaled(factor), gen.at(u), tol);
}

// Scan-pair set for the monotonicity search: consecutive grid pairs plus the
// near-coincident ratios where the derivative condition binds.
inline std::vector<std::pair<double, double>> monotonicityScanPairs(double tMin, double tMax,
                                                                    int scanDensity) {
  std::vector<std::pair<double, double>> pairs;
  const double q = std::pow(tMax / tMin, 1.0 / (scanDensity - 1));
  std::vector<double> nodes(scanDensity);
  for (int i = 0; i < scanDensity; ++i) nodes[i] = tMin * std::pow(q, i);
  for (int i = 0; i + 1 < scanDensity; ++i) pairs.emplace_back(nodes[i], nodes[i + 1]);
  for (double s : nodes)
    for (double r : {1.01, 1.1, 2.0, 10.0}) {
      const double t = s * r;
      if (t <= tMax) pairs.emplace_back(s, t);
    }
  return pairs;
}

// Least alpha >= 0 making the order condition hold over the scanned window;
// bisection over [0, 64] (the witness is monotone in alpha).
inline MonotonicityReport find_min_alpha(const Generator& gen, MonotoneDirection want,
                                         double tMin, double tMax, int scanDensity = 64,
                                         double alphaTol = 1e-4, double witnessTol = 1e-10) {
  if (!(tMin > 0.0) || scanDensity < 16)
    throw std::invalid_argument("find_min_alpha: need tMin > 0 and scanDensity >= 16");
  const auto pairs = monotonicityScanPairs(tMin, tMax, scanDensity);

  auto worstWitness = [&](double alpha) {
    double worst = kPInf;
    std::pair<double, double> at{0, 0};
    for (const auto& [u, v] : pairs) {
      const double w = quasiOrderWitness(gen, want, alpha, u, v, witnessTol).witness;
      if (w < worst) {
        worst = w;
        at = {u, v};
      }
    }
    return std::make_pair(worst, at);
  };

  MonotonicityReport rep;
  auto [w0, at0] = worstWitness(0.0);
  if (w0 >= -witnessTol) {
    rep.direction = want;
    rep.minimalAlpha = 0.0;
    rep.worstPair = at0;
    rep.residual = 0.0;
    return rep;
  }
  double lo = 0.0, hi = 64.0;
  auto [wHi, atHi] = worstWitness(hi);
  if (wHi < -witnessTol) {
    rep.direction = MonotoneDirection::Neither;
    rep.worstPair = atHi;
    rep.residual = wHi;
    return rep;
  }
  while (hi - lo > alphaTol) {
    const double mid = 0.5 * (lo + hi);
    if (worstWitness(mid).first >= -witnessTol)
      hi = mid;
    else
      lo = mid;
  }
  rep.direction = want;
  rep.minimalAlpha = hi;
  auto [wres, atres] = worstWitness(std::max(0.0, hi - 1e-3));
  rep.worstPair = atres;
  rep.residual = std::min(0.0, wres);
  return rep;
}

// Kadison-Schwarz defect T(|x|^2) - |T(x)|^2; positive for unital positive
// maps, reported as a witness.
inline CheckReport check_kadison_schwarz(const SemigroupOperator& T, const Element& x,
                                         double tol = 1e-10) {
  const Element lhs = T.apply(x.modulusSquared()) - T.apply(x).modulusSquared();
  const double w = positivityValue(lhs);
  return makeReport("kadison-schwarz", "", "t=" + std::to_string(T.time), w, -tol, tol,
                    w >= -tol);
}

// ||T_s T_t - T_{s+t}|| residual, sup-to-sup operator norm for kernels and
// max entry deviation for symbols (symbol composition is entrywise).
inline double semigroupLawResidual(const Generator& gen, double s, double t) {
  const SemigroupOperator A = gen.at(s), B = gen.at(t), C = gen.at(s + t);
  if (gen.context()->kind == AlgebraKind::Commutative) {
    const MatD diff = A.data * B.data - C.data;
    return diff.cwiseAbs().rowwise().sum().maxCoeff();
  }
  const MatD diff = A.data.cwiseProduct(B.data) - C.data;
  return diff.cwiseAbs().maxCoeff();
}

inline double selfAdjointnessResidual(const Generator& gen, double t, const Element& f,
                                      const Element& g) {
  const Cplx a = trace(gen.apply(t, f).mul(g.adjoint()));
  const Cplx b = trace(f.mul(gen.apply(t, g).adjoint()));
  return std::abs(a - b);
}

// Central finite-difference cross-check of the spectral time derivative.
// Order 1 uses the contract step h = 1e-4 t directly; order 2 divides by h^2,
// so it takes a larger step with Richardson extrapolation to keep both the
// truncation and the cancellation error below the 1e-6 gate.
inline double derivativeFdRelError(const Generator& gen, double t, const Element& x,
                                   int order = 1) {
  const Element exact = gen.applyDerivative(t, x, order);
  Element fd = Element::zero(gen.context());
  if (order == 1) {
    const double h = 1e-4 * t;
    fd = (gen.apply(t + h, x) - gen.apply(t - h, x)).scaled(1.0 / (2.0 * h));
  } else if (order == 2) {
    const double h = 3e-3 * t;
    auto second = [&](double step) {
      return (gen.apply(t + step, x) + gen.apply(t - step, x) - gen.apply(t, x).scaled(2.0))
          .scaled(1.0 / (step * step));
    };
    fd = (second(0.5 * h).scaled(4.0) - second(h)).scaled(1.0 / 3.0);
  } else {
    throw std::invalid_argument("derivativeFdRelError: order must be 1 or 2");
  }
  const double scale = std::max(l2norm(exact), 1e-300);
  return l2norm(fd - exact) / scale;
}

}  // namespace tentlab
