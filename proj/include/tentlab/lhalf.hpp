#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "tentlab/generator.hpp"
#include "tentlab/rng.hpp"

namespace tentlab {

// Abstracts "a semigroup realized at time y" so the tester runs both on
// spectral generators and on closed-form kernel families.
struct SemigroupProvider {
  ContextPtr ctx;
  std::function<SemigroupOperator(double)> at;
};

inline SemigroupProvider providerFor(const Generator& gen) {
  auto g = std::make_shared<Generator>(gen);
  return SemigroupProvider{g->context(), [g](double y) { return g->at(y); }};
}

// Empirical constant for the L^{1/2} condition
//   || T_y ( f T_y g ) ||_{1/2} <= c ||f||_1 ||g||_1          (commutative)
//   || T_y ( (T_y g)^{1/2} f (T_y g)^{1/2} ) ||_{1/2} <= c ...  (matrix form)
// over probes normalized to ||f||_1 = ||g||_1 = 1.  Point-mass pairs are
// scanned exhaustively (closed form in the commutative case); the uniform
// density and a multiplicative-ascent refinement with random restarts chase
// interior maxima.  The refined constant must be stable under doubling the
// search budget.
struct LHalfResult {
  double pointMassConstant = 0.0;
  double refinedConstant = 0.0;
  double stabilityChange = 0.0;
  double bestY = 0.0;
  std::vector<std::pair<double, double>> perY;
};

namespace detail {

inline double lhalfObjectiveComm(const MatD& M, const VecD& mu, const VecD& f, const VecD& g) {
  const VecD tg = M * g;
  const VecD u = M * f.cwiseProduct(tg).eval();
  double s = 0.0;
  for (int i = 0; i < u.size(); ++i) s += mu[i] * std::sqrt(std::max(u[i], 0.0));
  return s * s;
}

// Exhaustive point-mass scan: for f, g point masses at atoms i, j the value
// factorizes as M_ij h_i / (mu_i mu_j) with h_i = (sum_l mu_l sqrt(M_li))^2.
inline double pointMassScanComm(const MatD& M, const VecD& mu) {
  const int n = static_cast<int>(mu.size());
  VecD hcol(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int l = 0; l < n; ++l) s += mu[l] * std::sqrt(std::max(M(l, i), 0.0));
    hcol[i] = s * s;
  }
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double rowFactor = hcol[i] / mu[i];
    for (int j = 0; j < n; ++j)
      best = std::max(best, std::max(M(i, j), 0.0) * rowFactor / mu[j]);
  }
  return best;
}

inline void normalizeDensityComm(const VecD& mu, VecD& f) {
  f = f.cwiseMax(1e-300);
  f /= mu.dot(f);
}

inline double ascentComm(const MatD& M, const VecD& mu, int iters, Rng& rng, double seedValue) {
  const int n = static_cast<int>(mu.size());
  double best = seedValue;
  const int restarts = n >= 512 ? 3 : 8;  // large kernels: the scan already
                                          // covers the extreme points
  for (int restart = 0; restart < restarts; ++restart) {
    VecD f(n), g(n);
    for (int i = 0; i < n; ++i) {
      f[i] = std::exp(rng.gaussian());
      g[i] = std::exp(rng.gaussian());
    }
    normalizeDensityComm(mu, f);
    normalizeDensityComm(mu, g);
    double cur = lhalfObjectiveComm(M, mu, f, g);
    for (int it = 0; it < iters; ++it) {
      // multiplicative-weights step along the (positive) gradient
      const VecD tg = M * g;
      VecD u = M * f.cwiseProduct(tg).eval();
      u = u.cwiseMax(1e-300);
      const VecD tinv = M * u.cwiseSqrt().cwiseInverse().eval();
      f = f.cwiseProduct(tg.cwiseProduct(tinv).cwiseMax(0.0));
      normalizeDensityComm(mu, f);
      const VecD tf = M * f;
      u = M * g.cwiseProduct(tf).eval();  // symmetric objective in (g, f)
      u = u.cwiseMax(1e-300);
      const VecD tinv2 = M * u.cwiseSqrt().cwiseInverse().eval();
      g = g.cwiseProduct(tf.cwiseProduct(tinv2).cwiseMax(0.0));
      normalizeDensityComm(mu, g);
      cur = lhalfObjectiveComm(M, mu, f, g);
      best = std::max(best, cur);
    }
  }
  return best;
}

inline double lhalfObjectiveMat(const SemigroupOperator& T, const Element& f, const Element& g) {
  const Element root = T.apply(g).sqrtPositive();
  const Element inner = root.mul(f).mul(root);
  return lp_quasinorm(T.apply(inner), 0.5);
}

// Rank-one probes n vv* scanned over random unit vectors, then polished by a
// deterministic shrinking-step hill climb so the found maximum is stable
// under budget doubling.
inline double matrixSearch(const SemigroupOperator& T, const ContextPtr& ctx, int iters,
                           Rng& rng, double& pointMassBest) {
  const int n = ctx->dim;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pointMassBest = std::max(
          pointMassBest,
          lhalfObjectiveMat(T, Element::pointMass(ctx, i), Element::pointMass(ctx, j)));
  double best = std::max(pointMassBest,
                         lhalfObjectiveMat(T, Element::one(ctx), Element::one(ctx)));

  auto stateOf = [&](const VecC& v) {
    return Element::fromMatrix(ctx, static_cast<double>(n) * (v * v.adjoint()) / v.squaredNorm());
  };
  auto objective = [&](const VecC& vf, const VecC& vg) {
    return lhalfObjectiveMat(T, stateOf(vf), stateOf(vg));
  };
  auto randomVec = [&]() {
    VecC v(n);
    for (int i = 0; i < n; ++i) v[i] = Cplx(rng.gaussian(), rng.gaussian());
    return v;
  };

  VecC bf = VecC::Ones(n), bg = VecC::Ones(n);
  double cur = objective(bf, bg);
  for (int it = 0; it < 4 * iters; ++it) {
    const VecC vf = randomVec(), vg = randomVec();
    const double val = objective(vf, vg);
    if (val > cur) {
      cur = val;
      bf = vf;
      bg = vg;
    }
  }
  // deterministic polish: coordinate perturbations with a shrinking step
  for (double step = 0.5; step > 1e-4; step *= 0.5) {
    bool improved = true;
    int guard = 0;
    while (improved && guard++ < 64) {
      improved = false;
      for (int coord = 0; coord < 2 * n; ++coord)
        for (double sign : {1.0, -1.0})
          for (int target = 0; target < 2; ++target) {
            VecC vf = bf, vg = bg;
            VecC& v = target == 0 ? vf : vg;
            v[coord / 2] += (coord % 2 == 0 ? Cplx(sign * step, 0) : Cplx(0, sign * step)) *
                            std::max(1.0, v.norm());
            const double val = objective(vf, vg);
            if (val > cur * (1.0 + 1e-12)) {
              cur = val;
              bf = vf;
              bg = vg;
              improved = true;
            }
          }
    }
  }
  return std::max(best, cur);
}

}  // namespace detail

inline LHalfResult lhalf_test(const SemigroupProvider& provider, const std::vector<double>& yGrid,
                              long searchBudget, Rng rng) {
  const ContextPtr& ctx = provider.ctx;
  const long dim2 = static_cast<long>(ctx->dim) * ctx->dim;
  if (ctx->kind == AlgebraKind::Commutative && searchBudget < dim2)
    throw std::invalid_argument("lhalf_test: searchBudget below atom count squared");
  LHalfResult out;
  // the budget counts O(dim^2) objective-evaluation units; the point-mass
  // scan is always exhaustive and the remainder drives the ascent refinement
  const int iters = static_cast<int>(
      std::clamp<long>(searchBudget / (8 * std::max<long>(1, dim2)) + 6, 6, 48));

  auto evalAt = [&](double y, int itersHere) {
    const SemigroupOperator T = provider.at(y);
    double pm = 0.0, refined = 0.0;
    Rng r1 = rng.fork(static_cast<std::uint64_t>(y * 1e6) + 17 + itersHere);
    if (ctx->kind == AlgebraKind::Commutative) {
      const VecD& mu = ctx->weights;
      pm = detail::pointMassScanComm(T.data, mu);
      VecD unif = VecD::Ones(ctx->dim);
      detail::normalizeDensityComm(mu, unif);
      const double u = detail::lhalfObjectiveComm(T.data, mu, unif, unif);
      refined = detail::ascentComm(T.data, mu, itersHere, r1, std::max(pm, u));
    } else {
      refined = detail::matrixSearch(T, ctx, itersHere, r1, pm);
    }
    return std::make_pair(pm, refined);
  };

  for (double y : yGrid) {
    const auto [pm, refined] = evalAt(y, iters);
    out.pointMassConstant = std::max(out.pointMassConstant, pm);
    if (refined >= out.refinedConstant) {
      out.refinedConstant = refined;
      out.bestY = y;
    }
    out.perY.emplace_back(y, refined);
  }
  // stability under doubling the budget, measured where the constant binds
  const auto [pm2, refined2] = evalAt(out.bestY, 2 * iters);
  (void)pm2;
  out.stabilityChange =
      std::abs(refined2 - out.refinedConstant) / std::max(out.refinedConstant, 1e-300);
  return out;
}

}  // namespace tentlab
