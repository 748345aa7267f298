#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tentlab/algebra.hpp"
#include "tentlab/generator.hpp"
#include "tentlab/lhalf.hpp"
#include "tentlab/rng.hpp"

namespace tentlab {

// Discretized line with a closed-form convolution kernel family.  Default is
// the torus wrap (periodized kernel, normalized by the constant row sum so
// T_t(1) = 1 exactly); the open-line variant with per-row normalization is
// for kernel-bound experiments only since it loses mu-symmetry.
enum class LineKernel { Heat, Poisson, HeavyTail };

struct LineFixture {
  int n = 0;
  double h = 0.0;
  bool wrap = true;
  bool rowNormalize = false;
  LineKernel kernel = LineKernel::Heat;
  ContextPtr ctx;
  double length = 0.0;

  static LineFixture make(int n, double h, LineKernel kernel, bool wrap = true,
                          bool rowNormalize = false) {
    if (n < 1 || !(h > 0.0)) throw std::invalid_argument("LineFixture: bad parameters");
    LineFixture fx;
    fx.n = n;
    fx.h = h;
    fx.wrap = wrap;
    fx.rowNormalize = rowNormalize;
    fx.kernel = kernel;
    fx.length = n * h;
    fx.ctx = AlgebraContext::commutative(VecD::Constant(n, h));
    return fx;
  }

  double x(int i) const { return (i + 0.5) * h; }

  double dist(int i, int j) const {
    double d = std::abs(x(i) - x(j));
    if (wrap) d = std::min(d, length - d);
    return d;
  }

  // Kernel length scale phi(t).
  double phi(double t) const {
    switch (kernel) {
      case LineKernel::Heat: return 2.0 * std::sqrt(t);
      case LineKernel::Poisson: return t;
      case LineKernel::HeavyTail: return 2.0 * std::sqrt(t);
    }
    return 0.0;
  }

  double rawDensity(double t, double d) const {
    switch (kernel) {
      case LineKernel::Heat:
        return std::exp(-d * d / (4.0 * t)) / std::sqrt(4.0 * M_PI * t);
      case LineKernel::Poisson:
        return t / (M_PI * (d * d + t * t));
      case LineKernel::HeavyTail: {
        const double p = phi(t);  // tail exponent 3/2 = n + r with r = 1/2 < 1
        return std::sqrt(p) / (std::pow(p, 1.5) + std::pow(d, 1.5));
      }
    }
    return 0.0;
  }

  // Periodized density when wrapped; enough images that the remainder is
  // negligible for the heat kernel and small for the slow tails.
  double density(double t, double d) const {
    if (!wrap) return rawDensity(t, d);
    double s = 0.0;
    const int images = kernel == LineKernel::Heat
                           ? std::max(2, static_cast<int>(std::ceil(6.0 * std::sqrt(t) / length)) + 2)
                           : 40;
    for (int m = -images; m <= images; ++m) s += rawDensity(t, std::abs(d + m * length));
    return s;
  }

  // Operator matrix M with (T f)_i = sum_j M_ij f_j.  Wrapped kernels are
  // circulant; dividing by the (constant) row sum keeps symmetry and makes
  // T(1) = 1 exact.
  MatD kernelMatrix(double t) const {
    MatD M(n, n);
    if (wrap) {
      VecD row0(n);
      for (int j = 0; j < n; ++j) row0[j] = density(t, dist(0, j)) * h;
      row0 /= row0.sum();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = row0[(j - i + n) % n];
      return M;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = rawDensity(t, dist(i, j)) * h;
    if (rowNormalize)
      for (int i = 0; i < n; ++i) M.row(i) /= M.row(i).sum();
    return M;
  }

  SemigroupOperator op(double t) const {
    SemigroupOperator T;
    T.ctx = ctx;
    T.kind = AlgebraKind::Commutative;
    T.time = t;
    T.data = kernelMatrix(t);
    return T;
  }

  SemigroupProvider provider() const {
    LineFixture fx = *this;
    return SemigroupProvider{ctx, [fx](double t) { return fx.op(t); }};
  }
};

// max over grid pairs of K_t(x,s) (phi^{n+r} + |x-s|^{n+r}) / phi^r, n = 1.
struct KernelBoundResult {
  double maxRatio = 0.0;
  double budget = 0.0;
  bool pass = false;
};

inline KernelBoundResult kernel_bound_check(const LineFixture& fx, double t, double r, double c,
                                            double phiOverride = 0.0) {
  if (!(r > 1.0)) throw std::invalid_argument("kernel_bound_check: requires r > 1");
  KernelBoundResult out;
  out.budget = c;
  const double p = phiOverride > 0.0 ? phiOverride : fx.phi(t);
  const double pr = std::pow(p, r);
  double best = 0.0;
  for (int j = 0; j < fx.n; ++j) {  // translation invariance: fix one row
    const double d = fx.dist(0, j);
    best = std::max(best,
                    fx.density(t, d) * (std::pow(p, 1.0 + r) + std::pow(d, 1.0 + r)) / pr);
  }
  out.maxRatio = best;
  out.pass = best <= c;
  return out;
}

// Dyadic filtration by blocks of cells.  Level k <= 0 has blocks of
// n0 * 4^{|k|} cells (saturating at the whole line); the shifted filtration
// is offset by a third of a block.  In cyclic mode (used by the exact sharp
// checks) atoms wrap around the torus, so every atom is full-sized and the
// 4-to-1 nesting and third-offset combinatorics hold on the nose; block
// boundaries of the coarse level land on fine boundaries because
// 4B/3 = B/3 + B.  Clipped mode snaps atoms into [0, n) and is only used
// where the constants are empirical.
struct DyadicFiltration {
  int n = 0;
  int blockCells = 1;
  int shiftCells = 0;
  bool cyclic = true;

  static DyadicFiltration plain(int n, int n0, int level, bool cyclic) {
    return build(n, n0, level, false, cyclic);
  }
  static DyadicFiltration shifted(int n, int n0, int level, bool cyclic) {
    return build(n, n0, level, true, cyclic);
  }

  static DyadicFiltration build(int n, int n0, int level, bool shifted, bool cyclic) {
    if (level > 0 || n0 < 1) throw std::invalid_argument("filtration: level <= 0, n0 >= 1");
    DyadicFiltration f;
    f.n = n;
    f.cyclic = cyclic;
    double cells = static_cast<double>(n0) * std::pow(4.0, -level);
    f.blockCells = cells >= n ? n : static_cast<int>(cells);
    if (cyclic && f.blockCells < n) {
      if (shifted && n0 % 3 != 0)
        throw std::invalid_argument("filtration: cyclic shifted mode needs n0 divisible by 3");
      if (n % f.blockCells != 0)
        throw std::invalid_argument("filtration: cyclic mode needs blocks dividing the line");
    }
    f.shiftCells = shifted ? f.blockCells / 3 : 0;
    return f;
  }

  bool saturated() const { return blockCells >= n; }

  int atomOf(int cell) const {
    if (saturated()) return 0;
    if (cyclic) return (((cell - shiftCells) % n) + n) % n / blockCells;
    const int s = cell - shiftCells;
    return s >= 0 ? s / blockCells : -((-s - 1) / blockCells) - 1;
  }

  int atomSize(int atom) const {
    if (saturated()) return n;
    if (cyclic) return blockCells;
    const long lo = static_cast<long>(shiftCells) + static_cast<long>(atom) * blockCells;
    const long hi = lo + blockCells;
    return static_cast<int>(std::min<long>(hi, n) - std::max<long>(lo, 0));
  }

  // Start cell of the atom containing `cell`, unwrapped so that
  // start <= cell < start + size as plain integers.
  long atomStartAround(int cell) const {
    if (saturated()) return 0;
    if (!cyclic) {
      const long lo = static_cast<long>(shiftCells) + static_cast<long>(atomOf(cell)) * blockCells;
      return std::max<long>(lo, 0);
    }
    const int rel = (((cell - shiftCells) % n) + n) % n;
    return static_cast<long>(cell) - rel % blockCells;
  }

  Element conditionalExpectation(const Element& f) const {
    const auto& ctx = f.context();
    if (ctx->kind != AlgebraKind::Commutative || ctx->dim != n)
      throw std::invalid_argument("conditionalExpectation: fixture mismatch");
    std::map<int, Cplx> sums;
    std::map<int, int> counts;
    for (int i = 0; i < n; ++i) {
      const int a = atomOf(i);
      sums[a] += f.vec()[i];
      counts[a] += 1;
    }
    VecC out(n);
    for (int i = 0; i < n; ++i) {
      const int a = atomOf(i);
      out[i] = sums[a] / static_cast<double>(counts[a]);
    }
    return Element::fromVector(ctx, out);
  }
};

// Cells of B's atom around `cell` lying inside A's atom around `cell`.  Both
// atoms contain the cell, so in cyclic mode (atom length <= n/2 or a full
// circle) the intersection is one arc and unwrapped interval arithmetic works.
inline double atomOverlap(const DyadicFiltration& A, const DyadicFiltration& B, int cell) {
  if (A.saturated()) return B.atomSize(B.atomOf(cell));
  if (B.saturated()) return A.atomSize(A.atomOf(cell));
  const long aLo = A.atomStartAround(cell), aHi = aLo + A.atomSize(A.atomOf(cell));
  const long bLo = B.atomStartAround(cell), bHi = bLo + B.atomSize(B.atomOf(cell));
  return static_cast<double>(std::max<long>(0, std::min(aHi, bHi) - std::max(aLo, bLo)));
}

// Pointwise inequalities of the two filtrations, verified exactly through the
// block combinatorics (point masses span the positive cone, and both sides
// are linear, so the size checks below are complete proofs for the fixture):
//   (A2)  E_k f <= 4 E_{k-1} f
//   (A3)  E_k f <= 3 E'_k E_k f        (and the swapped variant)
// plus the empirical kernel domination
//   (A4)  T_t f <= c sum_{k<=0} 4^{kr} (E_k f + E'_k f).
struct FiltrationResult {
  double worstA2 = kPInf;       // min over levels/cells of 4|D_k| - |D_{k-1}|, scaled
  double worstA3 = kPInf;       // min over levels/cells of 3|D' cap D| - |D'|
  double a4EmpiricalC = 0.0;
  double a4TailBound = 0.0;
  bool exactStructure = true;
  std::string note;
};

inline FiltrationResult filtration_inequalities(const LineFixture& fx, double t, double r,
                                                int kMin, int n0, bool exact, Rng& rng,
                                                int randomProbes = 6) {
  FiltrationResult out;
  const int n = fx.n;
  std::vector<DyadicFiltration> plain, shifted;
  for (int k = 0; k >= kMin; --k) {
    plain.push_back(DyadicFiltration::plain(n, n0, k, exact));
    shifted.push_back(DyadicFiltration::shifted(n, n0, k, exact));
  }

  // Point masses span the positive cone and E_k is linear, so the block
  // combinatorics below prove (A2)/(A3) for every positive probe.
  // (A2): the level-(k-1) atom holds at most 4x the cells of the level-k
  // atom containing any given cell.
  for (size_t lv = 0; lv + 1 < plain.size(); ++lv) {
    for (const auto* fam : {&plain, &shifted}) {
      const auto& fine = (*fam)[lv];
      const auto& coarse = (*fam)[lv + 1];
      for (int c = 0; c < n; ++c) {
        const double fineSz = fine.atomSize(fine.atomOf(c));
        const double coarseSz = coarse.atomSize(coarse.atomOf(c));
        out.worstA2 = std::min(out.worstA2, (4.0 * fineSz - coarseSz) / coarseSz);
      }
    }
  }

  // (A3): every cell's shifted atom meets its plain atom in at least a third
  // of the shifted atom (and vice versa).
  for (size_t lv = 0; lv < plain.size(); ++lv) {
    const auto& P = plain[lv];
    const auto& S = shifted[lv];
    for (int c = 0; c < n; ++c) {
      const double dSz = S.atomSize(S.atomOf(c));
      out.worstA3 = std::min(out.worstA3, (3.0 * atomOverlap(P, S, c) - dSz) / dSz);
      const double pSz = P.atomSize(P.atomOf(c));
      out.worstA3 = std::min(out.worstA3, (3.0 * atomOverlap(S, P, c) - pSz) / pSz);
    }
  }

  // (A4): empirical domination constant over point-mass and random probes.
  const MatD M = fx.kernelMatrix(t);
  std::vector<Element> probes;
  const int stride = std::max(1, n / 24);
  for (int c = 0; c < n; c += stride) probes.push_back(Element::pointMass(fx.ctx, c));
  for (int p = 0; p < randomProbes; ++p) {
    VecC v(n);
    for (int i = 0; i < n; ++i) v[i] = std::abs(rng.gaussian());
    probes.push_back(Element::fromVector(fx.ctx, v));
  }
  for (const auto& f : probes) {
    VecD rhs = VecD::Zero(n);
    for (size_t lv = 0; lv < plain.size(); ++lv) {
      const double w = std::pow(4.0, -static_cast<double>(lv) * r);
      rhs += w * plain[lv].conditionalExpectation(f).vec().real();
      rhs += w * shifted[lv].conditionalExpectation(f).vec().real();
    }
    const VecD lhs = (M * f.vec()).real();
    for (int i = 0; i < n; ++i)
      if (rhs[i] > 1e-300) out.a4EmpiricalC = std::max(out.a4EmpiricalC, lhs[i] / rhs[i]);
  }
  out.a4TailBound = std::pow(4.0, (kMin - 1) * r) / (1.0 - std::pow(4.0, -r));
  out.exactStructure = exact;
  return out;
}

}  // namespace tentlab
