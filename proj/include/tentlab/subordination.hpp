#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tentlab/generator.hpp"
#include "tentlab/quadrature.hpp"
#include "tentlab/report.hpp"
#include "tentlab/semigroup.hpp"
#include "tentlab/time_grid.hpp"

namespace tentlab {

// Subordination machinery: P_y = e^{-y sqrt(-L)} realized two ways,
//   Spectral:   e^{-y sqrt(-lambda)} per eigenvalue / e^{-y sqrt(psi_ij)},
//   Quadrature: the 1/2-stable identity
//     P_y = (1 / 2 sqrt(pi)) int_0^infty  y e^{-y^2/4u} u^{-3/2} T_u du.
// The quadrature route substitutes u = e^v, splits off the ergodic part
// (closed-form total weight) so the remaining integrand decays like the
// spectral gap, and bounds both tails analytically.

enum class PoissonRoute { Spectral, Quadrature };

struct PoissonResult {
  SemigroupOperator op;
  PoissonRoute route = PoissonRoute::Spectral;
  double quadErrorEstimate = 0.0;
  bool converged = true;
};

namespace detail {

// int_0^T y e^{-y^2/4u} u^{-3/2} du = 2 sqrt(pi) erfc(y / (2 sqrt(T))),
// increasing from 0 (T = 0) to 2 sqrt(pi) (T = inf).
inline double subordinationMass(double y, double uLo, double uHi) {
  const double sqrtPi2 = 2.0 * std::sqrt(M_PI);
  auto cum = [y](double T) {
    if (T <= 0.0) return 0.0;
    if (std::isinf(T)) return 1.0;
    return std::erfc(y / (2.0 * std::sqrt(T)));
  };
  return sqrtPi2 * (cum(uHi) - cum(uLo));  // mass on [uLo, uHi]
}

inline double subordinationWeight(double y, double u) {
  return y * std::exp(-y * y / (4.0 * u)) * std::pow(u, -1.5);
}

}  // namespace detail

// Weighted integral  int_{uLo}^{uHi} y e^{-y^2/4u} u^{-3/2} T_{u + shift} du
// (without the 1/2 sqrt(pi) normalization), with the ergodic block handled in
// closed form.  uHi may be infinite.
inline PoissonResult subordinationIntegral(const Generator& gen, double y, double uLo,
                                           double uHi, double shift = 0.0, double tol = 1e-9) {
  if (!(y > 0.0)) throw std::invalid_argument("subordination: y must be positive");
  PoissonResult res;
  res.route = PoissonRoute::Quadrature;
  const SemigroupOperator E = gen.ergodicProjection();
  const double gap = gen.spectralGap();

  const double mass = detail::subordinationMass(y, uLo, uHi);
  SemigroupOperator acc = E.scaled(mass);
  acc.time = y;

  if (std::isinf(gap)) {  // identity semigroup: T_u = E for all u
    res.op = acc;
    return res;
  }

  // Effective range for the non-ergodic part; both truncation tails are
  // bounded analytically (||T_u - E|| <= 2, and <= 2 e^{-gap u} above).
  double lo = uLo, hi = uHi;
  double tailErr = 0.0;
  if (lo <= 0.0) {
    const double z = std::sqrt(std::log(4.0 / tol));  // erfc(z) <= e^{-z^2}
    lo = y * y / (4.0 * z * z);
    tailErr += detail::subordinationMass(y, 0.0, std::min(lo, hi)) * 2.0;
  }
  const double hiCap = std::max({lo * 4.0, y * y, (std::log(1.0 / tol) + 4.0) / gap});
  if (hi > hiCap) {
    const double cut = std::max(hiCap, lo);
    tailErr += detail::subordinationMass(y, cut, hi) * 2.0 * std::exp(-gap * (cut + shift));
    hi = cut;
  }

  res.quadErrorEstimate = tailErr;
  if (hi > lo) {
    auto f = [&](double v) -> MatD {
      const double u = std::exp(v);
      const SemigroupOperator T = gen.at(u + shift);
      return detail::subordinationWeight(y, u) * u * (T.data - E.data);
    };
    QuadResult q = adaptiveSimpson(f, std::log(lo), std::log(hi), tol, 28, 16);
    acc.data += q.value;
    res.quadErrorEstimate += q.errorEstimate;
    res.converged = q.converged;
  }
  res.converged = res.converged && res.quadErrorEstimate <= 1e-8 * std::max(1.0, mass);
  res.op = acc;
  res.op.time = y;
  return res;
}

inline PoissonResult poisson(const Generator& gen, double y, PoissonRoute route,
                             double tol = 1e-9) {
  if (y < 0.0) throw std::invalid_argument("poisson: negative time");
  if (route == PoissonRoute::Spectral) {
    PoissonResult res;
    res.op = gen.subordinatedPoisson().at(y);
    return res;
  }
  if (y == 0.0) throw std::invalid_argument("poisson: quadrature route needs y > 0");
  PoissonResult res = subordinationIntegral(gen, y, 0.0, kPInf, 0.0, tol);
  res.op.data /= 2.0 * std::sqrt(M_PI);
  return res;
}

// Scalar subordination identity: quadrature of the kernel against e^{-m u}
// versus the closed form e^{-y sqrt(m)}.
inline double subordinationScalarError(double m, double y, double tol = 1e-10) {
  const double z = std::sqrt(std::log(4.0 / tol));
  const double lo = y * y / (4.0 * z * z);
  const double hi = std::max({y * y, lo * 4.0, m > 0 ? (std::log(1.0 / tol) + 4.0) / m : 50.0});
  auto f = [&](double v) {
    const double u = std::exp(v);
    return detail::subordinationWeight(y, u) * u * std::exp(-m * u);
  };
  double val = adaptiveSimpsonScalar(f, std::log(lo), std::log(hi), tol);
  if (m == 0.0) val += detail::subordinationMass(y, 0.0, lo) + detail::subordinationMass(y, hi, kPInf);
  val /= 2.0 * std::sqrt(M_PI);
  return std::abs(val - std::exp(-y * std::sqrt(m)));
}

// (d^2/dy^2 + L) P_y = 0: spectral residual plus a Richardson-extrapolated
// central-difference cross check in y.
struct PoissonPdeResult {
  double spectralResidual = 0.0;
  double fdRelError = 0.0;
};

inline PoissonPdeResult check_poisson_pde(const Generator& gen, double y, const Element& x) {
  if (!(y > 0.0)) throw std::invalid_argument("poisson pde: y must be positive");
  PoissonPdeResult out;
  const Generator P = gen.subordinatedPoisson();
  // lambda + (sqrt(-lambda))^2 vanishes identically in spectral arithmetic.
  const SemigroupOperator resOp = gen.spectralMap(
      [y](double lam) {
        const double s = std::sqrt(-lam);
        return (s * s + lam) * std::exp(-y * s);
      },
      y);
  const Element rhs = P.applyDerivative(y, x, 2);  // = -L P_y x by the PDE
  out.spectralResidual =
      resOp.apply(x).maxAbs() / std::max(1e-300, rhs.maxAbs() + x.maxAbs());

  double lamMax = 0.0;
  if (gen.form() == GeneratorForm::MarkovMatrix)
    lamMax = gen.eigenvalues().cwiseAbs().maxCoeff();
  else
    lamMax = gen.symbol().maxCoeff();
  const double h = std::min(0.4 * y, 0.1 / std::sqrt(std::max(lamMax, 1e-12)));
  auto secondDiff = [&](double step) {
    return (P.apply(y + step, x) + P.apply(y - step, x) - P.apply(y, x).scaled(2.0))
        .scaled(1.0 / (step * step));
  };
  const Element d2h = secondDiff(h), d2h2 = secondDiff(0.5 * h);
  const Element richardson = (d2h2.scaled(4.0) - d2h).scaled(1.0 / 3.0);
  const double scale = std::max(l2norm(rhs), 1e-300);
  out.fdRelError = l2norm(richardson - rhs) / scale;
  if (l2norm(rhs) < 1e-14 * std::max(1.0, l2norm(x))) out.fdRelError = l2norm(richardson - rhs);
  return out;
}

// Eq-(1.5)-style monotonicity: P_y(f)/y decreases for positive f; checked on
// every consecutive grid pair.
struct PyOverYResult {
  double worstWitness = kPInf;
  std::pair<double, double> worstPair{0, 0};
  int comparisons = 0;
};

inline PyOverYResult check_py_over_y_decreasing(const Generator& gen, const TimeGrid& grid,
                                                const Element& f) {
  PyOverYResult out;
  const Generator P = gen.subordinatedPoisson();
  Element prev = P.apply(grid.nodes[0], f).scaled(1.0 / grid.nodes[0]);
  for (int i = 1; i < grid.size(); ++i) {
    Element cur = P.apply(grid.nodes[i], f).scaled(1.0 / grid.nodes[i]);
    const double w = positivityValue(prev - cur);
    if (w < out.worstWitness) {
      out.worstWitness = w;
      out.worstPair = {grid.nodes[i - 1], grid.nodes[i]};
    }
    prev = cur;
    ++out.comparisons;
  }
  return out;
}

enum class KernelPiece { Pa, Pb, Pc, Pd, Pe };

// Truncated subordination kernels (paper normalization, no 1/2 sqrt(pi)):
//   Pa = int_0^{t^2},  Pb = int_{t^2}^infty,
//   Pc = int_0^{k s^2},  Pd = int_{k s^2}^infty,
//   Pe = int_{k s^2}^infty ... T_{u - k s^2 / 2} du  (so Pd = Pe T_{k s^2/2}).
inline PoissonResult kernel_split(const Generator& gen, double s, double t, KernelPiece piece,
                                  double k = 1.0, double tol = 1e-9) {
  if (!(s > 0.0) || !(t > 0.0)) throw std::invalid_argument("kernel_split: s, t > 0 required");
  switch (piece) {
    case KernelPiece::Pa: return subordinationIntegral(gen, s, 0.0, t * t, 0.0, tol);
    case KernelPiece::Pb: return subordinationIntegral(gen, s, t * t, kPInf, 0.0, tol);
    case KernelPiece::Pc:
      if (!(k > 0.0)) throw std::invalid_argument("kernel_split: k > 0 required");
      return subordinationIntegral(gen, s, 0.0, k * s * s, 0.0, tol);
    case KernelPiece::Pd:
      if (!(k > 0.0)) throw std::invalid_argument("kernel_split: k > 0 required");
      return subordinationIntegral(gen, s, k * s * s, kPInf, 0.0, tol);
    case KernelPiece::Pe:
      if (!(k > 0.0)) throw std::invalid_argument("kernel_split: k > 0 required");
      return subordinationIntegral(gen, s, k * s * s, kPInf, -0.5 * k * s * s, tol);
  }
  throw std::logic_error("kernel_split: unknown piece");
}

// Largest k <= 4 with  2^alpha c^2 int_0^{k s^2} s e^{-s^2/4u} u^{-3/2} du <= 1/16.
// The integral is 2 sqrt(pi) erfc(1 / (2 sqrt(k))), independent of s.
inline double largestAdmissibleK(double alpha, double cAlpha) {
  auto lhs = [&](double k) {
    return std::pow(2.0, alpha) * cAlpha * cAlpha * 2.0 * std::sqrt(M_PI) *
           std::erfc(1.0 / (2.0 * std::sqrt(k)));
  };
  if (lhs(4.0) <= 1.0 / 16.0) return 4.0;
  double lo = 1e-6, hi = 4.0;
  if (lhs(lo) > 1.0 / 16.0) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (lhs(mid) <= 1.0 / 16.0 ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace tentlab
