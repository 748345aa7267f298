#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "tentlab/algebra.hpp"

namespace tentlab {

struct QuadResult {
  MatD value;
  double errorEstimate = 0.0;
  bool converged = true;
  int evaluations = 0;
};

namespace detail {

struct QuadNode {
  MatD f;
};

// Adaptive Simpson on [a, b] for a matrix-valued integrand, max-abs error
// metric.  The integrands here are smooth after the log substitution, so a
// modest depth cap is ample.
inline void simpsonRec(const std::function<MatD(double)>& f, double a, double m, double b,
                       const MatD& fa, const MatD& fm, const MatD& fb, const MatD& whole,
                       double tol, int depth, QuadResult& out) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const MatD flm = f(lm), frm = f(rm);
  out.evaluations += 2;
  const MatD left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const MatD right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const MatD delta = left + right - whole;
  const double err = delta.cwiseAbs().maxCoeff();
  if (err <= 15.0 * tol || depth <= 0) {
    out.value += left + right + delta / 15.0;
    out.errorEstimate += err / 15.0;
    if (depth <= 0 && err > 15.0 * tol) out.converged = false;
    return;
  }
  simpsonRec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
  simpsonRec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

inline QuadResult adaptiveSimpson(const std::function<MatD(double)>& f, double a, double b,
                                  double tol, int maxDepth = 28, int basePanels = 8) {
  if (!(b > a)) throw std::invalid_argument("adaptiveSimpson: empty interval");
  QuadResult out;
  out.evaluations = 0;
  bool first = true;
  const double h = (b - a) / basePanels;
  for (int p = 0; p < basePanels; ++p) {
    const double pa = a + p * h, pb = a + (p + 1) * h, pm = 0.5 * (pa + pb);
    const MatD fa = f(pa), fm = f(pm), fb = f(pb);
    out.evaluations += 3;
    const MatD whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
    if (first) {
      out.value = MatD::Zero(fa.rows(), fa.cols());
      first = false;
    }
    detail::simpsonRec(f, pa, pm, pb, fa, fm, fb, whole, tol / basePanels, maxDepth, out);
  }
  return out;
}

inline double adaptiveSimpsonScalar(const std::function<double(double)>& f, double a, double b,
                                    double tol, int maxDepth = 32) {
  auto wrap = [&](double x) { return MatD::Constant(1, 1, f(x)); };
  return adaptiveSimpson(wrap, a, b, tol, maxDepth).value(0, 0);
}

}  // namespace tentlab
