#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tentlab/algebra.hpp"

namespace tentlab {

// Which of the three time measures a weight family discretizes.
enum class TimeMeasure { Mult, Flat, Lin };  // dy/y, dy, y dy

// Window quadrature flavor.  Accurate = composite 3-node quadratic
// (interpolatory, 4th order on the geometric grid) for norm evaluations.
// Monotone = per-cell trapezoid with clipped boundary cells; its node
// weights are nonincreasing in the left window edge, which the truncated
// square functions need so that s -> S_s is pointwise monotone by
// construction.  The dy/y measure defaults to Monotone throughout: trapezoid
// in log y has uniform interior weights (exact on log-constants), so
// single-node tent fixtures behave consistently between the full-range and
// windowed sums.  The dy and y dy measures default to Accurate.
enum class WindowRule { Accurate, Monotone, Default };

// Geometric grid y_1 < ... < y_m with weights for the measures dy/y, dy and
// y dy.  Every family integrates its own measure's constant exactly over
// [y_1, y_m] (the rules are interpolatory), so
//   sum wMult = log(y_m/y_1), sum wFlat = y_m - y_1, sum wLin = (y_m^2-y_1^2)/2.
struct TimeGrid {
  VecD nodes;
  VecD wMult, wFlat, wLin;
  double ratio = 1.0;

  int size() const { return static_cast<int>(nodes.size()); }

  static TimeGrid geometric(double lo, double hi, int m) {
    if (!(lo > 0.0) || !(hi > lo) || m < 2) throw std::invalid_argument("TimeGrid: bad range");
    TimeGrid g;
    g.nodes = VecD(m);
    const double q = std::pow(hi / lo, 1.0 / (m - 1));
    g.ratio = q;
    for (int i = 0; i < m; ++i) g.nodes[i] = lo * std::pow(q, i);
    g.nodes[m - 1] = hi;
    g.wMult = g.windowWeights(TimeMeasure::Mult, lo, hi);
    g.wFlat = g.windowWeights(TimeMeasure::Flat, lo, hi);
    g.wLin = g.windowWeights(TimeMeasure::Lin, lo, hi);
    return g;
  }

  // Density doubled, range extended one decade each way.
  TimeGrid refined() const {
    const double lo = nodes[0], hi = nodes[size() - 1];
    const double decades = std::log10(hi / lo);
    const int perDecade = static_cast<int>(std::round((size() - 1) / decades));
    const int m = static_cast<int>(std::round(2 * perDecade * (decades + 2))) + 1;
    return geometric(lo / 10.0, hi * 10.0, m);
  }

  // Monomial moments int y^k dmu over [a, b], k = 0, 1, 2.
  static void moments(TimeMeasure mu, double a, double b, double m[3]) {
    switch (mu) {
      case TimeMeasure::Mult:
        m[0] = std::log(b / a);
        m[1] = b - a;
        m[2] = 0.5 * (b * b - a * a);
        return;
      case TimeMeasure::Flat:
        m[0] = b - a;
        m[1] = 0.5 * (b * b - a * a);
        m[2] = (b * b * b - a * a * a) / 3.0;
        return;
      case TimeMeasure::Lin:
        m[0] = 0.5 * (b * b - a * a);
        m[1] = (b * b * b - a * a * a) / 3.0;
        m[2] = 0.25 * (b * b * b * b - a * a * a * a);
        return;
    }
  }

  static double cellIntegral(TimeMeasure mu, double a, double b) {
    double m[3];
    moments(mu, a, b, m);
    return m[0];
  }

  // Node weights for int_{max(lo,s)}^{min(hi,t)} h(y) dmu(y).
  VecD windowWeights(TimeMeasure mu, double s, double t,
                     WindowRule rule = WindowRule::Default) const {
    if (rule == WindowRule::Default)
      rule = mu == TimeMeasure::Mult ? WindowRule::Monotone : WindowRule::Accurate;
    const int m = size();
    VecD w = VecD::Zero(m);
    if (rule == WindowRule::Monotone) {
      for (int c = 0; c + 1 < m; ++c) {
        const double a = nodes[c], b = nodes[c + 1];
        const double lo = std::max(a, s), hi = std::min(b, t);
        if (!(hi > lo)) continue;
        const double mass = cellIntegral(mu, lo, hi);
        if (lo > a && hi < b) {
          w[c] += 0.5 * mass;
          w[c + 1] += 0.5 * mass;
        } else if (lo > a) {
          w[c + 1] += mass;
        } else if (hi < b) {
          w[c] += mass;
        } else {
          w[c] += 0.5 * mass;
          w[c + 1] += 0.5 * mass;
        }
      }
      return w;
    }

    // Accurate rule: full cells inside the window get composite quadratic
    // weights (panels paired from the right, one trapezoid cell when odd),
    // clipped boundary cells contribute their mass to the inside node.
    int i0 = 0;
    while (i0 < m && nodes[i0] < s * (1.0 - 1e-15)) ++i0;
    int i1 = m - 1;
    while (i1 >= 0 && nodes[i1] > t * (1.0 + 1e-15)) --i1;
    if (i0 >= m || i1 < 0 || i0 > i1) {
      if (t > s && i0 > 0 && i0 < m) {  // window inside one cell
        const double mass = cellIntegral(mu, s, t);
        w[i0 - 1] += 0.5 * mass;
        w[i0] += 0.5 * mass;
      }
      return w;
    }
    // left partial cell [s, nodes[i0]]
    if (i0 > 0 && s > nodes[i0 - 1] && s < nodes[i0]) w[i0] += cellIntegral(mu, s, nodes[i0]);
    // right partial cell [nodes[i1], t]
    if (i1 + 1 < m && t < nodes[i1 + 1] && t > nodes[i1]) w[i1] += cellIntegral(mu, nodes[i1], t);

    int hiIdx = i1;
    while (hiIdx - i0 >= 2) {
      const double a = nodes[hiIdx - 2], mid = nodes[hiIdx - 1], b = nodes[hiIdx];
      double mom[3];
      moments(mu, a, b, mom);
      const double wa =
          (mom[2] - (mid + b) * mom[1] + mid * b * mom[0]) / ((a - mid) * (a - b));
      const double wm = (mom[2] - (a + b) * mom[1] + a * b * mom[0]) / ((mid - a) * (mid - b));
      const double wb = (mom[2] - (a + mid) * mom[1] + a * mid * mom[0]) / ((b - a) * (b - mid));
      if (wa < 0.0 || wm < 0.0 || wb < 0.0) {  // very distorted panel: fall back
        w[hiIdx - 2] += 0.5 * cellIntegral(mu, a, mid);
        w[hiIdx - 1] += 0.5 * cellIntegral(mu, a, mid) + 0.5 * cellIntegral(mu, mid, b);
        w[hiIdx] += 0.5 * cellIntegral(mu, mid, b);
      } else {
        w[hiIdx - 2] += wa;
        w[hiIdx - 1] += wm;
        w[hiIdx] += wb;
      }
      hiIdx -= 2;
    }
    if (hiIdx - i0 == 1) {  // leftover single cell at the low end
      const double mass = cellIntegral(mu, nodes[i0], nodes[i0 + 1]);
      w[i0] += 0.5 * mass;
      w[i0 + 1] += 0.5 * mass;
    }
    return w;
  }

  VecD weightsFrom(TimeMeasure mu, double s, WindowRule rule = WindowRule::Default) const {
    return windowWeights(mu, s, nodes[size() - 1], rule);
  }
  VecD weightsTo(TimeMeasure mu, double t, WindowRule rule = WindowRule::Default) const {
    return windowWeights(mu, nodes[0], t, rule);
  }

  const VecD& weights(TimeMeasure mu) const {
    switch (mu) {
      case TimeMeasure::Mult: return wMult;
      case TimeMeasure::Flat: return wFlat;
      case TimeMeasure::Lin: return wLin;
    }
    return wMult;
  }

  // t-candidates for sup_t norms: nodes plus geometric midpoints.
  std::vector<double> supCandidates() const {
    std::vector<double> ts;
    ts.reserve(2 * size());
    for (int i = 0; i < size(); ++i) {
      ts.push_back(nodes[i]);
      if (i + 1 < size()) ts.push_back(std::sqrt(nodes[i] * nodes[i + 1]));
    }
    return ts;
  }
};

}  // namespace tentlab
