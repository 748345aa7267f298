#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "tentlab/rng.hpp"

namespace tentlab {

using Cplx = std::complex<double>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;
using VecD = Eigen::VectorXd;
using MatD = Eigen::MatrixXd;

inline constexpr double kPInf = std::numeric_limits<double>::infinity();

enum class AlgebraKind { Commutative, Matrix };

// The ambient (M, tau).  Two realizations:
//   Commutative: functions on finitely many atoms with weights mu_i > 0,
//                tau(x) = sum_i mu_i x_i.
//   Matrix:      the n x n complex matrices with the normalized trace
//                tau(x) = Tr(x)/n.
class AlgebraContext {
 public:
  static std::shared_ptr<const AlgebraContext> commutative(VecD weights) {
    if (weights.size() == 0) throw std::invalid_argument("context: no atoms");
    for (int i = 0; i < weights.size(); ++i)
      if (!(weights[i] > 0.0)) throw std::invalid_argument("context: weights must be positive");
    auto c = std::shared_ptr<AlgebraContext>(new AlgebraContext);
    c->kind = AlgebraKind::Commutative;
    c->dim = static_cast<int>(weights.size());
    c->totalMass = weights.sum();
    c->weights = std::move(weights);
    return c;
  }

  static std::shared_ptr<const AlgebraContext> matrixAlgebra(int n) {
    if (n <= 0) throw std::invalid_argument("context: dimension must be positive");
    auto c = std::shared_ptr<AlgebraContext>(new AlgebraContext);
    c->kind = AlgebraKind::Matrix;
    c->dim = n;
    c->totalMass = 1.0;  // normalized trace
    return c;
  }

  AlgebraKind kind = AlgebraKind::Commutative;
  int dim = 0;
  VecD weights;      // commutative only
  double totalMass = 0.0;

 private:
  AlgebraContext() = default;
};

using ContextPtr = std::shared_ptr<const AlgebraContext>;

inline bool sameContext(const ContextPtr& a, const ContextPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->dim != b->dim) return false;
  if (a->kind == AlgebraKind::Commutative && (a->weights - b->weights).cwiseAbs().maxCoeff() > 0.0)
    return false;
  return true;
}

// Witness for "x >= 0 within tol": the minimal entry (commutative) or the
// minimal eigenvalue of the self-adjoint part (matrix case).
struct PositivityWitness {
  double witness = 0.0;
  double tolerance = 0.0;
  double asymmetry = 0.0;
  bool positive = false;
};

// An element of the algebra.  Immutable value type; all operations return
// fresh elements.  Complex scalars throughout, so one representation serves
// both contexts.
class Element {
 public:
  Element() = default;

  static Element fromVector(ContextPtr ctx, VecC v) {
    requireKind(ctx, AlgebraKind::Commutative);
    if (v.size() != ctx->dim) throw std::invalid_argument("element: size mismatch");
    Element e;
    e.ctx_ = std::move(ctx);
    e.vec_ = std::move(v);
    return e;
  }

  static Element fromMatrix(ContextPtr ctx, MatC m) {
    requireKind(ctx, AlgebraKind::Matrix);
    if (m.rows() != ctx->dim || m.cols() != ctx->dim)
      throw std::invalid_argument("element: size mismatch");
    Element e;
    e.ctx_ = std::move(ctx);
    e.mat_ = std::move(m);
    return e;
  }

  static Element zero(const ContextPtr& ctx) {
    return ctx->kind == AlgebraKind::Commutative
               ? fromVector(ctx, VecC::Zero(ctx->dim))
               : fromMatrix(ctx, MatC::Zero(ctx->dim, ctx->dim));
  }

  static Element one(const ContextPtr& ctx) {
    return ctx->kind == AlgebraKind::Commutative
               ? fromVector(ctx, VecC::Ones(ctx->dim))
               : fromMatrix(ctx, MatC::Identity(ctx->dim, ctx->dim));
  }

  // Positive element with tau = 1 concentrated on one atom (commutative) or
  // one diagonal matrix unit (matrix case).
  static Element pointMass(const ContextPtr& ctx, int i) {
    if (i < 0 || i >= ctx->dim) throw std::invalid_argument("pointMass: index out of range");
    if (ctx->kind == AlgebraKind::Commutative) {
      VecC v = VecC::Zero(ctx->dim);
      v[i] = 1.0 / ctx->weights[i];
      return fromVector(ctx, v);
    }
    MatC m = MatC::Zero(ctx->dim, ctx->dim);
    m(i, i) = static_cast<double>(ctx->dim);
    return fromMatrix(ctx, m);
  }

  const ContextPtr& context() const { return ctx_; }
  bool isCommutative() const { return ctx_->kind == AlgebraKind::Commutative; }
  const VecC& vec() const { return vec_; }
  const MatC& mat() const { return mat_; }

  Element adjoint() const {
    if (isCommutative()) return fromVector(ctx_, vec_.conjugate());
    return fromMatrix(ctx_, mat_.adjoint());
  }

  Element operator+(const Element& o) const {
    requireSame(o);
    if (isCommutative()) return fromVector(ctx_, vec_ + o.vec_);
    return fromMatrix(ctx_, mat_ + o.mat_);
  }

  Element operator-(const Element& o) const {
    requireSame(o);
    if (isCommutative()) return fromVector(ctx_, vec_ - o.vec_);
    return fromMatrix(ctx_, mat_ - o.mat_);
  }

  Element scaled(Cplx a) const {
    if (isCommutative()) return fromVector(ctx_, a * vec_);
    return fromMatrix(ctx_, a * mat_);
  }

  // Algebra product: pointwise (commutative) or matrix product.
  Element mul(const Element& o) const {
    requireSame(o);
    if (isCommutative()) return fromVector(ctx_, vec_.cwiseProduct(o.vec_));
    return fromMatrix(ctx_, mat_ * o.mat_);
  }

  // x* x, always positive.
  Element modulusSquared() const {
    if (isCommutative()) return fromVector(ctx_, vec_.cwiseAbs2().cast<Cplx>());
    return fromMatrix(ctx_, mat_.adjoint() * mat_);
  }

  // |x| = (x* x)^{1/2}: entrywise magnitude / spectral square root.
  Element modulus() const {
    if (isCommutative()) return fromVector(ctx_, vec_.cwiseAbs().cast<Cplx>());
    Eigen::SelfAdjointEigenSolver<MatC> es(mat_.adjoint() * mat_);
    VecD lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return fromMatrix(ctx_, es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint());
  }

  Element selfAdjointPart() const {
    if (isCommutative()) return fromVector(ctx_, vec_.real().cast<Cplx>());
    return fromMatrix(ctx_, 0.5 * (mat_ + mat_.adjoint()));
  }

  // Spectral square root of a self-adjoint, (near-)positive element.
  // Eigenvalues below zero are clamped; |most negative| is the caller's
  // positivity budget, not checked here.
  Element sqrtPositive() const {
    if (isCommutative()) {
      VecC v(ctx_->dim);
      for (int i = 0; i < ctx_->dim; ++i) v[i] = std::sqrt(std::max(vec_[i].real(), 0.0));
      return fromVector(ctx_, v);
    }
    Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (mat_ + mat_.adjoint()));
    VecD lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return fromMatrix(ctx_, es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint());
  }

  Element positivePart() const {
    if (isCommutative()) {
      VecC v(ctx_->dim);
      for (int i = 0; i < ctx_->dim; ++i) v[i] = std::max(vec_[i].real(), 0.0);
      return fromVector(ctx_, v);
    }
    Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (mat_ + mat_.adjoint()));
    VecD lam = es.eigenvalues().cwiseMax(0.0);
    return fromMatrix(ctx_, es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint());
  }

  // (x + eps)^{-1} for self-adjoint positive x; the additive regularization
  // keeps nearly-singular square functions invertible.
  Element invRegularized(double eps) const {
    if (isCommutative()) {
      VecC v(ctx_->dim);
      for (int i = 0; i < ctx_->dim; ++i) v[i] = 1.0 / (std::max(vec_[i].real(), 0.0) + eps);
      return fromVector(ctx_, v);
    }
    Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (mat_ + mat_.adjoint()));
    VecD lam = (es.eigenvalues().cwiseMax(0.0).array() + eps).inverse();
    return fromMatrix(ctx_, es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint());
  }

  double maxAbs() const {
    if (isCommutative()) return vec_.size() ? vec_.cwiseAbs().maxCoeff() : 0.0;
    return mat_.size() ? mat_.cwiseAbs().maxCoeff() : 0.0;
  }

  // ||x - x*||_max, the self-adjointness defect.
  double asymmetry() const {
    if (isCommutative()) return vec_.imag().cwiseAbs().maxCoeff();
    return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  }

 private:
  static void requireKind(const ContextPtr& ctx, AlgebraKind k) {
    if (!ctx || ctx->kind != k) throw std::invalid_argument("element: wrong context kind");
  }
  void requireSame(const Element& o) const {
    if (!sameContext(ctx_, o.ctx_)) throw std::invalid_argument("element: context mismatch");
  }

  ContextPtr ctx_;
  VecC vec_;
  MatC mat_;
};

inline Cplx trace(const Element& x) {
  if (x.isCommutative()) {
    Cplx s = 0.0;
    const auto& w = x.context()->weights;
    for (int i = 0; i < w.size(); ++i) s += w[i] * x.vec()[i];
    return s;
  }
  return x.mat().trace() / static_cast<double>(x.context()->dim);
}

// (tau |x|^p)^{1/p}; p = inf gives the sup/spectral norm.  For p < 1 this is
// the quasi-norm itself (e.g. p = 1/2 returns (tau |x|^{1/2})^2).
inline double lp_quasinorm(const Element& x, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_quasinorm: p must be positive");
  if (x.isCommutative()) {
    const auto& w = x.context()->weights;
    VecD a = x.vec().cwiseAbs();
    if (p == kPInf) return a.size() ? a.maxCoeff() : 0.0;
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += w[i] * std::pow(a[i], p);
    return std::pow(s, 1.0 / p);
  }
  Eigen::SelfAdjointEigenSolver<MatC> es(x.mat().adjoint() * x.mat());
  VecD sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();  // singular values
  if (p == kPInf) return sv.size() ? sv.maxCoeff() : 0.0;
  double s = 0.0;
  for (int i = 0; i < sv.size(); ++i) s += std::pow(sv[i], p);
  s /= static_cast<double>(x.context()->dim);
  return std::pow(s, 1.0 / p);
}

inline double l2norm(const Element& x) { return lp_quasinorm(x, 2.0); }

// Positivity of a self-adjoint element.  Rejects inputs that are not
// self-adjoint within tol (reporting the defect), otherwise reports the
// minimal entry / minimal eigenvalue as the witness.
inline PositivityWitness is_positive(const Element& x, double tol = 1e-10) {
  PositivityWitness w;
  w.tolerance = tol;
  w.asymmetry = x.asymmetry();
  const double scale = std::max(1.0, x.maxAbs());
  if (w.asymmetry > std::max(tol, 1e-9) * scale)
    throw std::invalid_argument("is_positive: element not self-adjoint, defect " +
                                std::to_string(w.asymmetry));
  if (x.isCommutative()) {
    w.witness = x.vec().real().minCoeff();
  } else {
    Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (x.mat() + x.mat().adjoint()));
    w.witness = es.eigenvalues().minCoeff();
  }
  w.positive = w.witness >= -tol;
  return w;
}

// Minimal entry / eigenvalue without the self-adjointness gate; used on
// elements known self-adjoint by construction.
inline double positivityValue(const Element& x) {
  if (x.isCommutative()) return x.vec().real().minCoeff();
  Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (x.mat() + x.mat().adjoint()));
  return es.eigenvalues().minCoeff();
}

inline Element randomElement(const ContextPtr& ctx, Rng& rng, bool selfAdjoint = false) {
  if (ctx->kind == AlgebraKind::Commutative) {
    VecC v(ctx->dim);
    for (int i = 0; i < ctx->dim; ++i)
      v[i] = selfAdjoint ? Cplx(rng.gaussian(), 0.0) : Cplx(rng.gaussian(), rng.gaussian());
    return Element::fromVector(ctx, v);
  }
  MatC m(ctx->dim, ctx->dim);
  for (int i = 0; i < ctx->dim; ++i)
    for (int j = 0; j < ctx->dim; ++j) m(i, j) = Cplx(rng.gaussian(), rng.gaussian());
  if (selfAdjoint) m = 0.5 * (m + MatC(m.adjoint()));
  return Element::fromMatrix(ctx, m);
}

inline Element randomPositive(const ContextPtr& ctx, Rng& rng) {
  Element x = randomElement(ctx, rng);
  return x.modulusSquared();
}

}  // namespace tentlab
