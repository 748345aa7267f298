#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>

#include "tentlab/algebra.hpp"

namespace tentlab {

enum class GeneratorForm { MarkovMatrix, SchurSymbol };

// A semigroup operator realized at one time:
//   Commutative: the kernel matrix M with (T f)_i = sum_j M_ij f_j,
//                rows summing to 1, entries >= 0, mu-symmetric.
//   Matrix:      the Schur multiplier symbol S with T(x) = S o x (entrywise);
//                the map is completely positive iff S is PSD.
struct SemigroupOperator {
  ContextPtr ctx;
  AlgebraKind kind = AlgebraKind::Commutative;
  double time = 0.0;
  MatD data;

  Element apply(const Element& x) const {
    if (!sameContext(ctx, x.context())) throw std::invalid_argument("apply: context mismatch");
    if (kind == AlgebraKind::Commutative) return Element::fromVector(ctx, data * x.vec());
    return Element::fromMatrix(ctx, data.cast<Cplx>().cwiseProduct(x.mat()));
  }

  SemigroupOperator scaled(double a) const {
    SemigroupOperator s = *this;
    s.data *= a;
    return s;
  }

  // max |T(1) - 1|.
  double unitalResidual() const {
    if (kind == AlgebraKind::Commutative)
      return (data.rowwise().sum() - VecD::Ones(data.rows())).cwiseAbs().maxCoeff();
    return (data.diagonal() - VecD::Ones(data.rows())).cwiseAbs().maxCoeff();
  }

  // Positivity of the map: min kernel entry / min eigenvalue of the symbol.
  double positivityValue() const {
    if (kind == AlgebraKind::Commutative) return data.minCoeff();
    Eigen::SelfAdjointEigenSolver<MatD> es(0.5 * (data + data.transpose()));
    return es.eigenvalues().minCoeff();
  }

  double maxAbs() const { return data.cwiseAbs().maxCoeff(); }
};

// Witness that A - B is a positive operator (A >= B in the operator order of
// Definition 1-style comparisons): entrywise for kernels, PSD for symbols.
inline PositivityWitness operatorOrder(const SemigroupOperator& A, const SemigroupOperator& B,
                                       double tol = 1e-10) {
  if (A.kind != B.kind || !sameContext(A.ctx, B.ctx) || A.data.rows() != B.data.rows())
    throw std::invalid_argument("operatorOrder: incompatible operators");
  SemigroupOperator d = A;
  d.data -= B.data;
  PositivityWitness w;
  w.tolerance = tol;
  w.asymmetry = (d.data - d.data.transpose()).cwiseAbs().maxCoeff();
  w.witness = d.positivityValue();
  w.positive = w.witness >= -tol;
  return w;
}

// The symmetric Markov generator L, held in spectrally factored form.
//   MarkovMatrix: L real, L1 = 0, nonnegative off-diagonal, self-adjoint for
//     the weighted inner product <f,g> = sum mu_i f_i conj(g_i).  Internally
//     symmetrized via D^{1/2} L D^{-1/2} so a standard Hermitian solver
//     applies; eigenvalues are clamped into (-inf, 0] with the top snapped to
//     0 exactly, which keeps T_t(1) = 1 in spectral arithmetic.
//   SchurSymbol: real symmetric psi, zero diagonal, conditionally negative;
//     T_t acts entrywise as x_ij -> e^{-t psi_ij} x_ij.
class Generator {
 public:
  static Generator markov(ContextPtr ctx, const MatD& L, double tol = 1e-9) {
    if (ctx->kind != AlgebraKind::Commutative)
      throw std::invalid_argument("markov generator needs a commutative context");
    const int n = ctx->dim;
    if (L.rows() != n || L.cols() != n) throw std::invalid_argument("generator: size mismatch");
    if ((L * VecD::Ones(n)).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("generator: L(1) != 0");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && L(i, j) < -tol)
          throw std::invalid_argument("generator: negative off-diagonal rate");
    const VecD& mu = ctx->weights;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (std::abs(mu[i] * L(i, j) - mu[j] * L(j, i)) > tol)
          throw std::invalid_argument("generator: not mu-symmetric");

    Generator g;
    g.ctx_ = std::move(ctx);
    g.form_ = GeneratorForm::MarkovMatrix;
    const VecD dSqrt = mu.cwiseSqrt();
    MatD A = dSqrt.asDiagonal() * L * dSqrt.cwiseInverse().asDiagonal();
    A = 0.5 * (A + MatD(A.transpose()));
    Eigen::SelfAdjointEigenSolver<MatD> es(A);
    g.lam_ = es.eigenvalues();
    for (int k = 0; k < n; ++k) {
      if (g.lam_[k] > -1e-12) g.lam_[k] = 0.0;  // snap the kernel of L
      if (g.lam_[k] > 0.0) g.lam_[k] = 0.0;
    }
    g.U_ = dSqrt.cwiseInverse().asDiagonal() * es.eigenvectors();  // tau-orthonormal columns
    g.W_ = mu.asDiagonal() * g.U_;                                 // so f(L) = U f(Lam) W^T
    return g;
  }

  static Generator schur(ContextPtr ctx, const MatD& psi, double tol = 1e-9) {
    if (ctx->kind != AlgebraKind::Matrix)
      throw std::invalid_argument("schur generator needs a matrix context");
    const int n = ctx->dim;
    if (psi.rows() != n || psi.cols() != n) throw std::invalid_argument("generator: size mismatch");
    if ((psi - psi.transpose()).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("generator: symbol not symmetric");
    if (psi.diagonal().cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("generator: symbol diagonal must vanish");
    if (psi.minCoeff() < -tol)
      throw std::invalid_argument("generator: symbol entries must be nonnegative");
    for (double t : {0.1, 1.0, 10.0}) {
      MatD S = (-t * psi).array().exp();
      Eigen::SelfAdjointEigenSolver<MatD> es(S);
      if (es.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("generator: e^{-t psi} not PSD, symbol not conditionally negative");
    }
    Generator g;
    g.ctx_ = std::move(ctx);
    g.form_ = GeneratorForm::SchurSymbol;
    g.psi_ = psi;
    return g;
  }

  // The subordinated Poisson semigroup's own generator -sqrt(-L).
  Generator subordinatedPoisson() const {
    Generator g = *this;
    if (form_ == GeneratorForm::MarkovMatrix) {
      for (int k = 0; k < g.lam_.size(); ++k) g.lam_[k] = -std::sqrt(-lam_[k]);
    } else {
      g.psi_ = psi_.cwiseMax(0.0).cwiseSqrt();
    }
    return g;
  }

  const ContextPtr& context() const { return ctx_; }
  GeneratorForm form() const { return form_; }
  const VecD& eigenvalues() const { return lam_; }
  const MatD& symbol() const { return psi_; }

  // Operator with per-eigenvalue action g(lambda) (commutative) or entrywise
  // g(-psi_ij) (Schur).  All realizations below go through here.
  SemigroupOperator spectralMap(const std::function<double(double)>& g, double timeTag) const {
    SemigroupOperator op;
    op.ctx = ctx_;
    op.kind = ctx_->kind;
    op.time = timeTag;
    if (form_ == GeneratorForm::MarkovMatrix) {
      VecD gl(lam_.size());
      for (int k = 0; k < lam_.size(); ++k) gl[k] = g(lam_[k]);
      op.data = U_ * gl.asDiagonal() * W_.transpose();
    } else {
      const int n = ctx_->dim;
      op.data = MatD(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) op.data(i, j) = g(-psi_(i, j));
    }
    return op;
  }

  SemigroupOperator at(double t) const {
    if (t < 0.0) throw std::invalid_argument("semigroup: negative time");
    return spectralMap([t](double lam) { return std::exp(t * lam); }, t);
  }

  // L^order e^{tL}.
  SemigroupOperator derivative(double t, int order = 1) const {
    if (t < 0.0) throw std::invalid_argument("semigroup derivative: negative time");
    return spectralMap([t, order](double lam) { return std::pow(lam, order) * std::exp(t * lam); },
                       t);
  }

  SemigroupOperator ergodicProjection() const {
    return spectralMap([](double lam) { return lam == 0.0 ? 1.0 : 0.0; }, kPInf);
  }

  Element apply(double t, const Element& x) const { return at(t).apply(x); }
  Element applyDerivative(double t, const Element& x, int order = 1) const {
    return derivative(t, order).apply(x);
  }

  // Smallest nonzero -lambda (commutative) or nonzero psi entry (Schur).
  double spectralGap() const {
    double gap = kPInf;
    if (form_ == GeneratorForm::MarkovMatrix) {
      for (int k = 0; k < lam_.size(); ++k)
        if (lam_[k] < 0.0) gap = std::min(gap, -lam_[k]);
    } else {
      for (int i = 0; i < psi_.rows(); ++i)
        for (int j = 0; j < psi_.cols(); ++j)
          if (psi_(i, j) > 0.0) gap = std::min(gap, psi_(i, j));
    }
    return gap;
  }

  // tau-orthonormal eigenvector as an element (commutative form only).
  Element eigenElement(int k) const {
    if (form_ != GeneratorForm::MarkovMatrix)
      throw std::invalid_argument("eigenElement: commutative generators only");
    return Element::fromVector(ctx_, U_.col(k).cast<Cplx>());
  }

  // L applied to an element (the generator as a map).
  Element applyL(const Element& x) const {
    return spectralMap([](double lam) { return lam; }, 0.0).apply(x);
  }

 private:
  Generator() = default;
  ContextPtr ctx_;
  GeneratorForm form_ = GeneratorForm::MarkovMatrix;
  VecD lam_;  // commutative: eigenvalues of L, <= 0
  MatD U_;    // commutative: tau-orthonormal eigenvectors (columns)
  MatD W_;    // commutative: D U, giving f(L) = U f(Lam) W^T
  MatD psi_;  // Schur symbol
};

}  // namespace tentlab
