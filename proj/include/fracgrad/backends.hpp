#pragma once

// Shift-solver backends. Every pseudo-resolvent solve factors through
//   Q_s[T] = (A - z)(A - conj z),  z = s0 + i|s_vec|,
// two complex shifted solves against the real representation A. Each backend
// amortizes one reduction of A across all shifts:
//   - symmetric dense: orthogonal tridiagonalization, O(n) per shift,
//   - general dense:   Hessenberg reduction, O(n^2) per shift,
//   - sparse:          one complex LU per shift.
// Solves can run in the reduced frame so a block of right-hand sides pays the
// basis transform once per quadrature pass, not once per contour node.

#include "fracgrad/grid.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <functional>
#include <memory>

namespace fracgrad {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Complexd = std::complex<double>;

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularAtS : public SolveError {
 public:
  using SolveError::SolveError;
};

class ShiftSolver {
 public:
  virtual ~ShiftSolver() = default;

  virtual Eigen::Index dim() const = 0;

  // Orthogonal (or identity) change of frame shared by all shifted solves.
  virtual MatrixXd toFrame(const MatrixXd& B) const { return B; }
  virtual MatrixXd fromFrame(const MatrixXd& B) const { return B; }

  // Q_s^{-1} B in the frame; B and the result are real.
  virtual MatrixXd solveQFrame(Complexd z, const MatrixXd& Bf) const = 0;
  // A B in the frame.
  virtual MatrixXd applyAFrame(const MatrixXd& Bf) const = 0;

  MatrixXd solveQ(Complexd z, const MatrixXd& B) const {
    return fromFrame(solveQFrame(z, toFrame(B)));
  }

  // Q_s[A]^{-T} B (equals solveQ when A is symmetric).
  virtual MatrixXd solveQTrans(Complexd z, const MatrixXd& B) const = 0;

  virtual MatrixXd applyA(const MatrixXd& B) const = 0;
  virtual MatrixXd applyATrans(const MatrixXd& B) const = 0;

  virtual double opNorm() const = 0;

  // Smallest singular value of the real representation of Q_s.
  virtual double sigmaMinQ(Complexd z) const = 0;

  // Real spectrum when the backend diagonalizes (symmetric case).
  virtual const VectorXd* eigenvaluesIfKnown() const { return nullptr; }

  // Smallest nonzero spectral scale; 0 when unknown.
  virtual double minNonzeroScale(double kernel_tol) const {
    (void)kernel_tol;
    return 0.0;
  }
};

std::unique_ptr<ShiftSolver> make_dense_solver(MatrixXd A);
std::unique_ptr<ShiftSolver> make_sparse_solver(SparseMat A);

// Densifies small sparse operators so they share the dense fast paths.
std::unique_ptr<ShiftSolver> make_solver(const SparseMat& A,
                                         Eigen::Index dense_threshold = 4608);

// Largest singular value by power iteration on M^T M given matvec callbacks.
double power_iteration_norm(Eigen::Index n,
                            const std::function<VectorXd(const VectorXd&)>& applyM,
                            const std::function<VectorXd(const VectorXd&)>& applyMT,
                            int iters = 60, unsigned seed = 12345);

}  // namespace fracgrad
