#pragma once

// The three-tier functional calculus for bisectorial operators by contour
// quadrature, and the fractional powers built on top of it:
//   omega tier     f(T) = (1/2pi) \int S_L^{-1}(s,T) ds_J f(s)    (decaying f)
//   extended tier  f(T) = f_inf + (1+T^2)^{-1}(f_0 - f_inf) + ftilde(T)
//   H-infinity     f(T) = e(T)^{-1} (ef)(T)                       (regularized)
// plus the sectorial single-sector route for powers of T^2.

#include "fracgrad/backends.hpp"
#include "fracgrad/contour.hpp"
#include "fracgrad/slice_functions.hpp"

#include <optional>

namespace fracgrad {

class NotConverged : public SolveError {
 public:
  using SolveError::SolveError;
};

class RegularizerSingular : public SolveError {
 public:
  using SolveError::SolveError;
};

class NotInjective : public SolveError {
 public:
  using SolveError::SolveError;
};

struct QuadratureOptions {
  double phi = M_PI / 4;      // contour angle
  double eps_factor = 1e-4;   // eps = eps_factor * (smallest nonzero spectral scale)
  double R_factor = 1e4;      // R = R_factor * ||T||
  double eps_abs = 0.0;       // absolute overrides, used when > 0
  double R_abs = 0.0;
  int base_panels = 2;        // initial composite panels per ray
  int gl_order = 16;
  int max_doublings = 6;
  double tol_quad = 1e-9;     // relative change between refinements
  SectorGeometry::Kind kind = SectorGeometry::Kind::DoubleSector;
  bool check_decay = true;    // empirical decay test at the contour ends
  double kernel_tol_factor = 1e-10;

  // Orthonormal basis of the (numerical) kernel of T; inputs are projected
  // onto its complement and the kernel action of every omega-tier function
  // is exactly zero.
  std::optional<MatrixXd> kernel;
};

// Resolved radial truncation for a given operator.
struct ContourRadii {
  double eps;
  double R;
};
ContourRadii resolve_radii(const ShiftSolver& T, const QuadratureOptions& opt);

// Adaptive omega-tier calculus applied to a block of module vectors.
MatrixXd omega_calculus_apply(const IntrinsicSliceFunction& f, const ShiftSolver& T,
                              const QuadratureOptions& opt, const MatrixXd& B);
MatrixXd omega_calculus_materialize(const IntrinsicSliceFunction& f, const ShiftSolver& T,
                                    const QuadratureOptions& opt);

// Extended tier for functions with limits f_0 at 0 and f_inf at infinity.
MatrixXd extended_calculus_apply(const DecomposedFunction& f, const ShiftSolver& T,
                                 const QuadratureOptions& opt, const MatrixXd& B);

// Regularizers are used in spectrally scaled form, e((s/c)) with c ~ ||T||,
// which keeps e(T)^{-1} = (1 + T^2/c^2)^n (...) conditioned independently of
// the operator scale. Any admissible order works; defaults add enough margin
// that the regularized integrand decays at least quadratically at infinity.
struct ScaledRegularizer {
  Regularizer reg;
  double scale = 1.0;

  IntrinsicSliceFunction fn() const {
    const int k = reg.order;
    const double c = scale;
    if (reg.kind == Regularizer::Kind::PositivePower)
      return {"reg+", [k, c](Complex z) { return std::pow(1.0 + (z / c) * (z / c), -k); },
              false};
    return {"reg0",
            [k, c](Complex z) { return std::pow((z / c) / (1.0 + (z / c) * (z / c)), k); },
            false};
  }
};

ScaledRegularizer default_regularizer_p(double alpha, double scale);
ScaledRegularizer default_regularizer_q(double alpha, double scale);

// H-infinity tier: f(T) = e(T)^{-1} (ef)(T).
MatrixXd hinfty_calculus_apply(const IntrinsicSliceFunction& f, const ScaledRegularizer& e,
                               const ShiftSolver& T, const QuadratureOptions& opt,
                               const MatrixXd& B);

// Fractional powers p_alpha(T), q_alpha(T). Odd-integer p and even-integer q
// reduce to plain operator powers. alpha <= 0 (and the sign operator) need an
// injective operator or a declared kernel subspace.
MatrixXd frac_power_p_apply(const ShiftSolver& T, double alpha, const QuadratureOptions& opt,
                            const MatrixXd& B);
MatrixXd frac_power_q_apply(const ShiftSolver& T, double alpha, const QuadratureOptions& opt,
                            const MatrixXd& B);
MatrixXd frac_power_p_materialize(const ShiftSolver& T, double alpha,
                                  const QuadratureOptions& opt);
MatrixXd frac_power_q_materialize(const ShiftSolver& T, double alpha,
                                  const QuadratureOptions& opt);

inline MatrixXd sign_operator_apply(const ShiftSolver& T, const QuadratureOptions& opt,
                                    const MatrixXd& B) {
  return frac_power_p_apply(T, 0.0, opt, B);
}

// (T^2)^{alpha/2} by the single-sector calculus on T^2; the validation route
// for q_alpha. `T2` is a solver for the squared operator; `opt.phi` is the
// sector contour angle in (2 omega, pi).
MatrixXd sectorial_power_of_square_apply(const ShiftSolver& T2, double alpha,
                                         QuadratureOptions opt, const MatrixXd& B);

// Core approximant r_n[T]^m = n^{2m} T^{2m} (T^2+n^2)^{-m} (T^2+1/n^2)^{-m}.
MatrixXd core_approximant_apply(const ShiftSolver& T, int n, int m_tilde, const MatrixXd& B);

// Regularized off-kernel inverse A^{-1} b = A (A^2 + eps^2)^{-1} b.
MatrixXd pseudo_inverse_apply(const ShiftSolver& T, const MatrixXd& B,
                              double kernel_tol_factor = 1e-10);

// sigma_min(A) estimate, used for injectivity checks.
double injectivity_scale(const ShiftSolver& T);

}  // namespace fracgrad
