#include "fracgrad/calculus.hpp"

#include <cmath>

namespace fracgrad {

namespace {

MatrixXd project_out(const std::optional<MatrixXd>& kernel, MatrixXd B) {
  if (kernel && kernel->cols() > 0) B -= (*kernel) * (kernel->transpose() * B);
  return B;
}

// One quadrature level: sum of the merged-pair node contributions
//   a_k Q^{-1} Bf - b_k A Q^{-1} Bf, in the solver frame.
MatrixXd level_sum(const IntrinsicSliceFunction& f, const ShiftSolver& T,
                   const std::vector<ContourNode>& nodes, const MatrixXd& Bf) {
  MatrixXd acc = MatrixXd::Zero(Bf.rows(), Bf.cols());
  for (const ContourNode& nd : nodes) {
    Complex gamma = nd.gamma0 * f.eval(nd.z);
    double a = 2.0 * std::real(std::conj(nd.z) * gamma);
    double b = 2.0 * std::real(gamma);
    if (a == 0.0 && b == 0.0) continue;
    MatrixXd X = T.solveQFrame(nd.z, Bf);
    acc.noalias() += a * X;
    acc.noalias() -= b * T.applyAFrame(X);
  }
  return acc;
}

void decay_check(const IntrinsicSliceFunction& f, const std::vector<ContourNode>& nodes) {
  double fmax = 0.0, f_in = 0.0, f_out = 0.0;
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (const ContourNode& nd : nodes) {
    double r = std::abs(nd.z);
    double v = std::abs(f.eval(nd.z));
    fmax = std::max(fmax, v);
    if (r < rmin) {
      rmin = r;
      f_in = v;
    }
    if (r > rmax) {
      rmax = r;
      f_out = v;
    }
  }
  if (fmax == 0.0) return;
  if (f_in > 0.5 * fmax || f_out > 0.5 * fmax)
    throw DomainError("omega calculus: integrand does not decay at the contour ends (" +
                      f.name + ")");
}

int positive_order(double alpha) { return int(std::ceil((alpha + 2.0) / 2.0)); }
int injective_order(double alpha) { return int(std::floor(std::abs(alpha))) + 2; }

bool is_near_integer(double x, double& k) {
  k = std::round(x);
  return std::abs(x - k) < 1e-14;
}

MatrixXd integer_power_apply(const ShiftSolver& T, long k, const QuadratureOptions& opt,
                             const MatrixXd& B) {
  MatrixXd X = project_out(opt.kernel, B);
  if (k >= 0) {
    for (long i = 0; i < k; ++i) X = T.applyA(X);
  } else {
    for (long i = 0; i < -k; ++i) X = pseudo_inverse_apply(T, X, opt.kernel_tol_factor);
  }
  return X;
}

void require_injective_or_kernel(const ShiftSolver& T, const QuadratureOptions& opt) {
  if (opt.kernel) return;  // restricted-subspace semantics
  double smin = injectivity_scale(T);
  if (smin < opt.kernel_tol_factor * std::max(T.opNorm(), 1.0) * 1e4)
    throw NotInjective("operator has a numerical kernel and no kernel subspace was declared");
}

}  // namespace

ContourRadii resolve_radii(const ShiftSolver& T, const QuadratureOptions& opt) {
  double norm = T.opNorm();
  if (norm == 0.0) norm = 1.0;
  double lo = T.minNonzeroScale(opt.kernel_tol_factor * norm);
  if (lo == 0.0) lo = norm;
  ContourRadii r;
  r.eps = opt.eps_abs > 0.0 ? opt.eps_abs : opt.eps_factor * lo;
  r.R = opt.R_abs > 0.0 ? opt.R_abs : opt.R_factor * norm;
  if (!(r.eps > 0.0) || !(r.R > r.eps)) throw SolveError("invalid contour radii");
  return r;
}

double injectivity_scale(const ShiftSolver& T) {
  if (const VectorXd* ev = T.eigenvaluesIfKnown()) return ev->cwiseAbs().minCoeff();
  return std::sqrt(T.sigmaMinQ(Complexd(0.0, 0.0)));
}

MatrixXd omega_calculus_apply(const IntrinsicSliceFunction& f, const ShiftSolver& T,
                              const QuadratureOptions& opt, const MatrixXd& B) {
  ContourRadii radii = resolve_radii(T, opt);
  ContourSpec spec;
  spec.phi = opt.phi;
  spec.eps = radii.eps;
  spec.R = radii.R;
  spec.kind = opt.kind;

  MatrixXd Bf = T.toFrame(project_out(opt.kernel, B));
  const double bscale = std::max(Bf.norm(), 1e-290);

  MatrixXd prev;
  int panels = opt.base_panels;
  for (int lvl = 0; lvl <= opt.max_doublings; ++lvl, panels *= 2) {
    auto nodes = upper_contour_nodes(spec, panels, opt.gl_order);
    if (lvl == 0 && opt.check_decay) decay_check(f, nodes);
    MatrixXd acc = level_sum(f, T, nodes, Bf);
    if (lvl > 0) {
      double denom = std::max(acc.norm(), 1e-14 * bscale);
      if ((acc - prev).norm() <= opt.tol_quad * denom) return T.fromFrame(acc);
    }
    prev = std::move(acc);
  }
  throw NotConverged("omega calculus did not converge within the refinement budget (" +
                     f.name + ")");
}

MatrixXd omega_calculus_materialize(const IntrinsicSliceFunction& f, const ShiftSolver& T,
                                    const QuadratureOptions& opt) {
  return omega_calculus_apply(f, T, opt, MatrixXd::Identity(T.dim(), T.dim()));
}

MatrixXd extended_calculus_apply(const DecomposedFunction& f, const ShiftSolver& T,
                                 const QuadratureOptions& opt, const MatrixXd& B) {
  MatrixXd out = f.finf * B;
  if (f.f0 != f.finf) out.noalias() += (f.f0 - f.finf) * T.solveQ(Complexd(0.0, 1.0), B);
  bool tilde_nonzero = bool(f.tilde.eval);
  if (tilde_nonzero) out.noalias() += omega_calculus_apply(f.tilde, T, opt, B);
  return out;
}

ScaledRegularizer default_regularizer_p(double alpha, double scale) {
  if (alpha > 0.0)
    return {{Regularizer::Kind::PositivePower, positive_order(alpha)}, scale};
  return {{Regularizer::Kind::InjectivePower, injective_order(alpha)}, scale};
}

ScaledRegularizer default_regularizer_q(double alpha, double scale) {
  return default_regularizer_p(alpha, scale);
}

MatrixXd hinfty_calculus_apply(const IntrinsicSliceFunction& f, const ScaledRegularizer& e,
                               const ShiftSolver& T, const QuadratureOptions& opt,
                               const MatrixXd& B) {
  if (e.reg.kind == Regularizer::Kind::InjectivePower) require_injective_or_kernel(T, opt);

  MatrixXd X = omega_calculus_apply(e.fn() * f, T, opt, B);

  const double c2 = e.scale * e.scale;
  auto one_plus_scaled_square = [&](MatrixXd& Y) {
    MatrixXd AY = T.applyA(T.applyA(Y));
    Y.noalias() += AY / c2;
  };
  for (int k = 0; k < e.reg.order; ++k) one_plus_scaled_square(X);
  if (e.reg.kind == Regularizer::Kind::InjectivePower) {
    for (int k = 0; k < e.reg.order; ++k)
      X = e.scale * pseudo_inverse_apply(T, X, opt.kernel_tol_factor);
  }
  return X;
}

MatrixXd frac_power_p_apply(const ShiftSolver& T, double alpha, const QuadratureOptions& opt,
                            const MatrixXd& B) {
  double k;
  if (is_near_integer(alpha, k) && std::abs(std::fmod(k, 2.0)) == 1.0) {
    if (k < 0) require_injective_or_kernel(T, opt);
    return integer_power_apply(T, long(k), opt, B);  // p_n(T) = T^n, odd n
  }
  return hinfty_calculus_apply(p_alpha_fn(alpha),
                               default_regularizer_p(alpha, std::max(T.opNorm(), 1e-290)), T,
                               opt, B);
}

MatrixXd frac_power_q_apply(const ShiftSolver& T, double alpha, const QuadratureOptions& opt,
                            const MatrixXd& B) {
  double k;
  if (is_near_integer(alpha, k) && std::fmod(k, 2.0) == 0.0 && k != 0.0) {
    if (k < 0) require_injective_or_kernel(T, opt);
    return integer_power_apply(T, long(k), opt, B);  // q_m(T) = T^m, even m
  }
  return hinfty_calculus_apply(q_alpha_fn(alpha),
                               default_regularizer_q(alpha, std::max(T.opNorm(), 1e-290)), T,
                               opt, B);
}

MatrixXd frac_power_p_materialize(const ShiftSolver& T, double alpha,
                                  const QuadratureOptions& opt) {
  return frac_power_p_apply(T, alpha, opt, MatrixXd::Identity(T.dim(), T.dim()));
}

MatrixXd frac_power_q_materialize(const ShiftSolver& T, double alpha,
                                  const QuadratureOptions& opt) {
  return frac_power_q_apply(T, alpha, opt, MatrixXd::Identity(T.dim(), T.dim()));
}

MatrixXd sectorial_power_of_square_apply(const ShiftSolver& T2, double alpha,
                                         QuadratureOptions opt, const MatrixXd& B) {
  opt.kind = SectorGeometry::Kind::SingleSector;
  const double half = 0.5 * alpha;
  const double scale = std::max(T2.opNorm(), 1e-290);

  IntrinsicSliceFunction frac{"xi^(a/2)", [half](Complex z) { return std::pow(z, half); },
                              false};
  if (alpha > 0.0) {
    const int k = int(std::ceil(half)) + 2;
    IntrinsicSliceFunction reg{
        "(1+xi/c)^-k", [k, scale](Complex z) { return std::pow(1.0 + z / scale, -k); }, false};
    MatrixXd X = omega_calculus_apply(reg * frac, T2, opt, B);
    for (int i = 0; i < k; ++i) X += T2.applyA(X) / scale;
    return X;
  }
  require_injective_or_kernel(T2, opt);
  const int k = int(std::floor(std::abs(half))) + 2;
  IntrinsicSliceFunction reg{"xi^k(1+xi/c)^-2k",
                             [k, scale](Complex z) {
                               return std::pow(z / scale, k) * std::pow(1.0 + z / scale, -2 * k);
                             },
                             false};
  MatrixXd X = omega_calculus_apply(reg * frac, T2, opt, B);
  for (int i = 0; i < 2 * k; ++i) X += T2.applyA(X) / scale;
  for (int i = 0; i < k; ++i)
    X = scale * pseudo_inverse_apply(T2, X, opt.kernel_tol_factor);
  return X;
}

MatrixXd core_approximant_apply(const ShiftSolver& T, int n, int m_tilde, const MatrixXd& B) {
  MatrixXd X = B;
  for (int i = 0; i < 2 * m_tilde; ++i) X = T.applyA(X);
  for (int i = 0; i < m_tilde; ++i) X = T.solveQ(Complexd(0.0, double(n)), X);
  for (int i = 0; i < m_tilde; ++i) X = T.solveQ(Complexd(0.0, 1.0 / double(n)), X);
  return std::pow(double(n), 2 * m_tilde) * X;
}

MatrixXd pseudo_inverse_apply(const ShiftSolver& T, const MatrixXd& B,
                              double kernel_tol_factor) {
  double norm = std::max(T.opNorm(), 1e-290);
  double lo = T.minNonzeroScale(kernel_tol_factor * norm);
  double eps = (lo > 0.0) ? 1e-6 * lo : 1e-8 * norm;
  return T.applyA(T.solveQ(Complexd(0.0, eps), B));
}

}  // namespace fracgrad
