#pragma once

// Intrinsic slice functions and the scalar fractional-power branches.
//
// An intrinsic slice function is determined by its values on one complex
// half-plane: f(x + Jy) = u(x,y) + J v(x,y) with real u,v, u even and v odd
// in y. We represent it by a complex-valued callable evaluated at z = x + iy
// with y >= 0; values at paravectors are lifted through the slice unit J.

#include "fracgrad/clifford.hpp"

#include <complex>
#include <functional>
#include <string>
#include <utility>

namespace fracgrad {

using Complex = std::complex<double>;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntrinsicSliceFunction {
  std::string name;
  std::function<Complex(Complex)> eval;
  // Evaluation requires Sc(s) != 0 (the fractional-power branch cut).
  bool needs_nonzero_scalar_part = false;

  Complex operator()(Complex z) const { return eval(z); }
};

inline IntrinsicSliceFunction operator*(const IntrinsicSliceFunction& f,
                                        const IntrinsicSliceFunction& g) {
  IntrinsicSliceFunction h;
  h.name = f.name + "*" + g.name;
  h.eval = [fe = f.eval, ge = g.eval](Complex z) { return fe(z) * ge(z); };
  h.needs_nonzero_scalar_part = f.needs_nonzero_scalar_part || g.needs_nonzero_scalar_part;
  return h;
}

inline IntrinsicSliceFunction operator*(double c, const IntrinsicSliceFunction& f) {
  IntrinsicSliceFunction h;
  h.name = std::to_string(c) + "*" + f.name;
  h.eval = [c, fe = f.eval](Complex z) { return c * fe(z); };
  h.needs_nonzero_scalar_part = f.needs_nonzero_scalar_part;
  return h;
}

inline IntrinsicSliceFunction operator+(const IntrinsicSliceFunction& f,
                                        const IntrinsicSliceFunction& g) {
  IntrinsicSliceFunction h;
  h.name = f.name + "+" + g.name;
  h.eval = [fe = f.eval, ge = g.eval](Complex z) { return fe(z) + ge(z); };
  h.needs_nonzero_scalar_part = f.needs_nonzero_scalar_part || g.needs_nonzero_scalar_part;
  return h;
}

// --- scalar branch values -------------------------------------------------

// s^alpha = exp(alpha ln s) on Sc(s) > 0; for Sc(s) < 0 the two branches are
//   p_alpha(s) = -(-s)^alpha   (odd, sign-preserving)
//   q_alpha(s) =  (-s)^alpha   (even, sign-forgetting)
inline Complex p_branch(double alpha, Complex z) {
  if (z.real() > 0) return std::pow(z, alpha);
  if (z.real() < 0) return -std::pow(-z, alpha);
  throw DomainError("p_alpha: zero scalar part");
}

inline Complex q_branch(double alpha, Complex z) {
  if (z.real() > 0) return std::pow(z, alpha);
  if (z.real() < 0) return std::pow(-z, alpha);
  throw DomainError("q_alpha: zero scalar part");
}

inline IntrinsicSliceFunction p_alpha_fn(double alpha) {
  return {"p_" + std::to_string(alpha),
          [alpha](Complex z) { return p_branch(alpha, z); }, true};
}

inline IntrinsicSliceFunction q_alpha_fn(double alpha) {
  return {"q_" + std::to_string(alpha),
          [alpha](Complex z) { return q_branch(alpha, z); }, true};
}

inline IntrinsicSliceFunction identity_fn() {
  return {"s", [](Complex z) { return z; }, false};
}

inline IntrinsicSliceFunction constant_fn(double c) {
  return {std::to_string(c), [c](Complex) { return Complex(c); }, false};
}

// (1 + s^2)^{-k}
inline IntrinsicSliceFunction inv_one_plus_square_fn(int k = 1) {
  return {"(1+s^2)^-" + std::to_string(k),
          [k](Complex z) { return std::pow(1.0 + z * z, -k); }, false};
}

// s^k (1 + s^2)^{-k}, the regularizer for injective operators.
inline IntrinsicSliceFunction injective_regularizer_fn(int k) {
  return {"s^k(1+s^2)^-k",
          [k](Complex z) { return std::pow(z / (1.0 + z * z), k); }, false};
}

// --- evaluation at paravectors ---------------------------------------------

template <typename S>
Multivector<S> eval_intrinsic(const IntrinsicSliceFunction& f, const Paravector<S>& s) {
  auto d = slice_decompose(s);
  if (f.needs_nonzero_scalar_part && d.x == S(0))
    throw DomainError(f.name + ": zero scalar part");
  Complex w = f.eval(Complex(double(d.x), double(d.y)));
  return from_slice_value(s.dim(), d, w);
}

// ln(s) = ln|s| + J arg(s), arg in (-pi/2, pi/2), for Sc(s) > 0.
// Computed in real slice-plane arithmetic (independent of the complex-kernel
// evaluation path above).
template <typename S>
Multivector<S> slice_log(const Paravector<S>& s) {
  auto d = slice_decompose(s);
  if (!(d.x > S(0))) throw DomainError("slice_log: scalar part must be positive");
  S r = std::hypot(d.x, d.y);
  S arg = std::atan2(d.y, d.x);
  Multivector<S> m(s.dim());
  m[0] = std::log(r);
  for (int i = 0; i < s.dim(); ++i) m[1u << i] = d.J[i] * arg;
  return m;
}

// p_alpha / q_alpha at a paravector, in real slice-plane arithmetic.
template <typename S>
Multivector<S> frac_power_p(const Paravector<S>& s, double alpha) {
  auto d = slice_decompose(s);
  if (d.x == S(0)) throw DomainError("frac_power_p: zero scalar part");
  S r = std::hypot(d.x, d.y);
  S mag = std::pow(r, S(alpha));
  if (d.x > S(0)) {
    S arg = std::atan2(d.y, d.x);
    Multivector<S> m(s.dim());
    m[0] = mag * std::cos(alpha * arg);
    for (int i = 0; i < s.dim(); ++i) m[1u << i] = d.J[i] * mag * std::sin(alpha * arg);
    return m;
  }
  // -s lives in the slice of -J; p_alpha(s) = -(-s)^alpha.
  S arg = std::atan2(d.y, -d.x);
  Multivector<S> m(s.dim());
  m[0] = -mag * std::cos(alpha * arg);
  for (int i = 0; i < s.dim(); ++i) m[1u << i] = d.J[i] * mag * std::sin(alpha * arg);
  return m;
}

template <typename S>
Multivector<S> frac_power_q(const Paravector<S>& s, double alpha) {
  auto d = slice_decompose(s);
  if (d.x == S(0)) throw DomainError("frac_power_q: zero scalar part");
  S r = std::hypot(d.x, d.y);
  S mag = std::pow(r, S(alpha));
  S arg = (d.x > S(0)) ? std::atan2(d.y, d.x) : std::atan2(d.y, -d.x);
  S sign_v = (d.x > S(0)) ? S(1) : S(-1);
  Multivector<S> m(s.dim());
  m[0] = mag * std::cos(alpha * arg);
  for (int i = 0; i < s.dim(); ++i)
    m[1u << i] = sign_v * d.J[i] * mag * std::sin(alpha * arg);
  return m;
}

// --- function classes for the extended calculus -----------------------------

// f(s) = f_inf + (1+s^2)^{-1} (f_0 - f_inf) + ftilde(s) with ftilde decaying
// at 0 and infinity. Limits are real (the intrinsic case).
struct DecomposedFunction {
  double f0 = 0.0;
  double finf = 0.0;
  IntrinsicSliceFunction tilde;

  Complex operator()(Complex z) const {
    return finf + (f0 - finf) / (1.0 + z * z) + tilde.eval(z);
  }
};

struct Regularizer {
  enum class Kind { PositivePower, InjectivePower };

  Kind kind;
  int order;

  IntrinsicSliceFunction fn() const {
    return kind == Kind::PositivePower ? inv_one_plus_square_fn(order)
                                       : injective_regularizer_fn(order);
  }
};

}  // namespace fracgrad
