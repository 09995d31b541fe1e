#pragma once

// Real Clifford algebra R_n (e_i^2 = -1, e_i e_j = -e_j e_i) with basis blades
// e_A indexed by bitmasks A over {1,...,n}, stored in lexicographic mask order.
// Dimension capped at n <= 8 (2^n <= 256 coefficients).

#include <Eigen/Dense>

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace fracgrad {

inline constexpr int kMaxAlgebraDim = 8;

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number of transpositions (mod 2) needed to merge the sorted index lists of
// blades a and b, as a sign.
inline int reordering_sign(unsigned a, unsigned b) {
  int swaps = 0;
  a >>= 1;
  while (a) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

// Sign of e_A e_B: reordering sign times (-1)^|A ∩ B| from e_i^2 = -1.
inline int blade_product_sign(unsigned a, unsigned b) {
  int s = reordering_sign(a, b);
  if (std::popcount(a & b) & 1) s = -s;
  return s;
}

namespace detail {
// Cached 2^n x 2^n sign table per algebra dimension.
inline const std::vector<signed char>& sign_table(int n) {
  static std::array<std::vector<signed char>, kMaxAlgebraDim + 1> tables;
  auto& tab = tables[n];
  if (tab.empty()) {
    const unsigned dim = 1u << n;
    tab.resize(std::size_t(dim) * dim);
    for (unsigned a = 0; a < dim; ++a)
      for (unsigned b = 0; b < dim; ++b)
        tab[std::size_t(a) * dim + b] = static_cast<signed char>(blade_product_sign(a, b));
  }
  return tab;
}
}  // namespace detail

// General element of R_n. Coefficients indexed by blade mask.
template <typename Scalar = double>
class Multivector {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Multivector() : n_(0), c_(Coeffs::Zero(1)) {}
  explicit Multivector(int n) : n_(check_dim(n)), c_(Coeffs::Zero(1 << n)) {}
  Multivector(int n, Coeffs coeffs) : n_(check_dim(n)), c_(std::move(coeffs)) {
    if (c_.size() != (1 << n_)) throw AlgebraError("coefficient count != 2^n");
  }

  static Multivector scalar(int n, Scalar v) {
    Multivector m(n);
    m.c_[0] = v;
    return m;
  }
  static Multivector basis(int n, unsigned mask) {
    Multivector m(n);
    m.c_[mask] = Scalar(1);
    return m;
  }

  int dim() const { return n_; }
  Eigen::Index size() const { return c_.size(); }
  const Coeffs& coeffs() const { return c_; }
  Scalar& operator[](unsigned mask) { return c_[mask]; }
  Scalar operator[](unsigned mask) const { return c_[mask]; }

  Scalar scalarPart() const { return c_[0]; }

  Multivector gradeProjection(int k) const {
    Multivector out(n_);
    for (unsigned a = 0; a < unsigned(c_.size()); ++a)
      if (std::popcount(a) == k) out.c_[a] = c_[a];
    return out;
  }

  // Frobenius norm of the coefficient vector.
  Scalar norm() const { return c_.norm(); }

  // Clifford conjugate: e_A -> (-1)^{k(k+1)/2} e_A with k = |A|.
  Multivector conjugate() const {
    Multivector out(n_);
    for (unsigned a = 0; a < unsigned(c_.size()); ++a) {
      int k = std::popcount(a);
      int s = ((k * (k + 1) / 2) & 1) ? -1 : 1;
      out.c_[a] = Scalar(s) * c_[a];
    }
    return out;
  }

  Multivector operator+(const Multivector& o) const {
    check_same(o);
    return Multivector(n_, c_ + o.c_);
  }
  Multivector operator-(const Multivector& o) const {
    check_same(o);
    return Multivector(n_, c_ - o.c_);
  }
  Multivector operator-() const { return Multivector(n_, -c_); }
  Multivector operator*(Scalar v) const { return Multivector(n_, c_ * v); }
  friend Multivector operator*(Scalar v, const Multivector& m) { return m * v; }

  // Geometric product via the blade sign table.
  Multivector operator*(const Multivector& o) const {
    check_same(o);
    const unsigned dim = 1u << n_;
    const auto& tab = detail::sign_table(n_);
    Multivector out(n_);
    for (unsigned a = 0; a < dim; ++a) {
      const Scalar xa = c_[a];
      if (xa == Scalar(0)) continue;
      const signed char* row = tab.data() + std::size_t(a) * dim;
      for (unsigned b = 0; b < dim; ++b)
        out.c_[a ^ b] += Scalar(row[b]) * xa * o.c_[b];
    }
    return out;
  }

 private:
  static int check_dim(int n) {
    if (n < 1 || n > kMaxAlgebraDim) throw AlgebraError("algebra dimension out of range");
    return n;
  }
  void check_same(const Multivector& o) const {
    if (n_ != o.n_) throw AlgebraError("algebra dimension mismatch");
  }

  int n_;
  Coeffs c_;
};

using Multivectord = Multivector<double>;

// geometric_product as a free function, matching the operator form.
template <typename S>
Multivector<S> geometric_product(const Multivector<S>& a, const Multivector<S>& b) {
  return a * b;
}

// Matrix of left multiplication by c on R_n (the left regular representation).
template <typename S>
Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> left_mult_matrix(const Multivector<S>& c) {
  const unsigned dim = 1u << c.dim();
  const auto& tab = detail::sign_table(c.dim());
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> L =
      Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(dim, dim);
  for (unsigned a = 0; a < dim; ++a) {
    if (c[a] == S(0)) continue;
    const signed char* row = tab.data() + std::size_t(a) * dim;
    for (unsigned b = 0; b < dim; ++b) L(a ^ b, b) += S(row[b]) * c[a];
  }
  return L;
}

// Paravector s = s0 + sum_i s_i e_i, the carrier of the S-spectrum.
template <typename Scalar = double>
struct Paravector {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar s0 = Scalar(0);
  Vec vec;  // n components

  Paravector() = default;
  Paravector(Scalar scalar_part, Vec v) : s0(scalar_part), vec(std::move(v)) {}
  static Paravector real(int n, Scalar x) { return Paravector(x, Vec::Zero(n)); }

  int dim() const { return int(vec.size()); }
  Scalar vecNorm() const { return vec.norm(); }
  Scalar squaredNorm() const { return s0 * s0 + vec.squaredNorm(); }
  Scalar norm() const { return std::sqrt(squaredNorm()); }

  Paravector conjugate() const { return Paravector(s0, -vec); }

  Multivector<Scalar> toMultivector() const {
    Multivector<Scalar> m(dim());
    m[0] = s0;
    for (int i = 0; i < dim(); ++i) m[1u << i] = vec[i];
    return m;
  }
};

using Paravectord = Paravector<double>;

// s = x + J y with y >= 0 and unit imaginary J. On the real axis the slice
// unit is not determined; we return J = e_1 and flag the degeneracy.
template <typename S>
struct SliceDecomposition {
  S x;
  S y;
  typename Paravector<S>::Vec J;  // unit vector part
  bool degenerate;
};

template <typename S>
SliceDecomposition<S> slice_decompose(const Paravector<S>& s) {
  SliceDecomposition<S> d;
  d.x = s.s0;
  d.y = s.vecNorm();
  if (d.y == S(0)) {
    d.J = Paravector<S>::Vec::Zero(s.dim());
    d.J[0] = S(1);
    d.degenerate = true;
  } else {
    d.J = s.vec / d.y;
    d.degenerate = false;
  }
  return d;
}

// Lift a slice-plane value u + J v back to the algebra.
template <typename S>
Multivector<S> from_slice_value(int n, const SliceDecomposition<S>& d, std::complex<S> w) {
  Multivector<S> m(n);
  m[0] = w.real();
  for (int i = 0; i < n; ++i) m[1u << i] = d.J[i] * w.imag();
  return m;
}

// Double sector D_omega around the real axis, or the sector S_omega around
// the positive real half-axis (used for powers of squared operators).
struct SectorGeometry {
  enum class Kind { DoubleSector, SingleSector };

  double omega;
  Kind kind = Kind::DoubleSector;

  // Membership via the slice-plane argument of s.
  template <typename S>
  bool contains(const Paravector<S>& s) const {
    auto d = slice_decompose(s);
    if (d.x == S(0) && d.y == S(0)) return false;
    double arg = std::atan2(double(d.y), double(d.x));  // in [0, pi]
    if (kind == Kind::SingleSector) return arg < omega;
    return arg < omega || arg > M_PI - omega;
  }
};

}  // namespace fracgrad
