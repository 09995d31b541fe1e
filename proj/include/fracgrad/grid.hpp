#pragma once

// Periodic grid discretization of the torus [0,L)^n and the layout of the
// Clifford module over it. Module vectors are ordered grid-major with the
// 2^n blade coefficients contiguous per grid point, axis 0 fastest, so that
// kron(grid_op, blade_op) matches the flat indexing.

#include "fracgrad/clifford.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace fracgrad {

using SparseMat = Eigen::SparseMatrix<double>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct GridSpec {
  int n = 3;       // spatial dimension
  int m = 4;       // points per axis, even and >= 4
  double L = 1.0;  // period per axis

  GridSpec() = default;
  GridSpec(int n_, int m_, double L_) : n(n_), m(m_), L(L_) {
    if (n < 1 || n > kMaxAlgebraDim) throw AlgebraError("grid dimension out of range");
    if (m < 4 || m % 2 != 0) throw AlgebraError("grid points per axis must be even and >= 4");
  }

  double h() const { return L / m; }
  Eigen::Index points() const {
    Eigen::Index N = 1;
    for (int i = 0; i < n; ++i) N *= m;
    return N;
  }
  Eigen::Index bladeCount() const { return Eigen::Index(1) << n; }
  Eigen::Index moduleDim() const { return points() * bladeCount(); }

  // flat grid index, axis 0 fastest
  Eigen::Index flat(const std::vector<int>& j) const {
    Eigen::Index f = 0;
    for (int i = n - 1; i >= 0; --i) f = f * m + j[i];
    return f;
  }
  double coord(int j) const { return L * j / m; }
};

// Sparse shift by `offset` grid cells along `axis` (periodic).
inline SparseMat axis_shift(const GridSpec& g, int axis, int offset) {
  const Eigen::Index N = g.points();
  Eigen::Index stride = 1;
  for (int i = 0; i < axis; ++i) stride *= g.m;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(N);
  for (Eigen::Index f = 0; f < N; ++f) {
    int j = int((f / stride) % g.m);
    int jj = ((j + offset) % g.m + g.m) % g.m;
    Eigen::Index src = f + Eigen::Index(jj - j) * stride;
    trip.emplace_back(f, src, 1.0);
  }
  SparseMat S(N, N);
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

// Central difference along an axis: (u(x+h) - u(x-h)) / 2h.
inline SparseMat central_diff(const GridSpec& g, int axis) {
  SparseMat D = axis_shift(g, axis, +1);
  D -= axis_shift(g, axis, -1);
  D *= 1.0 / (2.0 * g.h());
  return D;
}

inline SparseMat sparse_identity(Eigen::Index n) {
  SparseMat I(n, n);
  I.setIdentity();
  return I;
}

// kron(G, B) with grid-major/blade-minor layout.
inline SparseMat kron_grid_blade(const SparseMat& G, const MatrixXd& B) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(std::size_t(G.nonZeros()) * std::size_t(B.size()));
  const Eigen::Index nb = B.rows();
  for (int k = 0; k < G.outerSize(); ++k)
    for (SparseMat::InnerIterator it(G, k); it; ++it)
      for (Eigen::Index a = 0; a < nb; ++a)
        for (Eigen::Index b = 0; b < nb; ++b)
          if (B(a, b) != 0.0)
            trip.emplace_back(it.row() * nb + a, it.col() * nb + b, it.value() * B(a, b));
  SparseMat K(G.rows() * nb, G.cols() * nb);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

// Left multiplication by a Clifford constant on the whole module.
inline SparseMat module_left_mult(const GridSpec& g, const Multivectord& c) {
  return kron_grid_blade(sparse_identity(g.points()), left_mult_matrix(c));
}

// Scalar grid function embedded into blade channel `mask`.
inline VectorXd embed_blade(const GridSpec& g, const VectorXd& f, unsigned mask = 0) {
  VectorXd v = VectorXd::Zero(g.moduleDim());
  const Eigen::Index nb = g.bladeCount();
  for (Eigen::Index p = 0; p < g.points(); ++p) v[p * nb + mask] = f[p];
  return v;
}

inline VectorXd extract_blade(const GridSpec& g, const VectorXd& v, unsigned mask) {
  VectorXd f(g.points());
  const Eigen::Index nb = g.bladeCount();
  for (Eigen::Index p = 0; p < g.points(); ++p) f[p] = v[p * nb + mask];
  return f;
}

// Squared coefficient mass per blade grade 0..n.
inline std::vector<double> grade_masses(const GridSpec& g, const VectorXd& v) {
  std::vector<double> mass(g.n + 1, 0.0);
  const Eigen::Index nb = g.bladeCount();
  for (Eigen::Index p = 0; p < g.points(); ++p)
    for (Eigen::Index a = 0; a < nb; ++a)
      mass[std::popcount(unsigned(a))] += v[p * nb + a] * v[p * nb + a];
  return mass;
}

// Exact kernel of the periodic central difference: tensor combinations of
// the constant and Nyquist (checkerboard) modes per axis, independent of any
// positive coefficient field. Orthonormal columns, one block per blade.
inline MatrixXd grid_kernel_basis(const GridSpec& g) {
  const Eigen::Index N = g.points();
  const Eigen::Index nb = g.bladeCount();
  const int nmodes = 1 << g.n;  // per-axis choice of {constant, Nyquist}
  MatrixXd gridmodes(N, nmodes);
  for (int mode = 0; mode < nmodes; ++mode) {
    for (Eigen::Index f = 0; f < N; ++f) {
      double val = 1.0;
      Eigen::Index r = f;
      for (int ax = 0; ax < g.n; ++ax) {
        int j = int(r % g.m);
        r /= g.m;
        if (mode & (1 << ax)) val *= (j % 2 == 0) ? 1.0 : -1.0;
      }
      gridmodes(f, mode) = val;
    }
  }
  gridmodes /= std::sqrt(double(N));
  MatrixXd V = MatrixXd::Zero(g.moduleDim(), Eigen::Index(nmodes) * nb);
  for (int mode = 0; mode < nmodes; ++mode)
    for (Eigen::Index a = 0; a < nb; ++a)
      for (Eigen::Index p = 0; p < N; ++p)
        V(p * nb + a, Eigen::Index(mode) * nb + a) = gridmodes(p, mode);
  return V;
}

// Clifford-valued L^2 pairing <u,v> = sum_x conj(u(x)) v(x) h^n.
inline Multivectord clifford_inner_product(const GridSpec& g, const VectorXd& u,
                                           const VectorXd& v) {
  const Eigen::Index nb = g.bladeCount();
  const double vol = std::pow(g.h(), g.n);
  Multivectord acc(g.n);
  Multivectord uu(g.n), vv(g.n);
  for (Eigen::Index p = 0; p < g.points(); ++p) {
    for (Eigen::Index a = 0; a < nb; ++a) {
      uu[unsigned(a)] = u[p * nb + a];
      vv[unsigned(a)] = v[p * nb + a];
    }
    acc = acc + uu.conjugate() * vv;
  }
  return acc * vol;
}

// Discrete L^2 norm with volume weight h^{n/2}.
inline double l2_norm(const GridSpec& g, const VectorXd& v) {
  return v.norm() * std::pow(g.h(), g.n / 2.0);
}

}  // namespace fracgrad
