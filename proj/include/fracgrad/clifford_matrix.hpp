#pragma once

// Operators on the finite Clifford module V = (R_n)^N given as N x N arrays
// of multivectors acting by left multiplication, and their image under the
// left regular representation (a real 2^n N x 2^n N matrix).

#include "fracgrad/clifford.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace fracgrad {

template <typename Scalar = double>
class CliffordMatrix {
 public:
  using MV = Multivector<Scalar>;

  CliffordMatrix(int n, int N) : n_(n), N_(N), entries_(std::size_t(N) * N, MV(n)) {}

  static CliffordMatrix identity(int n, int N) {
    CliffordMatrix T(n, N);
    for (int i = 0; i < N; ++i) T(i, i) = MV::scalar(n, Scalar(1));
    return T;
  }
  static CliffordMatrix scalar(int n, int N, Scalar c) {
    CliffordMatrix T(n, N);
    for (int i = 0; i < N; ++i) T(i, i) = MV::scalar(n, c);
    return T;
  }

  int algebraDim() const { return n_; }
  int moduleRank() const { return N_; }
  Eigen::Index repDim() const { return Eigen::Index(N_) << n_; }

  MV& operator()(int i, int j) { return entries_[std::size_t(i) * N_ + j]; }
  const MV& operator()(int i, int j) const { return entries_[std::size_t(i) * N_ + j]; }

  // (Tv)_i = sum_j T_ij v_j, right-linear over R_n.
  std::vector<MV> apply(const std::vector<MV>& v) const {
    if (int(v.size()) != N_) throw AlgebraError("module rank mismatch");
    std::vector<MV> out(N_, MV(n_));
    for (int i = 0; i < N_; ++i)
      for (int j = 0; j < N_; ++j) out[i] = out[i] + (*this)(i, j) * v[j];
    return out;
  }

  CliffordMatrix operator*(const CliffordMatrix& o) const {
    if (n_ != o.n_ || N_ != o.N_) throw AlgebraError("operator shape mismatch");
    CliffordMatrix out(n_, N_);
    for (int i = 0; i < N_; ++i)
      for (int j = 0; j < N_; ++j)
        for (int k = 0; k < N_; ++k)
          out(i, j) = out(i, j) + (*this)(i, k) * o(k, j);
    return out;
  }

 private:
  int n_, N_;
  std::vector<MV> entries_;
};

using CliffordMatrixd = CliffordMatrix<double>;

// vec(v): component-major, 2^n blade coefficients contiguous per component.
template <typename S>
Eigen::Matrix<S, Eigen::Dynamic, 1> vectorize(const std::vector<Multivector<S>>& v) {
  const Eigen::Index nb = v.empty() ? 1 : v[0].size();
  Eigen::Matrix<S, Eigen::Dynamic, 1> out(Eigen::Index(v.size()) * nb);
  for (std::size_t i = 0; i < v.size(); ++i) out.segment(Eigen::Index(i) * nb, nb) = v[i].coeffs();
  return out;
}

template <typename S>
std::vector<Multivector<S>> unvectorize(int n, const Eigen::Matrix<S, Eigen::Dynamic, 1>& x) {
  const Eigen::Index nb = Eigen::Index(1) << n;
  std::vector<Multivector<S>> v(std::size_t(x.size() / nb), Multivector<S>(n));
  for (std::size_t i = 0; i < v.size(); ++i) {
    typename Multivector<S>::Coeffs c = x.segment(Eigen::Index(i) * nb, nb);
    v[i] = Multivector<S>(n, std::move(c));
  }
  return v;
}

// Real-matrix image: vec(Tv) = rep(T) vec(v) exactly.
template <typename S>
Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> real_representation(const CliffordMatrix<S>& T) {
  const Eigen::Index nb = Eigen::Index(1) << T.algebraDim();
  Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> R =
      Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>::Zero(T.repDim(), T.repDim());
  for (int i = 0; i < T.moduleRank(); ++i)
    for (int j = 0; j < T.moduleRank(); ++j) {
      auto L = left_mult_matrix(T(i, j));
      if (L.cwiseAbs().maxCoeff() != S(0)) R.block(i * nb, j * nb, nb, nb) = L;
    }
  return R;
}

}  // namespace fracgrad
