#include "fracgrad/backends.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <random>

namespace fracgrad {

namespace {

// LAPACK-style factorization of a shifted tridiagonal (diag - z, symmetric
// off-diagonal) with partial pivoting; O(n) factor, O(n) per right-hand side.
struct TridiagShiftLU {
  VectorXcd dl, d, du, du2;
  Eigen::VectorXi piv;

  void factor(const VectorXd& diag, const VectorXd& sub, Complexd z) {
    const Eigen::Index n = diag.size();
    dl = sub.cast<Complexd>();
    d = diag.cast<Complexd>();
    d.array() -= z;
    du = sub.cast<Complexd>();
    du2 = VectorXcd::Zero(n > 2 ? n - 2 : 0);
    piv.resize(n > 1 ? n - 1 : 0);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] == Complexd(0)) throw SingularAtS("tridiagonal shift solve: zero pivot");
        Complexd fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
        if (i + 2 < n) du2[i] = Complexd(0);
        piv[i] = 0;
      } else {
        Complexd fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        Complexd tmp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = tmp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        piv[i] = 1;
      }
    }
    if (std::abs(d[n - 1]) < 1e-300) throw SingularAtS("tridiagonal shift solve: zero pivot");
  }

  void solveInPlace(VectorXcd& b) const {
    const Eigen::Index n = d.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (piv[i] == 0) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        Complexd tmp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = tmp - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (Eigen::Index i = n - 3; i >= 0; --i)
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  }
};

class SymTridiagSolver final : public ShiftSolver {
 public:
  explicit SymTridiagSolver(MatrixXd A) : A_(std::move(A)), tri_(A_) {
    diag_ = tri_.diagonal();
    sub_ = tri_.subDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es;
    es.computeFromTridiagonal(diag_, sub_, Eigen::EigenvaluesOnly);
    evals_ = es.eigenvalues();
    norm_ = evals_.cwiseAbs().maxCoeff();
  }

  Eigen::Index dim() const override { return A_.rows(); }

  MatrixXd toFrame(const MatrixXd& B) const override {
    return tri_.matrixQ().transpose() * B;
  }
  MatrixXd fromFrame(const MatrixXd& B) const override { return tri_.matrixQ() * B; }

  MatrixXd solveQFrame(Complexd z, const MatrixXd& Bf) const override {
    TridiagShiftLU lu1, lu2;
    lu1.factor(diag_, sub_, std::conj(z));
    lu2.factor(diag_, sub_, z);
    MatrixXd X(Bf.rows(), Bf.cols());
    VectorXcd col(Bf.rows());
    for (Eigen::Index j = 0; j < Bf.cols(); ++j) {
      col = Bf.col(j).cast<Complexd>();
      lu1.solveInPlace(col);
      lu2.solveInPlace(col);
      X.col(j) = col.real();
    }
    return X;
  }

  MatrixXd solveQTrans(Complexd z, const MatrixXd& B) const override {
    return solveQ(z, B);  // A symmetric
  }

  MatrixXd applyAFrame(const MatrixXd& Bf) const override {
    MatrixXd X = Bf;
    X.array().colwise() *= diag_.array();
    X.topRows(Bf.rows() - 1) += sub_.asDiagonal() * Bf.bottomRows(Bf.rows() - 1);
    X.bottomRows(Bf.rows() - 1) += sub_.asDiagonal() * Bf.topRows(Bf.rows() - 1);
    return X;
  }

  MatrixXd applyA(const MatrixXd& B) const override { return A_ * B; }
  MatrixXd applyATrans(const MatrixXd& B) const override { return A_.transpose() * B; }

  double opNorm() const override { return norm_; }

  double sigmaMinQ(Complexd z) const override {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < evals_.size(); ++i) {
      double m = std::norm(Complexd(evals_[i], 0.0) - z);
      if (m < best) best = m;
    }
    return best;
  }

  const VectorXd* eigenvaluesIfKnown() const override { return &evals_; }

  double minNonzeroScale(double kernel_tol) const override {
    double best = 0.0;
    for (Eigen::Index i = 0; i < evals_.size(); ++i) {
      double a = std::abs(evals_[i]);
      if (a > kernel_tol && (best == 0.0 || a < best)) best = a;
    }
    return best;
  }

 private:
  MatrixXd A_;
  Eigen::Tridiagonalization<MatrixXd> tri_;
  VectorXd diag_, sub_, evals_;
  double norm_;
};

// Givens QR of a shifted Hessenberg matrix; solves and adjoint solves.
struct HessenbergShiftQR {
  MatrixXcd R;
  VectorXcd cs, sn;

  void factor(const MatrixXd& H, Complexd z) {
    const Eigen::Index n = H.rows();
    R = H.cast<Complexd>();
    R.diagonal().array() -= z;
    cs.resize(n - 1);
    sn.resize(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      Complexd a = R(i, i), b = R(i + 1, i);
      double r = std::hypot(std::abs(a), std::abs(b));
      if (r == 0.0) throw SingularAtS("hessenberg shift solve: zero column");
      Complexd c = a / r, s = b / r;
      cs[i] = c;
      sn[i] = s;
      // (row_i; row_{i+1}) <- ((c* s*; -s c)) * rows
      for (Eigen::Index j = i; j < n; ++j) {
        Complexd t1 = R(i, j), t2 = R(i + 1, j);
        R(i, j) = std::conj(c) * t1 + std::conj(s) * t2;
        R(i + 1, j) = -s * t1 + c * t2;
      }
    }
    if (std::abs(R(n - 1, n - 1)) < 1e-300)
      throw SingularAtS("hessenberg shift solve: singular");
  }

  void solveInPlace(VectorXcd& b) const {
    const Eigen::Index n = b.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      Complexd t1 = b[i], t2 = b[i + 1];
      b[i] = std::conj(cs[i]) * t1 + std::conj(sn[i]) * t2;
      b[i + 1] = -sn[i] * t1 + cs[i] * t2;
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      Complexd acc = b[i];
      for (Eigen::Index j = i + 1; j < n; ++j) acc -= R(i, j) * b[j];
      b[i] = acc / R(i, i);
    }
  }

  // (H - z)^H x = b via x = Q R^{-H} b.
  void solveAdjointInPlace(VectorXcd& b) const {
    const Eigen::Index n = b.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      Complexd acc = b[i];
      for (Eigen::Index j = 0; j < i; ++j) acc -= std::conj(R(j, i)) * b[j];
      b[i] = acc / std::conj(R(i, i));
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) {
      Complexd t1 = b[i], t2 = b[i + 1];
      b[i] = cs[i] * t1 - std::conj(sn[i]) * t2;
      b[i + 1] = sn[i] * t1 + std::conj(cs[i]) * t2;
    }
  }
};

class HessenbergSolver final : public ShiftSolver {
 public:
  explicit HessenbergSolver(MatrixXd A) : A_(std::move(A)), hess_(A_) {
    H_ = hess_.matrixH();
    norm_ = power_iteration_norm(
        A_.rows(), [&](const VectorXd& x) { return VectorXd(A_ * x); },
        [&](const VectorXd& x) { return VectorXd(A_.transpose() * x); });
  }

  Eigen::Index dim() const override { return A_.rows(); }

  MatrixXd toFrame(const MatrixXd& B) const override {
    return hess_.matrixQ().transpose() * B;
  }
  MatrixXd fromFrame(const MatrixXd& B) const override { return hess_.matrixQ() * B; }

  MatrixXd solveQFrame(Complexd z, const MatrixXd& Bf) const override {
    const auto& [qr1, qr2] = factors(z);
    MatrixXd X(Bf.rows(), Bf.cols());
    VectorXcd col(Bf.rows());
    for (Eigen::Index j = 0; j < Bf.cols(); ++j) {
      col = Bf.col(j).cast<Complexd>();
      qr1.solveInPlace(col);  // (H - conj z)^{-1}
      qr2.solveInPlace(col);  // (H - z)^{-1}
      X.col(j) = col.real();
    }
    return X;
  }

  // Q^{-T}: (H^T - z)^{-1} = ((H - conj z)^H)^{-1} via the adjoint solve.
  MatrixXd solveQTrans(Complexd z, const MatrixXd& B) const override {
    const auto& [qr1, qr2] = factors(z);
    MatrixXd Bf = toFrame(B);
    MatrixXd X(Bf.rows(), Bf.cols());
    VectorXcd col(Bf.rows());
    for (Eigen::Index j = 0; j < Bf.cols(); ++j) {
      col = Bf.col(j).cast<Complexd>();
      qr1.solveAdjointInPlace(col);  // (H^T - z)^{-1}
      qr2.solveAdjointInPlace(col);  // (H^T - conj z)^{-1}
      X.col(j) = col.real();
    }
    return fromFrame(X);
  }

  MatrixXd applyAFrame(const MatrixXd& Bf) const override { return H_ * Bf; }
  MatrixXd applyA(const MatrixXd& B) const override { return A_ * B; }
  MatrixXd applyATrans(const MatrixXd& B) const override { return A_.transpose() * B; }

  double opNorm() const override { return norm_; }

  double sigmaMinQ(Complexd z) const override {
    try {
      const auto& [qr1, qr2] = factors(z);
      // 1 / ||Q^{-1}|| via power iteration on Q^{-T} Q^{-1} (frame-invariant).
      const Eigen::Index n = H_.rows();
      std::mt19937_64 rng(2357);
      std::normal_distribution<double> nd;
      VectorXcd x(n);
      for (Eigen::Index i = 0; i < n; ++i) x[i] = Complexd(nd(rng), 0.0);
      x /= x.norm();
      double inv_norm2 = 0.0;
      for (int it = 0; it < 30; ++it) {
        VectorXcd y = x;
        qr1.solveInPlace(y);
        qr2.solveInPlace(y);
        qr2.solveAdjointInPlace(y);
        qr1.solveAdjointInPlace(y);
        inv_norm2 = y.norm();
        if (!std::isfinite(inv_norm2) || inv_norm2 > 1e280) return 0.0;
        x = y / inv_norm2;
      }
      return 1.0 / std::sqrt(inv_norm2);
    } catch (const SingularAtS&) {
      return 0.0;
    }
  }

 private:
  const std::pair<HessenbergShiftQR, HessenbergShiftQR>& factors(Complexd z) const {
    if (!cache_ || cache_z_ != z) {
      auto fresh = std::make_unique<std::pair<HessenbergShiftQR, HessenbergShiftQR>>();
      fresh->first.factor(H_, std::conj(z));
      fresh->second.factor(H_, z);
      cache_ = std::move(fresh);
      cache_z_ = z;
    }
    return *cache_;
  }

  MatrixXd A_;
  Eigen::HessenbergDecomposition<MatrixXd> hess_;
  MatrixXd H_;
  double norm_;
  mutable std::unique_ptr<std::pair<HessenbergShiftQR, HessenbergShiftQR>> cache_;
  mutable Complexd cache_z_{std::numeric_limits<double>::quiet_NaN(), 0.0};
};

class SparseShiftSolver final : public ShiftSolver {
 public:
  explicit SparseShiftSolver(SparseMat A) : A_(std::move(A)), At_(A_.transpose()) {
    A_.makeCompressed();
    At_.makeCompressed();
    norm_ = power_iteration_norm(
        A_.rows(), [&](const VectorXd& x) { return VectorXd(A_ * x); },
        [&](const VectorXd& x) { return VectorXd(At_ * x); });
  }

  Eigen::Index dim() const override { return A_.rows(); }

  MatrixXd solveQFrame(Complexd z, const MatrixXd& Bf) const override {
    const auto& lu = factor(A_, z, cache_, cache_z_);
    // For real A: (A - conj z)^{-1} y = conj((A - z)^{-1} conj y), so one
    // factorization serves both shifts.
    MatrixXcd Y = lu.solve(Bf.cast<Complexd>());
    MatrixXcd X = lu.solve(Y.conjugate());
    return X.real();
  }

  MatrixXd solveQTrans(Complexd z, const MatrixXd& B) const override {
    const auto& lu = factor(At_, z, cacheT_, cacheT_z_);
    MatrixXcd Y = lu.solve(B.cast<Complexd>());
    MatrixXcd X = lu.solve(Y.conjugate());
    return X.real();
  }

  MatrixXd applyAFrame(const MatrixXd& Bf) const override { return A_ * Bf; }
  MatrixXd applyA(const MatrixXd& B) const override { return A_ * B; }
  MatrixXd applyATrans(const MatrixXd& B) const override { return At_ * B; }

  double opNorm() const override { return norm_; }

  double sigmaMinQ(Complexd z) const override {
    using CSparse = Eigen::SparseMatrix<Complexd>;
    Eigen::SparseLU<CSparse> lu, luT;
    CSparse Az = shifted(A_, z), Atz = shifted(At_, z);
    lu.compute(Az);
    luT.compute(Atz);
    if (lu.info() != Eigen::Success || luT.info() != Eigen::Success) return 0.0;
    // Q^{-1} and Q^{-T} through one factorization each, real vectors.
    auto qsolve = [&](const VectorXd& b) {
      VectorXcd y = lu.solve(b.cast<Complexd>());
      return VectorXd(lu.solve(y.conjugate()).real());
    };
    auto qtsolve = [&](const VectorXd& b) {
      VectorXcd y = luT.solve(b.cast<Complexd>());
      return VectorXd(luT.solve(y.conjugate()).real());
    };
    std::mt19937_64 rng(2357);
    std::normal_distribution<double> nd;
    VectorXd x(A_.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = nd(rng);
    x /= x.norm();
    double inv_norm2 = 1.0;
    for (int it = 0; it < 30; ++it) {
      VectorXd y = qtsolve(qsolve(x));
      inv_norm2 = y.norm();
      if (!std::isfinite(inv_norm2) || inv_norm2 > 1e280) return 0.0;
      x = y / inv_norm2;
    }
    return 1.0 / std::sqrt(inv_norm2);
  }

 private:
  static Eigen::SparseMatrix<Complexd> shifted(const SparseMat& A, Complexd z) {
    Eigen::SparseMatrix<Complexd> Az = A.cast<Complexd>();
    Eigen::SparseMatrix<Complexd> I(A.rows(), A.cols());
    I.setIdentity();
    Az -= z * I;
    Az.makeCompressed();
    return Az;
  }

  using CLU = Eigen::SparseLU<Eigen::SparseMatrix<Complexd>>;

  static const CLU& factor(const SparseMat& A, Complexd z, std::unique_ptr<CLU>& slot,
                           Complexd& slot_z) {
    if (!slot || slot_z != z) {
      auto fresh = std::make_unique<CLU>();
      fresh->compute(shifted(A, z));
      if (fresh->info() != Eigen::Success)
        throw SingularAtS("sparse shifted factorization failed");
      slot = std::move(fresh);
      slot_z = z;
    }
    return *slot;
  }

  SparseMat A_, At_;
  double norm_;
  mutable std::unique_ptr<CLU> cache_, cacheT_;
  mutable Complexd cache_z_{std::numeric_limits<double>::quiet_NaN(), 0.0};
  mutable Complexd cacheT_z_{std::numeric_limits<double>::quiet_NaN(), 0.0};
};

}  // namespace

double power_iteration_norm(Eigen::Index n,
                            const std::function<VectorXd(const VectorXd&)>& applyM,
                            const std::function<VectorXd(const VectorXd&)>& applyMT,
                            int iters, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = nd(rng);
  x /= x.norm();
  double lam = 0.0;
  for (int it = 0; it < iters; ++it) {
    VectorXd y = applyMT(applyM(x));
    lam = y.norm();
    if (lam == 0.0) return 0.0;
    x = y / lam;
  }
  return std::sqrt(lam);
}

std::unique_ptr<ShiftSolver> make_dense_solver(MatrixXd A) {
  double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if (asym <= 1e-13 * scale) return std::make_unique<SymTridiagSolver>(std::move(A));
  return std::make_unique<HessenbergSolver>(std::move(A));
}

std::unique_ptr<ShiftSolver> make_sparse_solver(SparseMat A) {
  return std::make_unique<SparseShiftSolver>(std::move(A));
}

std::unique_ptr<ShiftSolver> make_solver(const SparseMat& A, Eigen::Index dense_threshold) {
  if (A.rows() <= dense_threshold) return make_dense_solver(MatrixXd(A));
  return make_sparse_solver(A);
}

}  // namespace fracgrad
