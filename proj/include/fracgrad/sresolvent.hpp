#pragma once

// Pseudo-resolvent Q_s[T] = T^2 - 2 s0 T + |s|^2, the left and right
// S-resolvents, S-spectrum scanning over the (s0, s1) half-plane, and the
// bisectorial resolvent-bound certificate.

#include "fracgrad/backends.hpp"
#include "fracgrad/clifford.hpp"

#include <vector>

namespace fracgrad {

inline Complexd slice_coordinate(const Paravectord& s) {
  return Complexd(s.s0, s.vecNorm());
}

struct PseudoResolventResult {
  VectorXd u;
  double residual;  // ||Q_s u - b|| / ||b||
};

// Solve Q_s[T] u = b; throws SingularAtS when s is numerically in the
// S-spectrum (sigma_min below tol_factor * max(||T||^2, 1)).
PseudoResolventResult pseudo_resolvent_solve(const ShiftSolver& T, const Paravectord& s,
                                             const VectorXd& b, double tol_factor = 1e-12);

// Materialized S-resolvents at s = x + J y, given as the signed slice
// coordinate z = x + i y together with K, the real representation of left
// multiplication by the slice unit J (K^2 = -I). For real s, K is ignored.
MatrixXd s_resolvent_left(const ShiftSolver& T, Complexd z, const MatrixXd& K);
MatrixXd s_resolvent_right(const ShiftSolver& T, Complexd z, const MatrixXd& K);

// Operator norm || Q^{-1} sbar - T Q^{-1} || without materializing, via power
// iteration; applyK applies the slice-unit left multiplication.
double s_resolvent_left_norm(const ShiftSolver& T, Complexd z,
                             const std::function<VectorXd(const VectorXd&)>& applyK,
                             int iters = 80);

struct ScanPoint {
  double s0;
  double s1;
  double sigma_min;
  bool candidate;
};

// A candidate (s0, s1) stands for the whole sphere s0 + S s1: Q_s depends on
// s only through (s0, |s|), so the scan is axially symmetric by construction.
struct SpectrumCandidate {
  double s0;
  double s1;
  double sigma_min;
};

struct SpectrumScanResult {
  std::vector<ScanPoint> grid;  // row-major, s1 outer then s0
  int nx, ny;
  double s0_min, s0_max, s1_min, s1_max;
  std::vector<SpectrumCandidate> candidates;  // polished local minima under threshold
};

struct ScanOptions {
  double s0_min, s0_max;
  double s1_min = 0.0;
  double s1_max;
  int nx = 81;
  int ny = 41;
  // confirmation threshold: sigma_min < tol_spec_factor * max(||T||^2, 1)
  double tol_spec_factor = 1e-8;
  // coarse local minima are polished by Nelder-Mead before thresholding
  int polish_iters = 120;
};

SpectrumScanResult s_spectrum_scan(const ShiftSolver& T, const ScanOptions& opt);

struct CertificateSample {
  Paravectord s;
  double resolvent_norm;         // ||S_L^{-1}(s, T)||
  double scaled;                 // |s| * norm
};

struct BisectorialCertificate {
  double omega;
  std::vector<double> phis;
  std::vector<double> C_phi;                 // empirical sup of |s| ||S_L^-1|| per phi
  std::vector<std::vector<CertificateSample>> samples;
  bool passed;
  std::string failure;
};

struct CertificatePlan {
  int radii = 12;          // log-spaced radii per angle for norm samples
  double r_lo_factor = 1e-3;
  double r_hi_factor = 1e3;
  int angles = 3;          // slice-plane angles between phi and pi/2
  int leak_sweep_radii = 96;        // fine sigma_min sweep per angle
  double sigma_tol_factor = 1e-10;  // absolute spectrum-leak floor
  double bound = std::numeric_limits<double>::infinity();  // user bound on C_phi
};

// applyKs: left multiplication by each sampled slice unit J (K^2 = -I).
BisectorialCertificate bisectorial_certificate(
    const ShiftSolver& T, double omega, const std::vector<double>& phis,
    const std::vector<std::function<VectorXd(const VectorXd&)>>& applyKs,
    const CertificatePlan& plan);

}  // namespace fracgrad
