#include "fracgrad/sresolvent.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <array>
#include <random>

namespace fracgrad {

namespace {

double spectrum_tol(const ShiftSolver& T, double factor) {
  double n = T.opNorm();
  return factor * std::max(n * n, 1.0);
}

// S_L^{-1}(s,T) b = Q^{-1}(sbar b) - T Q^{-1} b with sbar acting as
// s0 - s1 K by left multiplication.
VectorXd apply_sresolvent_left(const ShiftSolver& T, Complexd z,
                               const std::function<VectorXd(const VectorXd&)>& applyK,
                               const VectorXd& b) {
  VectorXd sbar_b = z.real() * b;
  if (z.imag() != 0.0) sbar_b -= z.imag() * applyK(b);
  VectorXd u1 = T.solveQ(z, sbar_b);
  VectorXd u2 = T.solveQ(z, b);
  return u1 - T.applyA(u2);
}

// M^T y = L_sbar^T Q^{-T} y - Q^{-T} A^T y, with L_sbar^T = s0 + s1 K.
VectorXd apply_sresolvent_left_trans(const ShiftSolver& T, Complexd z,
                                     const std::function<VectorXd(const VectorXd&)>& applyK,
                                     const VectorXd& y) {
  VectorXd w = T.solveQTrans(z, y);
  VectorXd out = z.real() * w;
  if (z.imag() != 0.0) out += z.imag() * applyK(w);
  out -= T.solveQTrans(z, T.applyATrans(y));
  return out;
}

}  // namespace

PseudoResolventResult pseudo_resolvent_solve(const ShiftSolver& T, const Paravectord& s,
                                             const VectorXd& b, double tol_factor) {
  Complexd z = slice_coordinate(s);
  double smin = T.sigmaMinQ(z);
  if (smin < spectrum_tol(T, tol_factor))
    throw SingularAtS("pseudo-resolvent: s is numerically in the S-spectrum");
  PseudoResolventResult r;
  r.u = T.solveQ(z, b);
  VectorXd Au = T.applyA(r.u);
  VectorXd Qu = T.applyA(Au) - 2.0 * z.real() * Au + std::norm(z) * r.u;
  r.residual = (Qu - b).norm() / std::max(b.norm(), 1e-290);
  return r;
}

MatrixXd s_resolvent_left(const ShiftSolver& T, Complexd z, const MatrixXd& K) {
  MatrixXd I = MatrixXd::Identity(T.dim(), T.dim());
  MatrixXd Lsbar = z.real() * I;
  if (z.imag() != 0.0) Lsbar -= z.imag() * K;
  MatrixXd Qi_sbar = T.solveQ(z, Lsbar);
  MatrixXd Qi = T.solveQ(z, I);
  return Qi_sbar - T.applyA(Qi);
}

MatrixXd s_resolvent_right(const ShiftSolver& T, Complexd z, const MatrixXd& K) {
  MatrixXd I = MatrixXd::Identity(T.dim(), T.dim());
  MatrixXd Qi = T.solveQ(z, I);
  MatrixXd out = z.real() * Qi - T.applyA(Qi);
  if (z.imag() != 0.0) out -= z.imag() * (K * Qi);
  return out;
}

double s_resolvent_left_norm(const ShiftSolver& T, Complexd z,
                             const std::function<VectorXd(const VectorXd&)>& applyK,
                             int iters) {
  return power_iteration_norm(
      T.dim(), [&](const VectorXd& x) { return apply_sresolvent_left(T, z, applyK, x); },
      [&](const VectorXd& y) { return apply_sresolvent_left_trans(T, z, applyK, y); },
      iters);
}

SpectrumScanResult s_spectrum_scan(const ShiftSolver& T, const ScanOptions& opt) {
  SpectrumScanResult res;
  res.nx = opt.nx;
  res.ny = opt.ny;
  res.s0_min = opt.s0_min;
  res.s0_max = opt.s0_max;
  res.s1_min = opt.s1_min;
  res.s1_max = opt.s1_max;
  res.grid.resize(std::size_t(opt.nx) * opt.ny);

  const double tol = spectrum_tol(T, opt.tol_spec_factor);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int iy = 0; iy < opt.ny; ++iy) {
    for (int ix = 0; ix < opt.nx; ++ix) {
      double s0 = opt.s0_min + (opt.s0_max - opt.s0_min) * ix / std::max(opt.nx - 1, 1);
      double s1 = opt.s1_min + (opt.s1_max - opt.s1_min) * iy / std::max(opt.ny - 1, 1);
      double sm = T.sigmaMinQ(Complexd(s0, s1));
      res.grid[std::size_t(iy) * opt.nx + ix] = {s0, s1, sm, false};
    }
  }

  // Coarse local minima below a loose threshold, then Nelder-Mead polish.
  auto at = [&](int ix, int iy) -> const ScanPoint& {
    return res.grid[std::size_t(iy) * opt.nx + ix];
  };
  double hx = (opt.s0_max - opt.s0_min) / std::max(opt.nx - 1, 1);
  double hy = (opt.s1_max - opt.s1_min) / std::max(opt.ny - 1, 1);
  double cell = std::max(hx, hy);
  double coarse_tol = std::max(tol, 4.0 * cell * cell);

  std::vector<std::pair<double, double>> seeds;
  for (int iy = 0; iy < opt.ny; ++iy)
    for (int ix = 0; ix < opt.nx; ++ix) {
      const ScanPoint& p = at(ix, iy);
      if (p.sigma_min > coarse_tol) continue;
      bool isMin = true;
      for (int dy = -1; dy <= 1 && isMin; ++dy)
        for (int dx = -1; dx <= 1 && isMin; ++dx) {
          int jx = ix + dx, jy = iy + dy;
          if (jx < 0 || jx >= opt.nx || jy < 0 || jy >= opt.ny || (dx == 0 && dy == 0))
            continue;
          if (at(jx, jy).sigma_min < p.sigma_min) isMin = false;
        }
      if (isMin) seeds.emplace_back(p.s0, p.s1);
    }

  auto objective = [&](double s0, double s1) {
    return T.sigmaMinQ(Complexd(s0, std::abs(s1)));
  };
  for (auto [s0, s1] : seeds) {
    // Nelder-Mead in (s0, s1), reflecting s1 through the axis.
    std::array<std::array<double, 2>, 3> simplex = {{{s0, s1},
                                                     {s0 + 0.5 * hx, s1},
                                                     {s0, s1 + 0.5 * std::max(hy, hx)}}};
    std::array<double, 3> fv;
    for (int i = 0; i < 3; ++i) fv[i] = objective(simplex[i][0], simplex[i][1]);
    for (int it = 0; it < opt.polish_iters; ++it) {
      std::array<int, 3> ord = {0, 1, 2};
      std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fv[a] < fv[b]; });
      auto &best = simplex[ord[0]], &mid = simplex[ord[1]], &worst = simplex[ord[2]];
      double cx = 0.5 * (best[0] + mid[0]), cy = 0.5 * (best[1] + mid[1]);
      double rx = cx + (cx - worst[0]), ry = cy + (cy - worst[1]);
      double fr = objective(rx, ry);
      if (fr < fv[ord[0]]) {
        double ex = cx + 2.0 * (cx - worst[0]), ey = cy + 2.0 * (cy - worst[1]);
        double fe = objective(ex, ey);
        if (fe < fr) {
          worst = {ex, ey};
          fv[ord[2]] = fe;
        } else {
          worst = {rx, ry};
          fv[ord[2]] = fr;
        }
      } else if (fr < fv[ord[1]]) {
        worst = {rx, ry};
        fv[ord[2]] = fr;
      } else {
        double kx = cx + 0.5 * (worst[0] - cx), ky = cy + 0.5 * (worst[1] - cy);
        double fk = objective(kx, ky);
        if (fk < fv[ord[2]]) {
          worst = {kx, ky};
          fv[ord[2]] = fk;
        } else {
          for (int i : {1, 2}) {
            simplex[ord[i]][0] = best[0] + 0.5 * (simplex[ord[i]][0] - best[0]);
            simplex[ord[i]][1] = best[1] + 0.5 * (simplex[ord[i]][1] - best[1]);
            fv[ord[i]] = objective(simplex[ord[i]][0], simplex[ord[i]][1]);
          }
        }
      }
    }
    int besti = int(std::min_element(fv.begin(), fv.end()) - fv.begin());
    double bs0 = simplex[besti][0], bs1 = std::abs(simplex[besti][1]);
    double bf = fv[besti];
    if (bf >= tol) continue;
    bool dup = false;
    for (auto& c : res.candidates) {
      if (std::hypot(c.s0 - bs0, c.s1 - bs1) < 0.5 * cell) {
        dup = true;
        if (bf < c.sigma_min) c = {bs0, bs1, bf};
        break;
      }
    }
    if (!dup) res.candidates.push_back({bs0, bs1, bf});
  }

  // mark grid points nearest to confirmed candidates
  for (const auto& c : res.candidates) {
    int ix = int(std::lround((c.s0 - opt.s0_min) / std::max(hx, 1e-300)));
    int iy = int(std::lround((c.s1 - opt.s1_min) / std::max(hy, 1e-300)));
    ix = std::clamp(ix, 0, opt.nx - 1);
    iy = std::clamp(iy, 0, opt.ny - 1);
    res.grid[std::size_t(iy) * opt.nx + ix].candidate = true;
  }
  std::sort(res.candidates.begin(), res.candidates.end(),
            [](const SpectrumCandidate& a, const SpectrumCandidate& b) {
              return a.s0 < b.s0 || (a.s0 == b.s0 && a.s1 < b.s1);
            });
  return res;
}

BisectorialCertificate bisectorial_certificate(
    const ShiftSolver& T, double omega, const std::vector<double>& phis,
    const std::vector<std::function<VectorXd(const VectorXd&)>>& applyKs,
    const CertificatePlan& plan) {
  BisectorialCertificate cert;
  cert.omega = omega;
  cert.phis = phis;
  cert.passed = true;

  const double norm = std::max(T.opNorm(), 1e-290);
  const double r_lo = plan.r_lo_factor * norm, r_hi = plan.r_hi_factor * norm;
  const double sigma_tol = spectrum_tol(T, plan.sigma_tol_factor);

  for (double phi : phis) {
    if (!(phi > omega && phi < M_PI / 2)) {
      cert.passed = false;
      cert.failure = "phi outside (omega, pi/2)";
      cert.C_phi.push_back(std::numeric_limits<double>::quiet_NaN());
      cert.samples.emplace_back();
      continue;
    }

    // Spectrum-leak sweep: sigma_min(Q_s) along each sampled ray must stay
    // clear of zero at the resolution of the radial spacing.
    const int K = std::max(plan.leak_sweep_radii, 2);
    const double ratio = std::pow(r_hi / r_lo, 1.0 / (K - 1));
    for (int ia = 0; ia < plan.angles && cert.passed; ++ia) {
      double psi = phi + (M_PI / 2 - phi) * (ia + 1) / plan.angles;
      for (int ir = 0; ir < K; ++ir) {
        double r = r_lo * std::pow(ratio, ir);
        double spacing = r * (ratio - 1.0);
        double sm = T.sigmaMinQ(Complexd(r * std::cos(psi), r * std::sin(psi)));
        if (sm < std::max(sigma_tol, 0.5 * spacing * spacing)) {
          cert.passed = false;
          cert.failure = "S-spectrum detected outside the sector";
          break;
        }
      }
    }

    double sup = 0.0;
    std::vector<CertificateSample> samples;
    for (int ia = 0; ia < plan.angles; ++ia) {
      double psi = phi + (M_PI / 2 - phi) * (ia + 1) / plan.angles;
      for (int ir = 0; ir < plan.radii; ++ir) {
        double r = r_lo * std::pow(r_hi / r_lo, double(ir) / std::max(plan.radii - 1, 1));
        Paravectord s(r * std::cos(psi), (VectorXd(1) << r * std::sin(psi)).finished());
        Complexd z(r * std::cos(psi), r * std::sin(psi));
        for (const auto& applyK : applyKs) {
          double nrm = s_resolvent_left_norm(T, z, applyK);
          samples.push_back({s, nrm, r * nrm});
          sup = std::max(sup, r * nrm);
        }
      }
    }
    cert.C_phi.push_back(sup);
    cert.samples.push_back(std::move(samples));
    if (sup > plan.bound) {
      cert.passed = false;
      cert.failure = "empirical C_phi exceeds the requested bound";
    }
  }
  return cert;
}

}  // namespace fracgrad
