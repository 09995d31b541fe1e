#pragma once

// Test-side oracle: direct transcription of the omega-tier contour integral
// with all four rays, explicit slice unit K = rep(L_J), explicit Clifford
// node coefficients, and a dense LU per node. Independent of the production
// merged-pair engine.

#include "fracgrad/contour.hpp"
#include "fracgrad/slice_functions.hpp"

#include <Eigen/Dense>

namespace oracle {

using fracgrad::Complex;
using fracgrad::IntrinsicSliceFunction;
using Eigen::MatrixXd;

inline MatrixXd omega_reference(const IntrinsicSliceFunction& f, const MatrixXd& A,
                                const MatrixXd& K, double phi, double eps, double R,
                                int panels, int order, bool double_sector = true) {
  Eigen::VectorXd gx, gw;
  fracgrad::gauss_legendre(order, gx, gw);
  const Eigen::Index n = A.rows();
  MatrixXd I = MatrixXd::Identity(n, n);
  MatrixXd acc = MatrixXd::Zero(n, n);

  struct Ray {
    double theta, sigma;
  };
  std::vector<Ray> rays = {{phi, -1.0}, {-phi, +1.0}};
  if (double_sector) {
    rays.push_back({M_PI + phi, -1.0});
    rays.push_back({M_PI - phi, +1.0});
  }

  const double lo = std::log(eps), hi = std::log(R);
  for (const Ray& ray : rays) {
    for (int p = 0; p < panels; ++p) {
      double a = lo + (hi - lo) * p / panels;
      double b = lo + (hi - lo) * (p + 1) / panels;
      for (int q = 0; q < order; ++q) {
        double t = 0.5 * (b - a) * gx[q] + 0.5 * (a + b);
        double w = 0.5 * (b - a) * gw[q];
        Complex z = std::exp(t) * std::polar(1.0, ray.theta);
        Complex gamma = (0.5 / M_PI) * Complex(0, -1) * ray.sigma * z * w * f.eval(z);
        MatrixXd Lc = gamma.real() * I + gamma.imag() * K;
        MatrixXd Lsbar = z.real() * I - z.imag() * K;
        MatrixXd Q = A * A - 2.0 * z.real() * A + std::norm(z) * I;
        Eigen::PartialPivLU<MatrixXd> lu(Q);
        acc += lu.solve(Lsbar * Lc) - A * lu.solve(Lc);
      }
    }
  }
  return acc;
}

}  // namespace oracle
