#include "fracgrad/contour.hpp"

namespace fracgrad {

void gauss_legendre(int order, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x.resize(order);
  w.resize(order);
  const int mhalf = (order + 1) / 2;
  for (int i = 0; i < mhalf; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double p0, p1, dp;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = -t;
    x[order - 1 - i] = t;
    double ww = 2.0 / ((1.0 - t * t) * dp * dp);
    w[i] = ww;
    w[order - 1 - i] = ww;
  }
}

std::vector<ContourNode> upper_contour_nodes(const ContourSpec& c, int panels, int order) {
  Eigen::VectorXd gx, gw;
  gauss_legendre(order, gx, gw);
  const double lo = std::log(c.eps), hi = std::log(c.R);

  struct Ray {
    double theta;
    double sigma;
  };
  std::vector<Ray> rays;
  rays.push_back({c.phi, -1.0});  // inward along e^{J phi}
  if (c.kind == SectorGeometry::Kind::DoubleSector)
    rays.push_back({M_PI - c.phi, +1.0});  // outward along e^{J(pi-phi)}

  std::vector<ContourNode> nodes;
  nodes.reserve(rays.size() * panels * order);
  const std::complex<double> minus_i(0.0, -1.0);
  for (const Ray& ray : rays) {
    const std::complex<double> dir = std::polar(1.0, ray.theta);
    for (int p = 0; p < panels; ++p) {
      double a = lo + (hi - lo) * p / panels;
      double b = lo + (hi - lo) * (p + 1) / panels;
      for (int q = 0; q < order; ++q) {
        double t = 0.5 * (b - a) * gx[q] + 0.5 * (a + b);
        double wt = 0.5 * (b - a) * gw[q];
        std::complex<double> z = std::exp(t) * dir;
        nodes.push_back({z, (0.5 / M_PI) * minus_i * ray.sigma * z * wt});
      }
    }
  }
  return nodes;
}

}  // namespace fracgrad
