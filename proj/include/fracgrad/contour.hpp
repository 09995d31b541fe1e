#pragma once

// Quadrature description of the sector-boundary contour in a slice plane.
// The boundary of the double sector D_phi is traversed so that each sector is
// enclosed counterclockwise: inward along r e^{J phi} (from R to eps), outward
// along r e^{-J phi}, inward along r e^{J(pi+phi)}, outward along r e^{J(pi-phi)}.
// The single-sector boundary keeps only the +-phi pair.
//
// Intrinsic integrands pair each node with its slice-conjugate mirror, and
// Q_s depends on s only through (s0, |s|), so a node and its mirror merge into
// one real contribution  a_k Q^{-1} - b_k A Q^{-1}  with
//   a_k = 2 Re(conj(z_k) gamma_k),  b_k = 2 Re(gamma_k),
//   gamma_k = (1/2pi)(-i) sigma z_k w_k f(z_k),
// where sigma is the traversal sign of the upper ray and ds_J = (-J) ds.

#include "fracgrad/clifford.hpp"
#include "fracgrad/slice_functions.hpp"

#include <Eigen/Dense>

#include <vector>

namespace fracgrad {

struct ContourSpec {
  double phi = M_PI / 4;  // contour angle in (omega, theta)
  Paravectord J;          // slice unit; the merged form is J-independent
  double eps = 1e-8;      // inner radial truncation
  double R = 1e8;         // outer radial truncation
  int nodes_per_ray = 32;
  SectorGeometry::Kind kind = SectorGeometry::Kind::DoubleSector;
};

// Gauss-Legendre nodes and weights on [-1,1] by Newton iteration.
void gauss_legendre(int order, Eigen::VectorXd& x, Eigen::VectorXd& w);

struct ContourNode {
  std::complex<double> z;      // node in the upper slice half-plane
  std::complex<double> gamma0; // (1/2pi)(-i) sigma z w, before the f factor
};

// Nodes on the upper rays, log-radius composite Gauss-Legendre per ray.
// Lower-ray mirrors are folded in by the pair merge above.
std::vector<ContourNode> upper_contour_nodes(const ContourSpec& c, int panels, int order);

}  // namespace fracgrad
