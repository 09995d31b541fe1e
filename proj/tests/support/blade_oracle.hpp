#pragma once

// Test-side oracle for the geometric product, built directly from the
// anticommutation relations: blades as index lists, bubble-sorted with a sign
// flip per swap and a factor -1 per annihilated e_i e_i pair. Independent of
// the production sign table.

#include "fracgrad/clifford.hpp"

#include <vector>

namespace oracle {

inline int blade_sign_bruteforce(unsigned a, unsigned b, unsigned& out_mask) {
  std::vector<int> idx;
  for (int i = 0; i < 32; ++i)
    if (a & (1u << i)) idx.push_back(i);
  for (int i = 0; i < 32; ++i)
    if (b & (1u << i)) idx.push_back(i);
  int sign = 1;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
      if (idx[k] > idx[k + 1]) {
        std::swap(idx[k], idx[k + 1]);
        sign = -sign;
        moved = true;
      } else if (idx[k] == idx[k + 1]) {
        idx.erase(idx.begin() + k, idx.begin() + k + 2);
        sign = -sign;  // e_i e_i = -1
        moved = true;
        break;
      }
    }
  }
  out_mask = 0;
  for (int i : idx) out_mask |= 1u << i;
  return sign;
}

inline fracgrad::Multivectord product_bruteforce(const fracgrad::Multivectord& x,
                                                 const fracgrad::Multivectord& y) {
  fracgrad::Multivectord out(x.dim());
  const unsigned dim = 1u << x.dim();
  for (unsigned a = 0; a < dim; ++a)
    for (unsigned b = 0; b < dim; ++b) {
      if (x[a] == 0.0 || y[b] == 0.0) continue;
      unsigned mask;
      int s = blade_sign_bruteforce(a, b, mask);
      out[mask] += s * x[a] * y[b];
    }
  return out;
}

}  // namespace oracle
