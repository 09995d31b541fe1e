#include "fracgrad/clifford.hpp"
#include "fracgrad/slice_functions.hpp"
#include "support/blade_oracle.hpp"

#include <doctest.h>

#include <random>

using namespace fracgrad;

namespace {

Multivectord random_mv(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Multivectord m(n);
  for (unsigned a = 0; a < (1u << n); ++a) m[a] = nd(rng);
  return m;
}

Paravectord random_paravector(int n, std::mt19937_64& rng, double min_sc = 0.1) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.3, 3.0);
  Paravectord::Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  double s0 = nd(rng);
  if (std::abs(s0) < min_sc) s0 = (s0 >= 0 ? min_sc : -min_sc);
  Paravectord s(s0, v);
  double scale = ud(rng) / s.norm();
  return Paravectord(s.s0 * scale, s.vec * scale);
}

// slice-plane exponential, used to invert slice_log
Multivectord slice_exp(const Paravectord& s) {
  auto d = slice_decompose(s);
  Complex w = std::exp(Complex(d.x, d.y));
  return from_slice_value(s.dim(), d, w);
}

}  // namespace

TEST_CASE("defining relations e_i e_j + e_j e_i = -2 delta_ij for n=3,4,5") {
  for (int n : {3, 4, 5}) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto ei = Multivectord::basis(n, 1u << i);
        auto ej = Multivectord::basis(n, 1u << j);
        Multivectord anti = ei * ej + ej * ei;
        Multivectord expect = Multivectord::scalar(n, i == j ? -2.0 : 0.0);
        CHECK((anti - expect).norm() == 0.0);
      }
  }
}

TEST_CASE("production sign table equals the brute-force oracle") {
  for (int n : {1, 2, 3, 4, 5, 6}) {
    const unsigned dim = 1u << n;
    for (unsigned a = 0; a < dim; ++a)
      for (unsigned b = 0; b < dim; ++b) {
        unsigned mask;
        int s = oracle::blade_sign_bruteforce(a, b, mask);
        CHECK(mask == (a ^ b));
        CHECK(s == blade_product_sign(a, b));
      }
  }
}

TEST_CASE("geometric product: associativity and bilinearity on random triples") {
  std::mt19937_64 rng(42);
  for (int n : {3, 4, 5}) {
    for (int t = 0; t < 60; ++t) {
      auto a = random_mv(n, rng), b = random_mv(n, rng), c = random_mv(n, rng);
      double scale = a.norm() * b.norm() * c.norm();
      CHECK(((a * b) * c - a * (b * c)).norm() <= 1e-13 * scale);
      CHECK((a * (b + c) - (a * b + a * c)).norm() <= 1e-13 * a.norm() * (b.norm() + c.norm()));
      CHECK((oracle::product_bruteforce(a, b) - a * b).norm() <= 1e-13 * a.norm() * b.norm());
    }
  }
}

TEST_CASE("simple product identities") {
  int n = 3;
  auto one = Multivectord::scalar(n, 1.0);
  auto e1 = Multivectord::basis(n, 1);
  CHECK(((e1 * e1) - Multivectord::scalar(n, -1.0)).norm() == 0.0);
  CHECK((((one + e1) * (one - e1)) - Multivectord::scalar(n, 2.0)).norm() == 0.0);
}

TEST_CASE("paravector conjugation and modulus") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    auto s = random_paravector(3, rng);
    auto m = s.toMultivector();
    auto prod = m * s.conjugate().toMultivector();
    CHECK(prod[0] == doctest::Approx(s.squaredNorm()).epsilon(1e-14));
    CHECK(prod.gradeProjection(1).norm() <= 1e-14 * s.squaredNorm());
  }
}

TEST_CASE("slice decomposition examples") {
  // 1 + 2 e_2
  Paravectord s1(1.0, (Eigen::Vector3d() << 0, 2, 0).finished());
  auto d1 = slice_decompose(s1);
  CHECK(d1.x == 1.0);
  CHECK(d1.y == 2.0);
  CHECK(d1.J[1] == 1.0);
  CHECK(!d1.degenerate);

  // real 3: degenerate, J = e_1 by convention
  auto d2 = slice_decompose(Paravectord::real(3, 3.0));
  CHECK(d2.x == 3.0);
  CHECK(d2.y == 0.0);
  CHECK(d2.J[0] == 1.0);
  CHECK(d2.degenerate);

  // 1 + e_1 + e_2 -> (1, sqrt2, (e_1+e_2)/sqrt2)
  Paravectord s3(1.0, (Eigen::Vector3d() << 1, 1, 0).finished());
  auto d3 = slice_decompose(s3);
  CHECK(d3.y == doctest::Approx(std::sqrt(2.0)));
  CHECK(d3.J[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("slice logarithm") {
  // ln(e) = 1
  auto le = slice_log(Paravectord::real(3, std::exp(1.0)));
  CHECK(le[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(le.gradeProjection(1).norm() == 0.0);

  // ln(1 + e_1) = ln sqrt2 + e_1 pi/4
  Paravectord s(1.0, (Eigen::Vector3d() << 1, 0, 0).finished());
  auto l = slice_log(s);
  CHECK(l[0] == doctest::Approx(0.34657359027997265).epsilon(1e-14));
  CHECK(l[1] == doctest::Approx(M_PI / 4).epsilon(1e-14));

  CHECK_THROWS_AS(slice_log(Paravectord::real(3, -1.0)), DomainError);

  // exp(log s) = s for random Sc(s) > 0
  std::mt19937_64 rng(11);
  auto as_paravector = [](const Multivectord& m, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = m[1u << i];
    return Paravectord(m[0], v);
  };
  for (int t = 0; t < 50; ++t) {
    auto s2 = random_paravector(3, rng);
    s2.s0 = std::abs(s2.s0);
    auto e = slice_exp(as_paravector(slice_log(s2), 3));
    CHECK((e - s2.toMultivector()).norm() <= 1e-12 * s2.norm());
  }
}

TEST_CASE("fractional power branch values") {
  auto m4 = Paravectord::real(3, -4.0);
  CHECK(frac_power_p(m4, 0.5)[0] == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(frac_power_q(m4, 0.5)[0] == doctest::Approx(2.0).epsilon(1e-15));
  auto m2 = Paravectord::real(3, -2.0);
  CHECK(frac_power_p(m2, 2.0)[0] == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(frac_power_q(m2, 2.0)[0] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(frac_power_p(Paravectord(0.0, Eigen::Vector3d::UnitX()), 0.5), DomainError);
}

TEST_CASE("|p_alpha(s)| = |q_alpha(s)| = |s|^alpha") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ua(-2.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    auto s = random_paravector(3, rng);
    double alpha = ua(rng);
    double expect = std::pow(s.norm(), alpha);
    CHECK(frac_power_p(s, alpha).norm() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(frac_power_q(s, alpha).norm() == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("pointwise power and composition rules") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ua(-2.0, 2.0);
  for (int t = 0; t < 300; ++t) {
    auto s = random_paravector(4, rng);
    double alpha = ua(rng), beta = ua(rng);
    auto p_ab = frac_power_p(s, alpha + beta);
    auto q_ab = frac_power_q(s, alpha + beta);
    auto pa = frac_power_p(s, alpha), pb = frac_power_p(s, beta);
    auto qa = frac_power_q(s, alpha), qb = frac_power_q(s, beta);
    double scale = std::max(1.0, p_ab.norm());
    CHECK((pa * qb - p_ab).norm() <= 1e-12 * scale);
    CHECK((qa * pb - p_ab).norm() <= 1e-12 * scale);
    CHECK((pa * pb - q_ab).norm() <= 1e-12 * scale);
    CHECK((qa * qb - q_ab).norm() <= 1e-12 * scale);
  }
}

TEST_CASE("pointwise composition p_beta(p_alpha(s)) = p_{beta alpha}(s) etc") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> ua(0.2, 1.8);
  auto as_paravector = [](const Multivectord& m, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = m[1u << i];
    return Paravectord(m[0], v);
  };
  // The compositions are defined where the inner value keeps a nonzero
  // scalar part, i.e. |alpha| * (slice argument to the real axis) < pi/2;
  // sample s inside the double sector D_{pi/4} so alpha up to 2 is safe.
  std::uniform_real_distribution<double> uarg(-M_PI / 4 + 0.05, M_PI / 4 - 0.05);
  std::uniform_real_distribution<double> urad(0.3, 3.0);
  std::normal_distribution<double> nd;
  auto sector_paravector = [&](int n) {
    double arg = uarg(rng), r = urad(rng);
    bool left = rng() & 1;
    Eigen::VectorXd J(n);
    for (int i = 0; i < n; ++i) J[i] = nd(rng);
    J /= J.norm();
    double x = r * std::cos(arg), y = r * std::abs(std::sin(arg));
    return Paravectord(left ? -x : x, J * y);
  };
  for (int t = 0; t < 200; ++t) {
    auto s = sector_paravector(3);
    double alpha = ua(rng), beta = ua(rng);
    auto pa = as_paravector(frac_power_p(s, alpha), 3);
    auto qa = as_paravector(frac_power_q(s, alpha), 3);
    double scale = std::max(1.0, std::pow(s.norm(), alpha * beta));
    CHECK((frac_power_p(pa, beta) - frac_power_p(s, beta * alpha)).norm() <= 1e-12 * scale);
    CHECK((frac_power_q(pa, beta) - frac_power_q(s, beta * alpha)).norm() <= 1e-12 * scale);
    CHECK((frac_power_p(qa, beta) - frac_power_q(s, beta * alpha)).norm() <= 1e-12 * scale);
    CHECK((frac_power_q(qa, beta) - frac_power_q(s, beta * alpha)).norm() <= 1e-12 * scale);
  }
}

TEST_CASE("q_alpha(s) = (s^2)^{alpha/2} off the negative real axis") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ua(-2.0, 2.0);
  auto as_paravector = [](const Multivectord& m, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = m[1u << i];
    return Paravectord(m[0], v);
  };
  for (int t = 0; t < 200; ++t) {
    auto s = random_paravector(3, rng);
    double alpha = ua(rng);
    auto s2 = as_paravector(s.toMultivector() * s.toMultivector(), 3);
    if (s2.s0 <= 0 && s2.vecNorm() < 1e-12) continue;
    // (s^2)^{alpha/2} through the principal power in the slice plane
    auto d = slice_decompose(s2);
    Complex w = std::pow(Complex(d.x, d.y), alpha / 2.0);
    auto expect = from_slice_value(3, d, w);
    CHECK((frac_power_q(s, alpha) - expect).norm() <=
          1e-12 * std::max(1.0, expect.norm()));
  }
}

TEST_CASE("eval_intrinsic: interface path equals the direct slice-plane path") {
  std::mt19937_64 rng(29);
  // identity at 1 + 2 e_3
  Paravectord id_pt(1.0, (Eigen::Vector3d() << 0, 0, 2).finished());
  auto idv = eval_intrinsic(identity_fn(), id_pt);
  CHECK((idv - id_pt.toMultivector()).norm() <= 1e-15);

  // regularizer at s = 2 -> 1/5
  CHECK(eval_intrinsic(inv_one_plus_square_fn(1), Paravectord::real(3, 2.0))[0] ==
        doctest::Approx(0.2).epsilon(1e-15));

  for (int t = 0; t < 100; ++t) {
    auto s = random_paravector(3, rng);
    auto via_interface = eval_intrinsic(p_alpha_fn(0.5), s);
    auto direct = frac_power_p(s, 0.5);
    CHECK((via_interface - direct).norm() <= 1e-13 * std::max(1.0, direct.norm()));
  }
}

TEST_CASE("intrinsic symmetry: value independent of the sign of J") {
  std::mt19937_64 rng(31);
  for (const char* name : {"p", "q", "reg"}) {
    for (int t = 0; t < 40; ++t) {
      auto s = random_paravector(3, rng);
      Paravectord sneg(s.s0, -s.vec);  // same slice, J -> -J
      IntrinsicSliceFunction f = name[0] == 'p'   ? p_alpha_fn(0.7)
                                 : name[0] == 'q' ? q_alpha_fn(0.7)
                                                  : inv_one_plus_square_fn(2);
      auto v1 = eval_intrinsic(f, s);
      auto v2 = eval_intrinsic(f, sneg);
      // u component equal, J component flips with the vector part
      CHECK(v1[0] == doctest::Approx(v2[0]).epsilon(1e-13));
      CHECK((v1.gradeProjection(1) + v2.gradeProjection(1)).norm() <=
            1e-13 * std::max(1.0, v1.norm()));
    }
  }
}

TEST_CASE("sector membership") {
  SectorGeometry dbl{0.3, SectorGeometry::Kind::DoubleSector};
  CHECK(dbl.contains(Paravectord::real(3, 2.0)));
  CHECK(dbl.contains(Paravectord::real(3, -2.0)));
  CHECK(!dbl.contains(Paravectord(0.0, Eigen::Vector3d::UnitX())));
  SectorGeometry sgl{0.3, SectorGeometry::Kind::SingleSector};
  CHECK(sgl.contains(Paravectord::real(3, 2.0)));
  CHECK(!sgl.contains(Paravectord::real(3, -2.0)));
}
