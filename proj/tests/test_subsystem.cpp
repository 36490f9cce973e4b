#include <cmath>

#include "doctest.h"
#include "qcl/cw.hpp"
#include "qcl/errors.hpp"
#include "qcl/numrange.hpp"
#include "qcl/subsystem.hpp"
#include "support/random.hpp"

using namespace qcl;

namespace {

SubsystemMap at_omega(const Mat3& u, Complex omega) { return build_subsystem(Pifs(u, z_from_omega(u, omega))); }

// Random interior point of W(U) at least `margin` (in barycentric weight) from every edge.
Complex interior_point(testing::Rng& rng, const Mat3& u, double margin) {
  const NumericalRange w = numerical_range(u);
  for (;;) {
    const auto b = rng.barycentric();
    if (std::min({b[0], b[1], b[2]}) < margin) continue;
    return b[0] * w.vertices[0] + b[1] * w.vertices[1] + b[2] * w.vertices[2];
  }
}

Mat3 permutation3() {
  Mat3 p = Mat3::Zero();
  p(1, 0) = p(2, 1) = p(0, 2) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("trace, determinant and singular values of A") {
  testing::Rng rng(41);
  for (int t = 0; t < 10000; ++t) {
    const Mat3 u = rng.haar_unitary();
    const Pifs f(u, rng.unit_vector());
    const SubsystemMap s = build_subsystem(f);
    const Complex w = f.omega();
    CHECK(std::abs(s.a.trace() - (u.trace() - w)) <= tol::kNum);
    CHECK(std::abs(s.a.determinant() - std::conj(w) * u.determinant()) <= tol::kNum);
    const auto [s1, s2] = singular_values2(s.a);
    CHECK(std::abs(s1 - 1.0) <= 10 * tol::kNum);
    CHECK(std::abs(s2 - std::abs(w)) <= 10 * tol::kNum);
    CHECK(std::abs(s.v2.squaredNorm() - (1.0 - std::norm(w))) <= tol::kNum);
    CHECK(std::abs(s.lambda1) <= 1.0 + tol::kNum);
    CHECK(std::abs(s.lambda1) >= std::abs(s.lambda2));
    for (int k = 0; k < 2; ++k) CHECK(std::abs(s.basis[k].dot(f.z())) <= tol::kNum);
    CHECK(std::abs(s.basis[0].dot(s.basis[1])) <= tol::kNum);
    // the characteristic-polynomial route must give the same eigenvalues
    const auto [c1, c2] = characteristic_eigenvalues(f);
    const double d = std::min(std::abs(c1 - s.lambda1) + std::abs(c2 - s.lambda2),
                              std::abs(c1 - s.lambda2) + std::abs(c2 - s.lambda1));
    if (std::abs(s.discriminant()) > 1e-6) CHECK(d <= 1e-8);
  }
}

TEST_CASE("Schur relation for the off-diagonal entry") {
  testing::Rng rng(42);
  for (int t = 0; t < 10000; ++t) {
    const SubsystemMap s = build_subsystem(Pifs(rng.haar_unitary(), rng.unit_vector()));
    const Vec2 e1 = eigenvector2(s.a, s.lambda1).normalized();
    const Vec2 w(-std::conj(e1[1]), std::conj(e1[0]));
    const Complex x = e1.dot(s.a * w);
    const double rhs = (1.0 - std::norm(s.lambda1)) * (1.0 - std::norm(s.lambda2));
    CHECK(std::abs(std::norm(x) - rhs) <= 10 * tol::kNum);
  }
}

TEST_CASE("subsystem examples") {
  const Mat3 u = cw::unitary();
  SUBCASE("CW with z = e1") {
    const SubsystemMap s = build_subsystem(Pifs(u, Vec3::Unit(0)));
    CHECK(std::abs(s.omega - 1.0 / std::sqrt(2.0)) <= 1e-15);
    CHECK(std::abs(s.a.trace()) <= 1e-12);
    CHECK(std::abs(s.a.determinant() - 1.0 / std::sqrt(2.0)) <= 1e-12);
    CHECK(mobius_class(s) == MobiusClass::Elliptic);
    REQUIRE(s.psi);
    CHECK(std::abs(std::abs(*s.psi) - kPi) <= 1e-9);
  }
  SUBCASE("CW with z = e2") {
    const SubsystemMap s = build_subsystem(Pifs(u, Vec3::Unit(1)));
    CHECK(std::abs(s.omega) <= 1e-15);
    CHECK(std::abs(s.lambda1 - 1.0 / std::sqrt(2.0)) <= 1e-12);
    CHECK(std::abs(s.lambda2) <= 1e-12);
    CHECK(mobius_class(s) == MobiusClass::SingularS1);
    const FixedPointSet fp = fixed_points(s);
    REQUIRE(fp.points.size() == 1);
    CHECK(fp.points[0].kind == FixedPointKind::Attractive);
    CHECK(prob(s.pifs, Outcome::Ball, fp.points[0].state) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("diagonal U with z = e3") {
    const double al = 0.3, be = 1.9, de = -2.2;
    Mat3 d = Mat3::Zero();
    d(0, 0) = std::polar(1.0, al);
    d(1, 1) = std::polar(1.0, be);
    d(2, 2) = std::polar(1.0, de);
    const SubsystemMap s = build_subsystem(Pifs(d, Vec3::Unit(2)));
    Mat2 expect = Mat2::Zero();
    expect(0, 0) = std::polar(1.0, al);
    expect(1, 1) = std::polar(1.0, be);
    // basis is (e1, e2) up to sign
    Mat2 got = s.a;
    CHECK(std::abs(got(0, 1)) <= 1e-15);
    CHECK(std::abs(got(1, 0)) <= 1e-15);
    CHECK(std::abs(got(0, 0) - expect(0, 0)) <= 1e-15);
    CHECK(std::abs(got(1, 1) - expect(1, 1)) <= 1e-15);
    // unitary A with distinct phases rotates the ball
    CHECK(mobius_class(s) == MobiusClass::Elliptic);
    CHECK_THROWS_AS(fixed_points(s), SubsystemUnitary);
  }
}

TEST_CASE("Mobius classes along the CW real axis") {
  const Mat3 u = cw::unitary();
  CHECK(mobius_class(at_omega(u, cw::omega_p())) == MobiusClass::Parabolic);
  CHECK(mobius_class(at_omega(u, u.trace())) == MobiusClass::Elliptic);
  for (double w : {-0.14, -0.1, -0.05, -0.001}) CHECK(mobius_class(at_omega(u, w)) == MobiusClass::Loxodromic);
  for (double w : {0.001, 0.05, 0.09}) CHECK(mobius_class(at_omega(u, w)) == MobiusClass::Loxodromic);
  for (double w : {0.1, 0.3, 0.6, 0.95}) CHECK(mobius_class(at_omega(u, w)) == MobiusClass::Elliptic);
}

TEST_CASE("A is singular exactly at omega = 0") {
  testing::Rng rng(43);
  for (int t = 0; t < 500; ++t) {
    const Mat3 u = rng.haar_unitary();
    const Complex w = interior_point(rng, u, 0.01);
    const SubsystemMap s = at_omega(u, w);
    CHECK((std::abs(s.a.determinant()) <= tol::kNum) == (std::abs(w) <= tol::kNum));
  }
  const Mat3 u = rng.haar_unitary();
  // 0 is inside W(U) only for some U; use the permutation whose range contains 0
  const SubsystemMap s0 = at_omega(permutation3(), 0.0);
  CHECK(std::abs(s0.a.determinant()) <= tol::kNum);
  CHECK(mobius_class(s0) == MobiusClass::SingularS2);
  (void)u;
}

TEST_CASE("A is unitary exactly at the vertices") {
  testing::Rng rng(44);
  for (int t = 0; t < 200; ++t) {
    const Mat3 u = rng.haar_unitary();
    const Spectrum3 sp = eig_unitary3(u);
    const SubsystemMap v = build_subsystem(Pifs(u, sp.vectors[t % 3]));
    CHECK(std::abs(v.lambda2) >= 1.0 - 1e-9);
    CHECK(max_norm(v.a.adjoint() * v.a - Mat2::Identity()) <= 1e-9);
    const SubsystemMap in = at_omega(u, interior_point(rng, u, 0.01));
    CHECK(std::abs(in.lambda2) < 1.0 - 1e-6);
    CHECK(max_norm(in.a.adjoint() * in.a - Mat2::Identity()) > 1e-6);
  }
}

TEST_CASE("boundary points: unit lambda1, orthogonal eigenvectors, U-eigenvector e1") {
  testing::Rng rng(45);
  for (int t = 0; t < 300; ++t) {
    const Mat3 u = rng.haar_unitary();
    const NumericalRange w = numerical_range(u);
    const double s = rng.uniform(0.05, 0.95);
    const int i = t % 3, j = (t + 1) % 3;
    const Complex on_edge = (1 - s) * w.vertices[i] + s * w.vertices[j];
    const SubsystemMap b = at_omega(u, on_edge);
    CHECK(std::abs(b.lambda1) >= 1.0 - 1e-7);
    const Vec3 e1 = b.e1().normalized(), e2 = b.e2().normalized();
    CHECK(std::abs(e1.dot(e2)) <= 1e-7);
    CHECK((u * e1 - b.lambda1 * e1).norm() <= 10 * 1e-7);
    const RhoVSingularity sing = rho_v_is_singular(b, 1e-7);
    CHECK(sing.singular);
    CHECK(sing.detail == RhoVDetail::Fixed);
    CHECK(rho_v(b.pifs).distance(DensityMatrix::pure(e2)) <= 1e-6);

    const SubsystemMap in = at_omega(u, interior_point(rng, u, 0.05));
    CHECK(std::abs(in.lambda1) < 1.0 - 1e-6);
    CHECK(std::abs(in.e1().normalized().dot(in.e2().normalized())) > 1e-6);
    CHECK_FALSE(rho_v_is_singular(in).singular);
  }
}

TEST_CASE("right-angled range: rho_v leaves the domain at omega = 0") {
  Mat3 d = Mat3::Zero();
  d(0, 0) = 1.0;
  d(1, 1) = Complex(0, 1);
  d(2, 2) = -1.0;
  const SubsystemMap s = at_omega(d, 0.0);
  const RhoVSingularity r = rho_v_is_singular(s);
  CHECK(r.singular);
  CHECK(r.detail == RhoVDetail::OutOfDomain);
}

TEST_CASE("rho_m is never fixed for non-unitary A") {
  testing::Rng rng(46);
  for (int t = 0; t < 1000; ++t) {
    const SubsystemMap s = build_subsystem(Pifs(rng.haar_unitary(), rng.unit_vector()));
    if (std::abs(s.lambda2) >= 1.0 - 1e-6) continue;
    CHECK(evolve(s.pifs, Outcome::Ball, rho_m(s.pifs)).distance(rho_m(s.pifs)) > tol::kFix);
  }
}

TEST_CASE("fixed points are fixed") {
  testing::Rng rng(47);
  for (int t = 0; t < 500; ++t) {
    const SubsystemMap s = build_subsystem(Pifs(rng.haar_unitary(), rng.unit_vector()));
    if (std::abs(s.lambda2) >= 1.0 - 1e-6 || std::abs(s.lambda2) <= 1e-6) continue;
    const FixedPointSet fp = fixed_points(s);
    CHECK(mobius_class(s) == MobiusClass::Loxodromic);
    REQUIRE(fp.points.size() == 2);
    for (const auto& p : fp.points) CHECK(evolve(s.pifs, Outcome::Ball, p.state).distance(p.state) <= tol::kFix);
  }
}

TEST_CASE("elliptic segment midpoint is fixed") {
  testing::Rng rng(48);
  for (int t = 0; t < 200; ++t) {
    const double r = rng.uniform(0.1, 0.9);
    const double a = rng.uniform(-kPi, kPi), psi = rng.uniform(0.2, 3.0);
    const Mat3 u = block_realization(std::polar(r, a), std::polar(r, a + psi));
    const SubsystemMap s = build_subsystem(Pifs(u, Vec3::Unit(2)));
    REQUIRE(mobius_class(s) == MobiusClass::Elliptic);
    const FixedPointSet fp = fixed_points(s);
    CHECK(fp.segment);
    REQUIRE(fp.points.size() == 2);
    const DensityMatrix mid = DensityMatrix::trusted(0.5 * (fp.points[0].state.matrix() + fp.points[1].state.matrix()));
    CHECK(evolve(s.pifs, Outcome::Ball, mid).distance(mid) <= tol::kFix);
  }
}

TEST_CASE("trajectories") {
  testing::Rng rng(49);
  SUBCASE("loxodromic trajectories converge to e1") {
    for (int t = 0; t < 50; ++t) {
      const Mat3 u = rng.haar_unitary();
      const SubsystemMap s = at_omega(u, interior_point(rng, u, 0.05));
      if (mobius_class(s) != MobiusClass::Loxodromic) continue;
      const BallReport rep = analyze_ball(s);
      CHECK(rep.from_m.termination == Termination::ConvergedTo);
      REQUIRE(rep.from_m.limit);
      CHECK(rep.from_m.limit->distance(DensityMatrix::pure(s.e1())) <= tol::kConv);
      REQUIRE(rep.from_v);
      CHECK(rep.from_v->termination == Termination::ConvergedTo);
    }
  }
  SUBCASE("finite elliptic trajectories have the period of the rotation") {
    for (int q : {2, 3, 4, 5, 7}) {
      const Mat3 u = block_realization(std::polar(0.6, 0.4), std::polar(0.6, 0.4 + kTwoPi / q));
      const SubsystemMap s = build_subsystem(Pifs(u, Vec3::Unit(2)));
      const Trajectory tr = iterate_f1(s, rho_m(s.pifs));
      CHECK(tr.termination == Termination::Periodic);
      CHECK(tr.period == q);
    }
    const Mat3 cw = cw::unitary();
    const double w3 = ((std::sqrt(2.0) + 1) - std::sqrt(1 + 2 * std::sqrt(2.0))) / 2;
    const Trajectory tr = iterate_f1(at_omega(cw, w3), rho_m(Pifs(cw, z_from_omega(cw, w3))));
    CHECK(tr.termination == Termination::Periodic);
    CHECK(tr.period == 3);
  }
  SUBCASE("irrational rotation neither converges nor repeats") {
    const double psi = kTwoPi * (std::sqrt(5.0) - 1) / 2;
    const Mat3 u = block_realization(std::polar(0.6, 0.1), std::polar(0.6, 0.1 + psi));
    const SubsystemMap s = build_subsystem(Pifs(u, Vec3::Unit(2)));
    const Trajectory tr = iterate_f1(s, rho_m(s.pifs), 2000);
    CHECK(tr.termination == Termination::TruncatedAtN);
    CHECK(tr.states.size() == 2001);
  }
  SUBCASE("S2: one step to e1, then out of the domain") {
    const SubsystemMap s = at_omega(permutation3(), 0.0);
    const Trajectory tr = iterate_f1(s, rho_m(s.pifs));
    CHECK(tr.termination == Termination::LeftDomain);
    REQUIRE(tr.states.size() == 2);
    CHECK(tr.states[1].distance(DensityMatrix::pure(s.e1())) <= tol::kNum);
    CHECK(fixed_points(s).points.empty());
  }
  SUBCASE("S1 (CW, z = e2) converges to e1") {
    const SubsystemMap s = build_subsystem(Pifs(cw::unitary(), Vec3::Unit(1)));
    const Trajectory tr = iterate_f1(s, rho_m(s.pifs));
    CHECK(tr.termination == Termination::ConvergedTo);
  }
}

TEST_CASE("block realization") {
  testing::Rng rng(50);
  for (int t = 0; t < 1000; ++t) {
    const Complex m1 = std::polar(std::sqrt(rng.uniform()), rng.uniform(-kPi, kPi));
    const Complex m2 = std::polar(std::sqrt(rng.uniform()), rng.uniform(-kPi, kPi));
    const Mat3 u = block_realization(m1, m2);
    CHECK(unitarity_defect(u) <= 1e-9);
    const auto [l1, l2] = eig2(u.topLeftCorner<2, 2>());
    const double d = std::min(std::abs(l1 - m1) + std::abs(l2 - m2), std::abs(l1 - m2) + std::abs(l2 - m1));
    CHECK(d <= 1e-8);
  }
  CHECK(unitarity_defect(block_realization(1.0, Complex(0, 1))) <= 1e-12);
  CHECK(unitarity_defect(block_realization(0.0, 0.0)) <= 1e-12);
}
