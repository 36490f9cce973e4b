#pragma once

#include <array>
#include <vector>

#include "qcl/linalg.hpp"

namespace qcl {

// Eigenvalues of a 3x3 Hermitian matrix by cyclic Jacobi, ascending.
std::array<double, 3> hermitian_eigenvalues(const Mat3& h);

class DensityMatrix {
 public:
  // Validates Hermiticity, unit trace and positivity; throws InvalidState.
  explicit DensityMatrix(const Mat3& m);

  static DensityMatrix pure(const Vec3& v);
  static DensityMatrix maximally_mixed();
  // Skips validation; the caller guarantees a state up to rounding.
  static DensityMatrix trusted(const Mat3& m);

  const Mat3& matrix() const { return m_; }
  double distance(const DensityMatrix& other) const { return max_norm(m_ - other.m_); }

 private:
  DensityMatrix() = default;
  Mat3 m_;
};

// Pi_2 = |z><z|, Pi_1 = I - Pi_2.
class Pvm21 {
 public:
  explicit Pvm21(const Vec3& z);

  const Vec3& z() const { return z_; }
  Mat3 pi1() const { return Mat3::Identity() - pi2(); }
  Mat3 pi2() const { return z_ * z_.adjoint(); }

 private:
  Vec3 z_;
};

enum class Outcome { Ball = 1, Point = 2 };

class Pifs {
 public:
  // Throws NotUnitary.
  Pifs(const Mat3& u, const Vec3& z);

  const Mat3& unitary() const { return u_; }
  const Pvm21& pvm() const { return pvm_; }
  const Vec3& z() const { return pvm_.z(); }
  Complex omega() const { return omega_; }
  const Mat3& projector(Outcome i) const { return i == Outcome::Ball ? pi1_ : pi2_; }

 private:
  Mat3 u_;
  Pvm21 pvm_;
  Mat3 pi1_, pi2_;
  Complex omega_;
};

double prob(const Pifs& f, Outcome i, const DensityMatrix& rho);

// Throws ZeroProbability when prob(i, rho) <= 1e-12.
DensityMatrix evolve(const Pifs& f, Outcome i, const DensityMatrix& rho);

double string_prob(const Pifs& f, const std::vector<Outcome>& outcomes, const DensityMatrix& rho0);

DensityMatrix rho_z(const Pifs& f);
DensityMatrix rho_m(const Pifs& f);
// Image of rho_z under outcome 1. Throws ZeroProbability when |omega| = 1.
DensityMatrix rho_v(const Pifs& f);

// The pure state u in the ball with prob(1, u) = 1. Throws SubsystemUnitary.
DensityMatrix unique_unit_prob_state(const Pifs& f);
Vec3 unique_unit_prob_vector(const Pifs& f);

}  // namespace qcl
