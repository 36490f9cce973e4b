#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <utility>

namespace qcl {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2cd;
using Vec3 = Eigen::Vector3cd;
using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Spectral decomposition of a 3x3 unitary. Phases lie in [0, 2pi), ascending.
struct Spectrum3 {
  std::array<double, 3> phases{};
  std::array<Vec3, 3> vectors;

  Complex eigenvalue(int j) const { return std::polar(1.0, phases[j]); }
  Mat3 reconstruct() const;
};

template <typename Derived>
double max_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

double unitarity_defect(const Mat3& u);
bool is_unitary(const Mat3& u, double tol);

// Phase in [0, 2pi).
double phase_of(Complex z);

// conj(a x b): orthogonal to both a and b in the Hermitian inner product.
Vec3 hermitian_cross(const Vec3& a, const Vec3& b);

// Throws NotUnitary.
Spectrum3 eig_unitary3(const Mat3& u);

// Eigenvalues ordered by descending modulus; near-ties by ascending phase in [0, 2pi).
std::pair<Complex, Complex> eig2(const Mat2& a);
std::pair<Complex, Complex> roots_monic2(Complex trace, Complex det);

// Unit eigenvector of a for eigenvalue lambda.
Vec2 eigenvector2(const Mat2& a, Complex lambda);

// Descending.
std::pair<double, double> singular_values2(const Mat2& a);

}  // namespace qcl
