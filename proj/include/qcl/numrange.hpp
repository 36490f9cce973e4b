#pragma once

#include <array>
#include <string>

#include "qcl/linalg.hpp"
#include "qcl/tolerances.hpp"

namespace qcl {

enum class RangeKind { Point, Chord, Diameter, Acute, Equilateral, RightAngled, Obtuse };

std::string to_string(RangeKind k);

// W(U): the convex hull of the eigenvalues of a unitary.
struct NumericalRange {
  Spectrum3 spectrum;
  std::array<Complex, 3> vertices;  // eigenvalues, in spectrum order
  int distinct = 3;                 // number of distinct vertices
  RangeKind kind = RangeKind::Acute;

  bool is_triangle() const { return distinct == 3; }
};

NumericalRange numerical_range(const Mat3& u);
NumericalRange numerical_range(const Spectrum3& s);

// Barycentric coordinates w.r.t. the three vertices. Throws DegenerateRange for
// fewer than three distinct vertices.
std::array<double, 3> barycentric(const NumericalRange& w, Complex omega);

// Weights on the eigenvectors with sum(weights * vertices) = omega. Works for all
// kinds; a point off a degenerate range gets a negative weight of its distance.
std::array<double, 3> range_weights(const NumericalRange& w, Complex omega);

enum class Location { Outside, Vertex, Edge, Interior };

Location locate(const NumericalRange& w, Complex omega, double eps_geo = tol::kGeo);

// A unit z with <z|U z> = omega. Throws OutsideRange.
Vec3 z_from_omega(const Mat3& u, Complex omega);
Vec3 z_from_omega(const NumericalRange& w, Complex omega);

// Diagonal unitary in the eigenbasis of U with V z = z_tilde and [V, U] = 0.
// Throws OmegaMismatch or DegenerateSpectrum.
Mat3 conjugator(const Mat3& u, const Vec3& z, const Vec3& z_tilde);

// Frame U' = exp(-i Arg(det U)/3) U, alpha + i beta = tr U'.
struct CubicFrame {
  Complex rotation;  // exp(-i Arg(det U)/3)
  double alpha = 0.0;
  double beta = 0.0;

  Complex to_frame(Complex omega) const { return rotation * omega; }
  Complex from_frame(Complex w) const { return w / rotation; }
};

CubicFrame cubic_frame(const Mat3& u);

// Cubic in the rotated frame whose zero set contains every elliptic parameter.
double musselman_eval(const CubicFrame& c, double x, double y);
// Gradient (d/dx, d/dy).
std::array<double, 2> musselman_grad(const CubicFrame& c, double x, double y);

}  // namespace qcl
