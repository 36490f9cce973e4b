#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcl/quantum.hpp"
#include "qcl/tolerances.hpp"

namespace qcl {

// Compression of U to the ball Theta = z^perp, in an orthonormal basis (u1, u2).
struct SubsystemMap {
  Pifs pifs;
  std::array<Vec3, 2> basis;
  Mat2 a;
  Vec2 v2;  // coordinates of Pi_1 U z
  Complex omega;
  Complex lambda1, lambda2;
  std::optional<double> psi;  // Arg(lambda2 / lambda1) when both are nonzero

  Vec3 embed(const Vec2& c) const { return c[0] * basis[0] + c[1] * basis[1]; }
  // Eigenvectors of a for lambda1 and lambda2, embedded in C^3.
  Vec3 e1() const;
  Vec3 e2() const;
  // (tr A)^2 - 4 det A.
  Complex discriminant() const;
  // Tested on det A = conj(omega) det U and tr A, which are accurate to rounding;
  // the eigenvalues of a nilpotent A carry sqrt(eps) noise.
  bool singular(double eps) const { return std::abs(a.determinant()) <= eps || std::abs(lambda2) <= eps; }
  bool nilpotent(double eps) const { return singular(eps) && std::abs(a.trace()) <= eps; }
};

SubsystemMap build_subsystem(const Pifs& f);

// Eigenvalues of A from tr A = tr U - omega and det A = conj(omega) det U.
std::pair<Complex, Complex> characteristic_eigenvalues(const Pifs& f);

enum class MobiusClass { Trivial, Loxodromic, Elliptic, Parabolic, SingularS1, SingularS2 };

std::string to_string(MobiusClass c);

MobiusClass mobius_class(const SubsystemMap& s, double eps = tol::kClass);

enum class FixedPointKind { Attractive, Repulsive, Neutral };

struct FixedPoint {
  DensityMatrix state;
  FixedPointKind kind;
};

struct FixedPointSet {
  std::vector<FixedPoint> points;
  // For the elliptic class every convex combination of the two points is fixed.
  bool segment = false;
};

// Throws SubsystemUnitary when |lambda2| >= 1 - eps.
FixedPointSet fixed_points(const SubsystemMap& s, double eps = tol::kClass);

enum class Termination { ConvergedTo, Periodic, TruncatedAtN, LeftDomain };

std::string to_string(Termination t);

struct Trajectory {
  std::vector<DensityMatrix> states;  // states[0] is the start
  Termination termination = Termination::TruncatedAtN;
  int period = 0;
  std::optional<DensityMatrix> limit;
};

// Iterates F1 = evolve(1, .) from rho0.
Trajectory iterate_f1(const SubsystemMap& s, const DensityMatrix& rho0,
                      std::size_t n_max = tol::kTrajectoryMax, int max_lag = 256);

struct BallReport {
  MobiusClass mobius;
  FixedPointSet fixed;
  Trajectory from_m;
  std::optional<Trajectory> from_v;  // absent when rho_v is undefined
};

BallReport analyze_ball(const SubsystemMap& s, std::size_t n_max = tol::kTrajectoryMax);

enum class RhoVDetail { Regular, Fixed, OutOfDomain };

struct RhoVSingularity {
  bool singular = false;
  RhoVDetail detail = RhoVDetail::Regular;
};

// Singular iff |lambda1| = 1. Throws SubsystemUnitary.
RhoVSingularity rho_v_is_singular(const SubsystemMap& s, double eps = tol::kClass);

// A unitary whose leading 2x2 principal block has eigenvalues mu1, mu2 (|mu_i| <= 1),
// so that z = e3 realizes them as lambda1, lambda2.
Mat3 block_realization(Complex mu1, Complex mu2);

}  // namespace qcl
