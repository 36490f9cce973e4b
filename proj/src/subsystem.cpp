#include "qcl/subsystem.hpp"

#include <algorithm>
#include <cmath>

#include "qcl/errors.hpp"

namespace qcl {

namespace {

bool has_attractor(MobiusClass c) {
  return c == MobiusClass::Loxodromic || c == MobiusClass::Parabolic || c == MobiusClass::SingularS1;
}

}  // namespace

Vec3 SubsystemMap::e1() const {
  if (nilpotent(tol::kNum)) {
    // im A = ker A
    const Vec2 c = a.col(0).norm() >= a.col(1).norm() ? Vec2(a.col(0)) : Vec2(a.col(1));
    if (c.norm() > 0.0) return embed(c.normalized());
  }
  return embed(eigenvector2(a, lambda1));
}

Vec3 SubsystemMap::e2() const { return embed(eigenvector2(a, lambda2)); }

Complex SubsystemMap::discriminant() const {
  const Complex t = a.trace();
  return t * t - 4.0 * a.determinant();
}

SubsystemMap build_subsystem(const Pifs& f) {
  const Vec3& z = f.z();
  std::array<int, 3> idx = {0, 1, 2};
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return std::abs(z[i]) < std::abs(z[j]); });
  std::array<Vec3, 2> basis;
  for (int k = 0; k < 2; ++k) {
    Vec3 e = Vec3::Unit(idx[k]);
    e -= z * z.dot(e);
    if (k == 1) e -= basis[0] * basis[0].dot(e);
    basis[k] = e.normalized();
  }
  const Mat3& u = f.unitary();
  Mat2 a;
  Vec2 v2;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) a(i, j) = basis[i].dot(u * basis[j]);
    v2[i] = basis[i].dot(u * z);
  }
  const auto [l1, l2] = eig2(a);
  std::optional<double> psi;
  if (std::abs(l1) > 0.0 && std::abs(l2) > tol::kNum) psi = std::arg(l2 / l1);
  return SubsystemMap{f, basis, a, v2, f.omega(), l1, l2, psi};
}

std::pair<Complex, Complex> characteristic_eigenvalues(const Pifs& f) {
  const Mat3& u = f.unitary();
  return roots_monic2(u.trace() - f.omega(), std::conj(f.omega()) * u.determinant());
}

std::string to_string(MobiusClass c) {
  switch (c) {
    case MobiusClass::Trivial: return "Trivial";
    case MobiusClass::Loxodromic: return "Loxodromic";
    case MobiusClass::Elliptic: return "Elliptic";
    case MobiusClass::Parabolic: return "Parabolic";
    case MobiusClass::SingularS1: return "SingularS1";
    case MobiusClass::SingularS2: return "SingularS2";
  }
  return "?";
}

MobiusClass mobius_class(const SubsystemMap& s, double eps) {
  const double m1 = std::abs(s.lambda1), m2 = std::abs(s.lambda2);
  if (s.singular(eps)) return s.nilpotent(eps) ? MobiusClass::SingularS2 : MobiusClass::SingularS1;
  // eigenvalues of a defective matrix carry sqrt(eps) noise, so test the discriminant
  if (std::abs(s.discriminant()) <= eps) {
    return m1 >= 1.0 - eps ? MobiusClass::Trivial : MobiusClass::Parabolic;
  }
  if (std::abs(m1 - m2) <= eps && s.psi && std::abs(*s.psi) > eps) return MobiusClass::Elliptic;
  return MobiusClass::Loxodromic;
}

FixedPointSet fixed_points(const SubsystemMap& s, double eps) {
  if (std::abs(s.lambda2) >= 1.0 - eps) throw SubsystemUnitary("A is unitary; every ball state is fixed");
  FixedPointSet out;
  switch (mobius_class(s, eps)) {
    case MobiusClass::Loxodromic:
      out.points.push_back({DensityMatrix::pure(s.e1()), FixedPointKind::Attractive});
      out.points.push_back({DensityMatrix::pure(s.e2()), FixedPointKind::Repulsive});
      break;
    case MobiusClass::Elliptic:
      out.points.push_back({DensityMatrix::pure(s.e1()), FixedPointKind::Neutral});
      out.points.push_back({DensityMatrix::pure(s.e2()), FixedPointKind::Neutral});
      out.segment = true;
      break;
    case MobiusClass::Parabolic:
    case MobiusClass::SingularS1:
      out.points.push_back({DensityMatrix::pure(s.e1()), FixedPointKind::Attractive});
      break;
    case MobiusClass::SingularS2:
    case MobiusClass::Trivial:
      break;
  }
  return out;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::ConvergedTo: return "ConvergedTo";
    case Termination::Periodic: return "Periodic";
    case Termination::TruncatedAtN: return "TruncatedAtN";
    case Termination::LeftDomain: return "LeftDomain";
  }
  return "?";
}

Trajectory iterate_f1(const SubsystemMap& s, const DensityMatrix& rho0, std::size_t n_max, int max_lag) {
  const MobiusClass cls = mobius_class(s);
  const bool attract = has_attractor(cls);
  std::optional<DensityMatrix> target;
  if (attract) target = DensityMatrix::pure(s.e1());
  // slow geometric convergence must not pass for a fixed point
  const double fixed_tol = attract ? 1e-12 : tol::kFix;

  Trajectory tr;
  tr.states.push_back(rho0);
  int streak = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const DensityMatrix& cur = tr.states.back();
    if (prob(s.pifs, Outcome::Ball, cur) <= tol::kProb) {
      tr.termination = Termination::LeftDomain;
      return tr;
    }
    DensityMatrix next = evolve(s.pifs, Outcome::Ball, cur);
    tr.states.push_back(next);
    const DensityMatrix& nx = tr.states.back();
    const DensityMatrix& pv = tr.states[n - 1];
    if (target) {
      streak = nx.distance(*target) < tol::kConv ? streak + 1 : 0;
      if (streak >= 10) {
        tr.termination = Termination::ConvergedTo;
        tr.limit = *target;
        return tr;
      }
      if (streak > 0) continue;
    }
    if (nx.distance(pv) < fixed_tol) {
      tr.termination = Termination::ConvergedTo;
      tr.limit = nx;
      return tr;
    }
    if (!attract) {
      const std::size_t lags = std::min<std::size_t>(n, static_cast<std::size_t>(max_lag));
      for (std::size_t k = 2; k <= lags; ++k) {
        if (nx.distance(tr.states[n - k]) < tol::kConv) {
          tr.termination = Termination::Periodic;
          tr.period = static_cast<int>(k);
          return tr;
        }
      }
    }
  }
  tr.termination = Termination::TruncatedAtN;
  return tr;
}

BallReport analyze_ball(const SubsystemMap& s, std::size_t n_max) {
  BallReport r{mobius_class(s), fixed_points(s), iterate_f1(s, rho_m(s.pifs), n_max), std::nullopt};
  if (std::abs(s.omega) < 1.0 - tol::kNum) r.from_v = iterate_f1(s, rho_v(s.pifs), n_max);
  return r;
}

RhoVSingularity rho_v_is_singular(const SubsystemMap& s, double eps) {
  if (std::abs(s.lambda2) >= 1.0 - eps) throw SubsystemUnitary("A is unitary");
  RhoVSingularity r;
  if (std::abs(s.lambda1) >= 1.0 - eps) {
    r.singular = true;
    r.detail = std::abs(s.lambda2) > eps ? RhoVDetail::Fixed : RhoVDetail::OutOfDomain;
  }
  return r;
}

Mat3 block_realization(Complex mu1, Complex mu2) {
  const double a = std::min(std::abs(mu1), 1.0), b = std::min(std::abs(mu2), 1.0);
  const double ca = std::sqrt(1.0 - a * a), cb = std::sqrt(1.0 - b * b);
  const double arg1 = a > 0.0 ? std::arg(mu1) : 0.0;
  const double arg2 = b > 0.0 ? std::arg(mu2) : 0.0;
  const Complex ph = std::polar(1.0, arg2 - arg1);
  Mat3 v;
  v << a, ca * cb, -b * ca,
       0.0, b * ph, cb * ph,
       ca, -a * cb, a * b;
  return std::polar(1.0, arg1) * v;
}

}  // namespace qcl
