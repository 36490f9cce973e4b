#include "qcl/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcl/errors.hpp"
#include "qcl/tolerances.hpp"

namespace qcl {

std::array<double, 3> hermitian_eigenvalues(const Mat3& h) {
  Mat3 m = 0.5 * (h + h.adjoint());
  for (int sweep = 0; sweep < 20; ++sweep) {
    double off = std::abs(m(0, 1)) + std::abs(m(0, 2)) + std::abs(m(1, 2));
    if (off < 1e-300) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double b = std::abs(m(p, q));
        if (b < 1e-300) continue;
        const Complex phase = m(p, q) / b;
        const double theta = (m(q, q).real() - m(p, p).real()) / (2.0 * b);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        Mat3 g = Mat3::Identity();
        g(p, p) = c;
        g(p, q) = s;
        g(q, p) = -s * std::conj(phase);
        g(q, q) = c * std::conj(phase);
        m = g.adjoint() * m * g;
      }
    }
  }
  std::array<double, 3> ev = {m(0, 0).real(), m(1, 1).real(), m(2, 2).real()};
  std::sort(ev.begin(), ev.end());
  return ev;
}

DensityMatrix::DensityMatrix(const Mat3& m) : m_(m) {
  std::ostringstream os;
  const double herm = max_norm(m - m.adjoint());
  const double tr = std::abs(m.trace() - 1.0);
  if (herm > tol::kNum) {
    os << "not Hermitian (defect " << herm << ")";
    throw InvalidState(os.str());
  }
  if (tr > tol::kNum) {
    os << "trace differs from 1 by " << tr;
    throw InvalidState(os.str());
  }
  const double low = hermitian_eigenvalues(m)[0];
  if (low < -tol::kNum) {
    os << "negative eigenvalue " << low;
    throw InvalidState(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

DensityMatrix DensityMatrix::pure(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw InvalidState("zero vector");
  const Vec3 u = v / n;
  return trusted(u * u.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed() { return trusted(Mat3::Identity() / 3.0); }

DensityMatrix DensityMatrix::trusted(const Mat3& m) {
  DensityMatrix d;
  d.m_ = m;
  return d;
}

Pvm21::Pvm21(const Vec3& z) {
  const double n = z.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidState("z must be a nonzero vector");
  z_ = z / n;
}

Pifs::Pifs(const Mat3& u, const Vec3& z) : u_(u), pvm_(z) {
  const double defect = unitarity_defect(u);
  if (!(defect <= tol::kUnit)) {
    std::ostringstream os;
    os << "matrix is not unitary: max |U U^dagger - I| = " << defect;
    throw NotUnitary(os.str());
  }
  pi2_ = pvm_.pi2();
  pi1_ = Mat3::Identity() - pi2_;
  omega_ = pvm_.z().dot(u_ * pvm_.z());
}

double prob(const Pifs& f, Outcome i, const DensityMatrix& rho) {
  const Mat3 sigma = f.unitary() * rho.matrix() * f.unitary().adjoint();
  const double p = (f.projector(i) * sigma).trace().real();
  return std::clamp(p, 0.0, 1.0);
}

DensityMatrix evolve(const Pifs& f, Outcome i, const DensityMatrix& rho) {
  const Mat3 sigma = f.unitary() * rho.matrix() * f.unitary().adjoint();
  const Mat3& pi = f.projector(i);
  const Mat3 post = pi * sigma * pi;
  const double p = post.trace().real();
  if (!(p > tol::kProb)) {
    std::ostringstream os;
    os << "outcome " << static_cast<int>(i) << " has probability " << p;
    throw ZeroProbability(os.str());
  }
  return DensityMatrix::trusted(0.5 * (post + post.adjoint()) / p);
}

double string_prob(const Pifs& f, const std::vector<Outcome>& outcomes, const DensityMatrix& rho0) {
  double total = 1.0;
  DensityMatrix rho = rho0;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const double p = prob(f, outcomes[k], rho);
    total *= p;
    if (total <= tol::kProb) return 0.0;
    if (k + 1 < outcomes.size()) rho = evolve(f, outcomes[k], rho);
  }
  return total;
}

DensityMatrix rho_z(const Pifs& f) { return DensityMatrix::pure(f.z()); }

DensityMatrix rho_m(const Pifs& f) { return DensityMatrix::trusted(0.5 * f.projector(Outcome::Ball)); }

DensityMatrix rho_v(const Pifs& f) { return evolve(f, Outcome::Ball, rho_z(f)); }

Vec3 unique_unit_prob_vector(const Pifs& f) {
  if (std::abs(f.omega()) >= 1.0 - tol::kNum) {
    throw SubsystemUnitary("|omega| = 1: every ball state stays in the ball");
  }
  const Vec3 back = f.unitary().adjoint() * f.z();
  return hermitian_cross(f.z(), back).normalized();
}

DensityMatrix unique_unit_prob_state(const Pifs& f) {
  return DensityMatrix::pure(unique_unit_prob_vector(f));
}

}  // namespace qcl
