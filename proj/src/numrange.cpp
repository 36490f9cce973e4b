#include "qcl/numrange.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcl/errors.hpp"

namespace qcl {

std::string to_string(RangeKind k) {
  switch (k) {
    case RangeKind::Point: return "Point";
    case RangeKind::Chord: return "Chord";
    case RangeKind::Diameter: return "Diameter";
    case RangeKind::Acute: return "Acute";
    case RangeKind::Equilateral: return "Equilateral";
    case RangeKind::RightAngled: return "RightAngled";
    case RangeKind::Obtuse: return "Obtuse";
  }
  return "?";
}

NumericalRange numerical_range(const Mat3& u) { return numerical_range(eig_unitary3(u)); }

NumericalRange numerical_range(const Spectrum3& s) {
  NumericalRange w;
  w.spectrum = s;
  for (int j = 0; j < 3; ++j) w.vertices[j] = s.eigenvalue(j);
  w.distinct = 1;
  for (int j = 1; j < 3; ++j) {
    if (s.phases[j] != s.phases[j - 1]) ++w.distinct;
  }
  if (w.distinct == 1) {
    w.kind = RangeKind::Point;
  } else if (w.distinct == 2) {
    const Complex a = w.vertices[0];
    const Complex b = s.phases[1] != s.phases[0] ? w.vertices[1] : w.vertices[2];
    w.kind = std::abs(a + b) <= tol::kGeo ? RangeKind::Diameter : RangeKind::Chord;
  } else {
    std::array<double, 3> ang;
    for (int j = 0; j < 3; ++j) {
      const Complex p = w.vertices[(j + 1) % 3] - w.vertices[j];
      const Complex q = w.vertices[(j + 2) % 3] - w.vertices[j];
      ang[j] = std::abs(std::arg(q / p));
    }
    const double big = *std::max_element(ang.begin(), ang.end());
    const bool equilateral =
        std::all_of(ang.begin(), ang.end(), [](double a) { return std::abs(a - kPi / 3.0) <= tol::kGeo; });
    if (equilateral) {
      w.kind = RangeKind::Equilateral;
    } else if (std::abs(big - kPi / 2.0) <= tol::kGeo) {
      w.kind = RangeKind::RightAngled;
    } else if (big > kPi / 2.0) {
      w.kind = RangeKind::Obtuse;
    } else {
      w.kind = RangeKind::Acute;
    }
  }
  return w;
}

std::array<double, 3> barycentric(const NumericalRange& w, Complex omega) {
  if (!w.is_triangle()) throw DegenerateRange("numerical range is " + to_string(w.kind));
  Eigen::Matrix3d m;
  Eigen::Vector3d rhs(omega.real(), omega.imag(), 1.0);
  for (int j = 0; j < 3; ++j) m.col(j) << w.vertices[j].real(), w.vertices[j].imag(), 1.0;
  const Eigen::Vector3d a = m.partialPivLu().solve(rhs);
  return {a[0], a[1], a[2]};
}

std::array<double, 3> range_weights(const NumericalRange& w, Complex omega) {
  if (w.is_triangle()) return barycentric(w, omega);
  std::array<double, 3> out = {0.0, 0.0, 0.0};
  if (w.distinct == 1) {
    const double d = std::abs(omega - w.vertices[0]);
    out[0] = d <= tol::kGeo ? 1.0 : -d;
    return out;
  }
  const int ib = w.spectrum.phases[1] != w.spectrum.phases[0] ? 1 : 2;
  const Complex a = w.vertices[0], b = w.vertices[ib];
  const Complex r = (omega - a) / (b - a);
  const double off = std::abs(r.imag()) * std::abs(b - a);
  out[0] = 1.0 - r.real();
  out[ib] = r.real();
  // off the chord: report the distance as a negative weight
  if (off > tol::kGeo) out[3 - ib] = -off;
  return out;
}

Location locate(const NumericalRange& w, Complex omega, double eps_geo) {
  const auto a = range_weights(w, omega);
  const double lo = *std::min_element(a.begin(), a.end());
  const double hi = *std::max_element(a.begin(), a.end());
  if (lo < -eps_geo) return Location::Outside;
  if (hi >= 1.0 - eps_geo) return Location::Vertex;
  if (!w.is_triangle() || lo <= eps_geo) return Location::Edge;
  return Location::Interior;
}

Vec3 z_from_omega(const Mat3& u, Complex omega) { return z_from_omega(numerical_range(u), omega); }

Vec3 z_from_omega(const NumericalRange& w, Complex omega) {
  auto a = range_weights(w, omega);
  const double lo = *std::min_element(a.begin(), a.end());
  if (lo < -tol::kGeo) {
    std::ostringstream os;
    os << "omega = " << omega.real() << (omega.imag() < 0 ? "" : "+") << omega.imag()
       << "i lies outside the numerical range";
    throw OutsideRange(os.str());
  }
  double sum = 0.0;
  for (auto& x : a) {
    x = std::max(x, 0.0);
    sum += x;
  }
  Vec3 z = Vec3::Zero();
  for (int j = 0; j < 3; ++j) z += std::sqrt(a[j] / sum) * w.spectrum.vectors[j];
  return z.normalized();
}

Mat3 conjugator(const Mat3& u, const Vec3& z, const Vec3& z_tilde) {
  const Spectrum3 s = eig_unitary3(u);
  for (int j = 0; j < 3; ++j) {
    double gap = std::abs(s.phases[(j + 1) % 3] - s.phases[j]);
    gap = std::min(gap, kTwoPi - gap);
    if (gap <= tol::kCluster) throw DegenerateSpectrum("U has a repeated eigenvalue");
  }
  const Complex w1 = z.dot(u * z), w2 = z_tilde.dot(u * z_tilde);
  if (std::abs(w1 - w2) > tol::kNum) {
    std::ostringstream os;
    os << "<z|Uz> and <z~|Uz~> differ by " << std::abs(w1 - w2);
    throw OmegaMismatch(os.str());
  }
  Mat3 v = Mat3::Zero();
  for (int j = 0; j < 3; ++j) {
    const Complex a = s.vectors[j].dot(z);
    const Complex b = s.vectors[j].dot(z_tilde);
    const double gamma = (std::abs(a) == 0.0 || std::abs(b) == 0.0) ? 0.0 : std::arg(b / a);
    v += std::polar(1.0, gamma) * s.vectors[j] * s.vectors[j].adjoint();
  }
  return v;
}

CubicFrame cubic_frame(const Mat3& u) {
  CubicFrame c;
  c.rotation = std::polar(1.0, -std::arg(u.determinant()) / 3.0);
  const Complex t = c.rotation * u.trace();
  c.alpha = t.real();
  c.beta = t.imag();
  return c;
}

double musselman_eval(const CubicFrame& c, double x, double y) {
  const double a = c.alpha, b = c.beta;
  return y * y * y - 3.0 * x * x * y + 2.0 * b * x * x + 4.0 * a * x * y - 2.0 * b * y * y -
         2.0 * a * b * x + b * b * y - a * a * y;
}

std::array<double, 2> musselman_grad(const CubicFrame& c, double x, double y) {
  const double a = c.alpha, b = c.beta;
  return {-6.0 * x * y + 4.0 * b * x + 4.0 * a * y - 2.0 * a * b,
          3.0 * y * y - 3.0 * x * x + 4.0 * a * x - 4.0 * b * y + b * b - a * a};
}

}  // namespace qcl
