#include "qcl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qcl/errors.hpp"
#include "qcl/tolerances.hpp"

namespace qcl {

namespace {

// Bilinear (unconjugated) cross product.
Vec3 cross(const Vec3& a, const Vec3& b) {
  return Vec3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

double circular_distance(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, kTwoPi - d);
}

// Largest component made real and positive.
Vec3 fix_phase(Vec3 v) {
  int k = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(v[i]) > std::abs(v[k]) + 1e-14) k = i;
  }
  if (std::abs(v[k]) > 0.0) v *= std::conj(v[k]) / std::abs(v[k]);
  return v;
}

bool lex_less(const Vec3& a, const Vec3& b) {
  for (int i = 0; i < 3; ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

std::array<Complex, 3> cubic_roots(Complex a, Complex b, Complex c) {
  // lambda^3 + a lambda^2 + b lambda + c, via the depressed cubic
  const Complex shift = -a / 3.0;
  const Complex p = b - a * a / 3.0;
  const Complex q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const Complex sd = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  Complex w = -q / 2.0 + sd;
  const Complex w2 = -q / 2.0 - sd;
  if (std::abs(w2) > std::abs(w)) w = w2;
  std::array<Complex, 3> roots;
  if (std::abs(w) == 0.0) {
    roots.fill(shift);
    return roots;
  }
  const Complex cr = std::pow(w, 1.0 / 3.0);
  const Complex unity = std::polar(1.0, kTwoPi / 3.0);
  Complex ck = cr;
  for (int k = 0; k < 3; ++k) {
    roots[k] = ck - p / (3.0 * ck) + shift;
    ck *= unity;
  }
  return roots;
}

Vec3 null_vector_rank2(const Mat3& m) {
  const Vec3 r0 = m.row(0).transpose();
  const Vec3 r1 = m.row(1).transpose();
  const Vec3 r2 = m.row(2).transpose();
  // bilinear cross products annihilate the rows under m * x
  std::array<Vec3, 3> c = {cross(r0, r1), cross(r0, r2), cross(r1, r2)};
  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (c[i].norm() > c[best].norm()) best = i;
  }
  return c[best].normalized();
}

// Orthonormal basis of the complement of the unit vector n.
std::array<Vec3, 2> complement_basis(const Vec3& n) {
  std::array<int, 3> idx = {0, 1, 2};
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return std::abs(n[i]) < std::abs(n[j]); });
  std::array<Vec3, 2> out;
  for (int k = 0; k < 2; ++k) {
    Vec3 e = Vec3::Unit(idx[k]);
    e -= n * n.dot(e);
    if (k == 1) e -= out[0] * out[0].dot(e);
    out[k] = e.normalized();
  }
  return out;
}

constexpr double kCandidate = 1e-4;

std::array<Complex, 3> polished_roots(const Mat3& m) {
  const Complex tr = m.trace();
  const Complex det = m.determinant();
  const Complex minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                         m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  std::array<Complex, 3> roots = cubic_roots(-tr, minors, -det);
  const double scale = std::max({std::abs(roots[0]), std::abs(roots[1]), std::abs(roots[2]), 1e-300});
  for (auto& r : roots) {
    for (int it = 0; it < 2; ++it) {
      const Complex f = ((r - tr) * r + minors) * r - det;
      const Complex df = (3.0 * r - 2.0 * tr) * r + minors;
      if (f == 0.0 || std::abs(df) <= 1e-6 * scale * scale) break;
      r -= f / df;
    }
  }
  return roots;
}

// Eigenvectors of m for eigenvalues mu, where lam are the matching unit
// eigenvalues of U used to detect clusters.
std::array<Vec3, 3> eigenvectors(const Mat3& m, const std::array<Complex, 3>& mu, std::array<Complex, 3>& lam) {
  std::array<int, 3> label = {0, 1, 2};
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (circular_distance(phase_of(lam[i]), phase_of(lam[j])) <= tol::kCluster) {
        const int from = label[j], to = label[i];
        for (auto& l : label) {
          if (l == from) l = to;
        }
      }
    }
  }
  std::array<Vec3, 3> v;
  const int clusters = 1 + (label[1] != label[0]) + (label[2] != label[0] && label[2] != label[1]);
  if (clusters == 1) {
    for (int j = 0; j < 3; ++j) v[j] = Vec3::Unit(j);
  } else if (clusters == 3) {
    for (int j = 0; j < 3; ++j) v[j] = null_vector_rank2(m - mu[j] * Mat3::Identity());
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < j; ++k) v[j] -= v[k] * v[k].dot(v[j]);
      v[j].normalize();
    }
  } else {
    int single = 0;
    for (int j = 0; j < 3; ++j) {
      if (std::count(label.begin(), label.end(), label[j]) == 1) single = j;
    }
    v[single] = null_vector_rank2(m - mu[single] * Mat3::Identity());
    const auto basis = complement_basis(v[single]);
    int k = 0;
    for (int j = 0; j < 3; ++j) {
      if (j != single) v[j] = basis[k++];
    }
  }
  // members of a cluster share the phase of their mean
  std::array<Complex, 3> merged = lam;
  for (int i = 0; i < 3; ++i) {
    Complex mean = 0.0;
    for (int j = 0; j < 3; ++j) {
      if (label[j] == label[i]) mean += lam[j];
    }
    merged[i] = mean / std::abs(mean);
  }
  lam = merged;
  return v;
}

Spectrum3 finish(std::array<Complex, 3> lam, std::array<Vec3, 3> vec) {
  // equal-phase clusters from the pair path are already exact; snap the rest
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (circular_distance(phase_of(lam[i]), phase_of(lam[j])) <= tol::kCluster && lam[i] != lam[j]) {
        const Complex mean = (lam[i] + lam[j]) / std::abs(lam[i] + lam[j]);
        lam[i] = lam[j] = mean;
      }
    }
  }
  for (auto& v : vec) v = fix_phase(v);
  std::array<int, 3> order = {0, 1, 2};
  std::array<double, 3> ph;
  for (int j = 0; j < 3; ++j) ph[j] = phase_of(lam[j]);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (ph[i] != ph[j]) return ph[i] < ph[j];
    return lex_less(vec[i], vec[j]);
  });
  Spectrum3 s;
  for (int j = 0; j < 3; ++j) {
    s.phases[j] = ph[order[j]];
    s.vectors[j] = vec[order[j]];
  }
  return s;
}

}  // namespace

Mat3 Spectrum3::reconstruct() const {
  Mat3 m = Mat3::Zero();
  for (int j = 0; j < 3; ++j) m += eigenvalue(j) * vectors[j] * vectors[j].adjoint();
  return m;
}

double unitarity_defect(const Mat3& u) {
  return max_norm(u * u.adjoint() - Mat3::Identity());
}

bool is_unitary(const Mat3& u, double tol) { return unitarity_defect(u) <= tol; }

double phase_of(Complex z) {
  double a = std::arg(z);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

Vec3 hermitian_cross(const Vec3& a, const Vec3& b) { return cross(a, b).conjugate(); }

Spectrum3 eig_unitary3(const Mat3& u) {
  const double defect = unitarity_defect(u);
  if (!(defect <= tol::kUnit)) {
    std::ostringstream os;
    os << "matrix is not unitary: max |U U^dagger - I| = " << defect;
    throw NotUnitary(os.str());
  }
  std::array<Complex, 3> lam = polished_roots(u);
  for (auto& l : lam) l /= std::abs(l);
  std::sort(lam.begin(), lam.end(), [](Complex a, Complex b) { return phase_of(a) < phase_of(b); });

  // Roots of a repeated eigenvalue come out of the cubic spread by ~eps^(1/2) or
  // eps^(1/3). Near-coincident roots are re-solved on a deflated or shifted
  // problem, where normality of U keeps them accurate.
  const auto near = [](Complex a, Complex b) { return circular_distance(phase_of(a), phase_of(b)) <= kCandidate; };
  const bool n01 = near(lam[0], lam[1]), n12 = near(lam[1], lam[2]), n20 = near(lam[2], lam[0]);
  const int links = n01 + n12 + n20;

  std::array<Vec3, 3> vec;
  if (links >= 2) {
    const Complex m = u.trace() / 3.0;
    const Mat3 c = u - m * Mat3::Identity();
    std::array<Complex, 3> mu = polished_roots(c);
    for (int j = 0; j < 3; ++j) lam[j] = (m + mu[j]) / std::abs(m + mu[j]);
    vec = eigenvectors(c, mu, lam);
  } else if (links == 1) {
    const int k = n01 ? 2 : (n12 ? 0 : 1);
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    vec[k] = null_vector_rank2(u - lam[k] * Mat3::Identity());
    const auto q = complement_basis(vec[k]);
    Mat2 b;
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) b(r, s) = q[r].dot(u * q[s]);
    const Complex m = 0.5 * b.trace();
    const Complex mu = std::sqrt((b(0, 0) - m) * (b(0, 0) - m) + b(0, 1) * b(1, 0));
    lam[i] = (m + mu) / std::abs(m + mu);
    lam[j] = (m - mu) / std::abs(m - mu);
    if (circular_distance(phase_of(lam[i]), phase_of(lam[j])) <= tol::kCluster) {
      vec[i] = q[0];
      vec[j] = q[1];
    } else {
      for (int t : {i, j}) {
        const Complex l = t == i ? m + mu : m - mu;
        const Vec2 c1(b(0, 1), l - b(0, 0)), c2(l - b(1, 1), b(1, 0));
        const Vec2 w = (c1.norm() >= c2.norm() ? c1 : c2).normalized();
        vec[t] = (w[0] * q[0] + w[1] * q[1]).normalized();
      }
      vec[j] -= vec[i] * vec[i].dot(vec[j]);
      vec[j].normalize();
    }
  } else {
    std::array<Complex, 3> shift = lam;
    vec = eigenvectors(u, shift, lam);
  }
  return finish(lam, vec);
}

std::pair<Complex, Complex> roots_monic2(Complex trace, Complex det) {
  const Complex disc = trace * trace - 4.0 * det;
  // a discriminant at rounding level is a double root; its square root would be noise
  const double noise = 32.0 * std::numeric_limits<double>::epsilon() * (std::norm(trace) + 4.0 * std::abs(det));
  if (std::abs(disc) <= noise) return {0.5 * trace, 0.5 * trace};
  const Complex sd = std::sqrt(disc);
  const Complex a = 0.5 * (trace + sd);
  const Complex b = 0.5 * (trace - sd);
  Complex r1 = std::abs(a) >= std::abs(b) ? a : b;
  Complex r2 = std::abs(r1) > 0.0 ? det / r1 : trace - r1;
  if (std::abs(std::abs(r1) - std::abs(r2)) <= tol::kNum) {
    if (phase_of(r2) < phase_of(r1)) std::swap(r1, r2);
  } else if (std::abs(r2) > std::abs(r1)) {
    std::swap(r1, r2);
  }
  return {r1, r2};
}

std::pair<Complex, Complex> eig2(const Mat2& a) { return roots_monic2(a.trace(), a.determinant()); }

Vec2 eigenvector2(const Mat2& a, Complex lambda) {
  const Vec2 c1(a(0, 1), lambda - a(0, 0));
  const Vec2 c2(lambda - a(1, 1), a(1, 0));
  const Vec2& v = c1.norm() >= c2.norm() ? c1 : c2;
  if (v.norm() < 1e-300) return Vec2(1.0, 0.0);
  return v.normalized();
}

std::pair<double, double> singular_values2(const Mat2& a) {
  const double t = a.squaredNorm();
  const double d = std::abs(a.determinant());
  const double big = 0.5 * t + std::sqrt(std::max(0.0, 0.25 * t * t - d * d));
  const double s1 = std::sqrt(big);
  const double s2 = s1 > 0.0 ? d / s1 : 0.0;
  return {s1, s2};
}

}  // namespace qcl
