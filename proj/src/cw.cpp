#include "qcl/cw.hpp"

#include <cmath>
#include <sstream>

#include "qcl/atlas.hpp"
#include "qcl/classifier.hpp"

namespace qcl::cw {

namespace {

const double kSqrt2 = std::sqrt(2.0);

Check make(std::string name, bool ok, const std::string& detail) { return {std::move(name), ok, detail}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

std::string fmt(Complex v) {
  std::ostringstream os;
  os.precision(12);
  os << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
  return os.str();
}

enum class Band { Taupek, Generic, GenericNull, Elliptic, Unitary };

Band expected_band(double w) {
  if (w <= omega_b()) return Band::Taupek;
  if (w < 0.0) return Band::Generic;
  if (w == 0.0) return Band::GenericNull;
  if (w <= omega_p()) return Band::Generic;
  if (w < 1.0) return Band::Elliptic;
  return Band::Unitary;
}

bool in_band(const ChainType& t, Band b) {
  switch (b) {
    case Band::Taupek: return t.kind == ChainKind::Taupek;
    case Band::Generic: return t.kind == ChainKind::Generic;
    case Band::GenericNull: return t.kind == ChainKind::GenericNull;
    case Band::Elliptic: return t.is_elliptic();
    case Band::Unitary: return t.kind == ChainKind::Unitary;
  }
  return false;
}

ChainType eigen_route(const Mat3& u, Complex w) {
  return classify_by_eigen(build_subsystem(Pifs(u, z_from_omega(u, w))));
}

}  // namespace

Mat3 unitary() {
  const double r = 1.0 / kSqrt2;
  Mat3 u;
  u << r, r, 0.0,
       0.0, 0.0, -1.0,
       -r, r, 0.0;
  return u;
}

double gamma() { return std::acos((kSqrt2 - 2.0) / 4.0); }
double omega_b() { return (kSqrt2 - 2.0) / 4.0; }
double omega_p() { return kSqrt2 / 2.0 + 2.0 - std::sqrt(4.0 + 2.0 * kSqrt2); }
double parabolic_eigenvalue() { return std::sqrt(2.0 + kSqrt2) / kSqrt2 - 1.0; }
Complex circular_eigenvalue() { return {0.0, std::pow(2.0, -0.25)}; }

std::vector<Check> run_checks(int atlas_resolution) {
  std::vector<Check> out;
  const Mat3 u = unitary();
  const Complex tr = u.trace(), det = u.determinant();

  out.push_back(make("trace", std::abs(tr - 1.0 / kSqrt2) <= 1e-12, "tr U = " + fmt(tr)));
  out.push_back(make("determinant", std::abs(det - 1.0) <= 1e-12, "det U = " + fmt(det)));

  const Spectrum3 s = eig_unitary3(u);
  const double g = gamma();
  const double phase_err = std::max({std::abs(s.phases[0]), std::abs(s.phases[1] - g),
                                     std::abs(s.phases[2] - (kTwoPi - g))});
  out.push_back(make("spectrum", phase_err <= 1e-9,
                     "phases {0, gamma, 2pi-gamma}, gamma = " + fmt(g) + ", max error " + fmt(phase_err)));

  const double wb_numeric = std::cos(s.phases[1]);
  out.push_back(make("omega_b", std::abs(wb_numeric - omega_b()) <= 1e-12 && std::abs(omega_b() + 0.146) < 1e-3,
                     "omega_b = " + fmt(omega_b()) + ", from spectrum " + fmt(wb_numeric)));

  // real root in (0, tr U) of (t - w)^2 - 4 w det U
  double lo = 0.0, hi = tr.real();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Complex d = (tr - mid) * (tr - mid) - 4.0 * mid * det;
    (d.real() > 0.0 ? lo : hi) = mid;
  }
  const double wp_numeric = 0.5 * (lo + hi);
  out.push_back(make("omega_p", std::abs(wp_numeric - omega_p()) <= 1e-12 && std::abs(omega_p() - 0.094) < 1e-3,
                     "omega_p = " + fmt(omega_p()) + ", discriminant root " + fmt(wp_numeric)));

  {
    const SubsystemMap sub = build_subsystem(Pifs(u, z_from_omega(u, omega_p())));
    const double pe = parabolic_eigenvalue();
    const double err = std::max(std::abs(sub.lambda1 - pe), std::abs(sub.lambda2 - pe));
    const bool ok = err <= 1e-9 && mobius_class(sub) == MobiusClass::Parabolic &&
                    std::abs(pe - (tr.real() - omega_p()) / 2.0) <= 1e-12;
    out.push_back(make("parabolic eigenvalue", ok,
                       "lambda1 = " + fmt(sub.lambda1) + ", lambda2 = " + fmt(sub.lambda2) + ", expected " + fmt(pe)));
  }
  {
    const SubsystemMap sub = build_subsystem(Pifs(u, Vec3::Unit(0)));
    const Complex c = circular_eigenvalue();
    const double err = std::max(std::abs(sub.lambda1 - c), std::abs(sub.lambda2 + c));
    const ChainType t = classify_by_eigen(sub);
    const bool ok = err <= 1e-9 && std::abs(sub.omega - tr) <= 1e-12 && t.kind == ChainKind::FiniteElliptic &&
                    t.kappa == 2;
    out.push_back(make("circular eigenvalues", ok,
                       "lambda1 = " + fmt(sub.lambda1) + ", lambda2 = " + fmt(sub.lambda2) + ", type " + to_string(t)));
  }
  {
    const SubsystemMap sub = build_subsystem(Pifs(u, Vec3::Unit(1)));
    const ChainType t = classify_by_eigen(sub);
    const bool ok = std::abs(sub.omega) <= 1e-12 && t.kind == ChainKind::GenericNull &&
                    std::abs(sub.lambda1 - 1.0 / kSqrt2) <= 1e-12 && std::abs(sub.lambda2) <= 1e-12;
    out.push_back(make("null chain at e2", ok, "type " + to_string(t) + ", lambda1 = " + fmt(sub.lambda1)));
  }
  {
    const double ends[] = {omega_b(), 0.0, omega_p(), 1.0};
    int checked = 0, bad = 0;
    std::string first_bad;
    auto probe = [&](double w) {
      const ChainType a = classify_by_range(u, w);
      const ChainType b = eigen_route(u, w);
      ++checked;
      if (!in_band(a, expected_band(w)) || !in_band(b, expected_band(w))) {
        if (bad++ == 0) first_bad = "omega = " + fmt(w) + ": " + to_string(a) + " / " + to_string(b);
      }
    };
    for (double w : ends) probe(w);
    const int n = 400;
    for (int k = 1; k < n; ++k) {
      const double w = omega_b() + (1.0 - omega_b()) * k / n;
      bool near_end = false;
      for (double e : ends) near_end = near_end || std::abs(w - e) <= 1e-6;
      if (!near_end) probe(w);
    }
    const ChainType circ = classify_by_range(u, tr);
    if (!(circ.kind == ChainKind::FiniteElliptic && circ.kappa == 2) && bad++ == 0) first_bad = "omega = tr U";
    out.push_back(make("real axis table", bad == 0,
                       std::to_string(checked) + " points, " + std::to_string(bad) + " mismatches" +
                           (bad ? " (first: " + first_bad + ")" : "")));
  }
  {
    const RangeAtlas at = render_atlas(u, atlas_resolution);
    std::vector<const AtlasCell*> off_axis;
    for (const AtlasCell& c : at.cells) {
      if (c.type.is_elliptic() && std::abs(c.y) > at.cell) off_axis.push_back(&c);
    }
    double worst = 0.0;
    const std::size_t picks = std::min<std::size_t>(20, off_axis.size());
    for (std::size_t k = 0; k < picks; ++k) {
      const AtlasCell& c = *off_axis[k * off_axis.size() / picks];
      const double dx = c.x - kSqrt2 / 3.0;
      worst = std::max(worst, std::abs(18.0 * dx * dx - 6.0 * c.y * c.y - 1.0));
    }
    out.push_back(make("hyperbola", picks == 20 && worst <= 0.05,
                       std::to_string(picks) + " off-axis elliptic cells of " + std::to_string(off_axis.size()) +
                           ", max residual " + fmt(worst)));
  }
  return out;
}

}  // namespace qcl::cw
