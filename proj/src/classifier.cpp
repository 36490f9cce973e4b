#include "qcl/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcl/errors.hpp"

namespace qcl {

std::string to_string(ChainKind k) {
  switch (k) {
    case ChainKind::Unitary: return "Unitary";
    case ChainKind::GenericNull: return "GenericNull";
    case ChainKind::TaupekNull: return "TaupekNull";
    case ChainKind::DoubleNull: return "DoubleNull";
    case ChainKind::Taupek: return "Taupek";
    case ChainKind::FiniteElliptic: return "FiniteElliptic";
    case ChainKind::InfiniteElliptic: return "InfiniteElliptic";
    case ChainKind::Generic: return "Generic";
  }
  return "?";
}

std::string to_string(const ChainType& t) {
  std::ostringstream os;
  os << to_string(t.kind);
  if (t.kind == ChainKind::FiniteElliptic) {
    os << "(kappa=" << t.kappa << ")";
    if (t.kappa == 2) os << " [circular]";
  } else if (t.kind == ChainKind::InfiniteElliptic) {
    os << "(qmax=" << t.qmax << ")";
  }
  return os.str();
}

Commensurability commensurability(double upsilon, int q_max, double eps_rat) {
  Commensurability c;
  c.upsilon = upsilon;
  const double x = upsilon / kPi;
  long h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  double y = x;
  for (int it = 0; it < 64 && std::isfinite(y); ++it) {
    const double a = std::floor(y);
    const long h = static_cast<long>(a) * h1 + h2;
    const long k = static_cast<long>(a) * k1 + k2;
    if (k > q_max) break;
    if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= eps_rat) {
      c.rational = true;
      c.p = h;
      c.q = k;
      c.kappa = static_cast<int>(h % 2 != 0 ? 2 * k : k);
      return c;
    }
    const double frac = y - a;
    if (frac < 1e-15) break;
    y = 1.0 / frac;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
  }
  return c;
}

namespace {

ChainType elliptic_type(double upsilon, const ClassifierConfig& cfg) {
  const Commensurability c = commensurability(upsilon, cfg.q_max, cfg.eps_rat);
  if (c.rational) return {ChainKind::FiniteElliptic, c.kappa, 0};
  return {ChainKind::InfiniteElliptic, 0, cfg.q_max};
}

ChainType null_from_trace(Complex trace, double eps) {
  const double t = std::abs(trace);
  if (t <= eps) return {ChainKind::DoubleNull};
  if (t >= 1.0 - eps) return {ChainKind::TaupekNull};
  return {ChainKind::GenericNull};
}

}  // namespace

ChainType classify_by_eigen(const SubsystemMap& s, const ClassifierConfig& cfg) {
  const double eps = cfg.eps_class;
  const double m1 = std::abs(s.lambda1), m2 = std::abs(s.lambda2);
  if (m2 >= 1.0 - eps) return {ChainKind::Unitary};
  if (s.singular(eps)) {
    if (s.nilpotent(eps)) return {ChainKind::DoubleNull};
    if (m1 >= 1.0 - eps) return {ChainKind::TaupekNull};
    return {ChainKind::GenericNull};
  }
  if (m1 >= 1.0 - eps) return {ChainKind::Taupek};
  if (std::abs(s.discriminant()) <= eps) return {ChainKind::Generic};
  if (std::abs(m1 - m2) <= eps && s.psi && std::abs(*s.psi) > eps) {
    return elliptic_type(std::abs(*s.psi), cfg);
  }
  return {ChainKind::Generic};
}

double elliptic_upsilon(Complex trace, Complex omega) {
  const double c = std::abs(trace - omega) / (2.0 * std::sqrt(std::abs(omega)));
  return 2.0 * std::acos(std::clamp(c, 0.0, 1.0));
}

ChainType classify_by_range(const Mat3& u, Complex omega, const ClassifierConfig& cfg) {
  return classify_by_range(numerical_range(u), u.trace(), u.determinant(), omega, cfg);
}

ChainType classify_by_range(const NumericalRange& w, Complex trace, Complex det, Complex omega,
                            const ClassifierConfig& cfg) {
  const double eps = cfg.eps_class;
  const auto a = range_weights(w, omega);
  const double lo = *std::min_element(a.begin(), a.end());
  if (lo < -cfg.eps_geo) {
    std::ostringstream os;
    os << "omega = (" << omega.real() << ", " << omega.imag() << ") lies outside W(U)";
    throw OutsideRange(os.str());
  }
  if (std::abs(omega) >= 1.0 - eps) return {ChainKind::Unitary};
  if (std::abs(omega) <= eps) {
    switch (w.kind) {
      case RangeKind::Equilateral: return {ChainKind::DoubleNull};
      case RangeKind::RightAngled:
      case RangeKind::Diameter: return {ChainKind::TaupekNull};
      case RangeKind::Acute: return {ChainKind::GenericNull};
      default: return null_from_trace(trace, eps);
    }
  }
  if (!w.is_triangle() || lo <= cfg.eps_geo) return {ChainKind::Taupek};
  const Complex ta = trace - omega;
  if (std::abs(ta) <= eps) return {ChainKind::FiniteElliptic, 2, 0};
  const Complex da = std::conj(omega) * det;
  if (std::abs(ta * ta - 4.0 * da) <= eps) return {ChainKind::Generic};
  const Complex g = ta * ta / da;
  if (std::abs(g.imag()) <= eps * std::max(1.0, std::abs(g)) && g.real() >= 0.0 && g.real() < 4.0) {
    return elliptic_type(elliptic_upsilon(trace, omega), cfg);
  }
  return {ChainKind::Generic};
}

namespace {

struct DiagramBuilder {
  TransitionDiagram d;

  void state(const std::string& s) {
    if (std::find(d.states.begin(), d.states.end(), s) == d.states.end()) d.states.push_back(s);
  }
  void edge(const std::string& from, const std::string& to, std::optional<double> p, std::string expr,
            bool maybe_absent = false) {
    state(from);
    state(to);
    d.edges.push_back({from, to, p, std::move(expr), maybe_absent});
  }
};

std::string iterate_name(const std::string& base, int k) {
  if (k == 0) return base;
  return "F1^" + std::to_string(k) + "(" + base + ")";
}

void cycle(DiagramBuilder& b, const Pifs& f, const DensityMatrix& start, const std::string& base, int kappa) {
  DensityMatrix cur = start;
  for (int k = 0; k < kappa; ++k) {
    const double p1 = prob(f, Outcome::Ball, cur);
    const std::string from = iterate_name(base, k);
    b.edge(from, iterate_name(base, (k + 1) % kappa), p1, "p1(" + from + ")");
    b.edge(from, "rho_z", 1.0 - p1, "p2(" + from + ")", 1.0 - p1 <= tol::kProb);
    if (k + 1 < kappa) cur = evolve(f, Outcome::Ball, cur);
  }
}

}  // namespace

TransitionDiagram expected_diagram(const ChainType& t, const SubsystemMap& s) {
  DiagramBuilder b;
  const double w2 = std::norm(s.omega);
  const double l1 = std::norm(s.lambda1), l2 = std::norm(s.lambda2);
  const double pm = 0.5 * (1.0 + w2);
  const std::string z = "rho_z", v = "rho_v", m = "rho_m", e1 = "rho_e1";

  if (t.kind == ChainKind::Unitary) {
    b.edge(z, z, 1.0, "1");
    b.edge(m, m, 1.0, "1");
    return b.d;
  }
  if (t.is_null()) {
    b.edge(z, v, 1.0, "1");
    if (t.kind != ChainKind::TaupekNull) b.edge(v, e1, 1.0 - l1, "1-|lambda1|^2");
    if (t.kind != ChainKind::DoubleNull) b.edge(v, z, l1, "|lambda1|^2");
    b.edge(m, e1, 0.5, "1/2");
    b.edge(m, z, 0.5, "1/2");
    if (t.kind != ChainKind::DoubleNull) b.edge(e1, e1, l1, "|lambda1|^2");
    if (t.kind != ChainKind::TaupekNull) b.edge(e1, z, 1.0 - l1, "1-|lambda1|^2");
    return b.d;
  }

  b.edge(z, z, w2, "|omega|^2");
  b.edge(z, v, 1.0 - w2, "1-|omega|^2");
  if (t.kind == ChainKind::FiniteElliptic) {
    cycle(b, s.pifs, rho_v(s.pifs), v, t.kappa);
    cycle(b, s.pifs, rho_m(s.pifs), m, t.kappa);
    return b.d;
  }
  if (t.kind == ChainKind::Taupek) {
    b.edge(v, v, l2, "|lambda2|^2");
    b.edge(v, z, 1.0 - l2, "1-|lambda2|^2");
  } else {
    const double pv = prob(s.pifs, Outcome::Ball, rho_v(s.pifs));
    b.edge(v, "F1(rho_v)", pv, "p1(rho_v)");
    b.edge(v, z, 1.0 - pv, "p2(rho_v)", true);
    b.edge("F1^n(rho_v)", "F1^n+1(rho_v)", std::nullopt, "p1(F1^n(rho_v))");
    b.edge("F1^n(rho_v)", z, std::nullopt, "p2(F1^n(rho_v))", true);
  }
  b.edge(m, "F1(rho_m)", pm, "(1+|omega|^2)/2");
  b.edge(m, z, 1.0 - pm, "(1-|omega|^2)/2");
  b.edge("F1^n(rho_m)", "F1^n+1(rho_m)", std::nullopt, "p1(F1^n(rho_m))");
  b.edge("F1^n(rho_m)", z, std::nullopt, "p2(F1^n(rho_m))", true);
  if (t.kind == ChainKind::Taupek || t.kind == ChainKind::Generic) {
    b.edge(e1, e1, l1, "|lambda1|^2 (limit)");
    if (l1 < 1.0 - tol::kClass) b.edge(e1, z, 1.0 - l1, "1-|lambda1|^2 (limit)");
  }
  return b.d;
}

}  // namespace qcl
