// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "qcl/atlas.hpp"
#include "qcl/classifier.hpp"
#include "qcl/cli.hpp"
#include "qcl/cw.hpp"
#include "qcl/errors.hpp"
#include "qcl/simulator.hpp"
#include "support/geometry.hpp"
#include "support/strata.hpp"

using namespace qcl;
using testing::Rng;

namespace {

struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

Mat3 diag_phases(double a, double b, double c) {
  Mat3 d = Mat3::Zero();
  d(0, 0) = std::polar(1.0, a);
  d(1, 1) = std::polar(1.0, b);
  d(2, 2) = std::polar(1.0, c);
  return d;
}

Mat3 cycle3() {
  Mat3 p = Mat3::Zero();
  p(1, 0) = p(2, 1) = p(0, 2) = 1.0;
  return p;
}

ChainType eigen_route(const Mat3& u, const Vec3& z) { return classify_by_eigen(build_subsystem(Pifs(u, z))); }

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double t = std::clamp(((p - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double edge_distance(const NumericalRange& w, Complex p) {
  double d = INFINITY;
  for (int k = 0; k < 3; ++k) d = std::min(d, segment_distance(p, w.vertices[k], w.vertices[(k + 1) % 3]));
  return d;
}

// 1: CW reproduction
void cw_reproduction(Verdict& r) {
  std::ostringstream out, err;
  r.require(cli::cmd_cw(out, err) == cli::kOk, "cmd_cw exit status");
  for (const auto& c : cw::run_checks()) r.require(c.passed, c.name);
  const Mat3 u = cw::unitary();
  r.require(std::abs(u.trace() - 1.0 / std::sqrt(2.0)) <= 1e-12, "tr U");
  r.require(std::abs(u.determinant() - 1.0) <= 1e-12, "det U");
  const double r2 = std::sqrt(2.0);
  r.require(std::abs(cw::omega_p() - (r2 / 2 + 2 - std::sqrt(4 + 2 * r2))) <= 1e-12, "omega_p closed form");
  r.require(std::abs(cw::omega_b() - (r2 - 2) / 4) <= 1e-12, "omega_b closed form");
  r.require(std::abs(cw::omega_p() - 0.094) <= 1e-3, "omega_p ~ 0.094");
  r.require(std::abs(cw::omega_b() + 0.146) <= 1e-3, "omega_b ~ -0.146");
  const SubsystemMap sp = build_subsystem(Pifs(u, z_from_omega(u, cw::omega_p())));
  const double lp = std::sqrt(2 + r2) / r2 - 1;
  r.require(std::abs(sp.lambda1 - lp) <= 1e-9 && std::abs(sp.lambda2 - lp) <= 1e-9, "eigenvalues at omega_p");
  const SubsystemMap st = build_subsystem(Pifs(u, z_from_omega(u, u.trace())));
  const Complex c(0, std::pow(2.0, -0.25));
  const double dc = std::min(std::abs(st.lambda1 - c) + std::abs(st.lambda2 + c),
                             std::abs(st.lambda1 + c) + std::abs(st.lambda2 - c));
  r.require(dc <= 1e-9, "eigenvalues at tr U");
  r.detail << "omega_p " << cw::omega_p() << ", omega_b " << cw::omega_b();
}

// 2: real-axis intervals
void real_axis(Verdict& r) {
  const Mat3 u = cw::unitary();
  const double wb = cw::omega_b(), wp = cw::omega_p();
  const auto expected = [&](double x) {
    if (x == wb) return ChainKind::Taupek;
    if (x == 0.0) return ChainKind::GenericNull;
    if (x == 1.0) return ChainKind::Unitary;
    if (x <= wp) return ChainKind::Generic;
    return ChainKind::FiniteElliptic;  // or InfiniteElliptic
  };
  const double ends[] = {wb, 0.0, wp, 1.0};
  int checked = 0, excused = 0;
  auto probe = [&](double x) {
    ++checked;
    const ChainType e = eigen_route(u, z_from_omega(u, x));
    const ChainType g = classify_by_range(u, x);
    const ChainKind want = expected(x);
    const bool good = e == g && (want == ChainKind::FiniteElliptic ? g.is_elliptic() : g.kind == want);
    if (good) return;
    double near = INFINITY;
    for (double a : ends) near = std::min(near, std::abs(x - a));
    if (near <= 1e-6) {
      ++excused;
      return;
    }
    std::ostringstream w;
    w << "omega " << x << " gave " << to_string(g) << " / " << to_string(e);
    r.require(false, w.str());
  };
  const int n = 2000;
  for (int k = 0; k < n; ++k) probe(wb + (1.0 - wb) * k / (n - 1));
  for (double a : ends) probe(a);
  r.detail << checked << " points, " << excused << " endpoint deviations";
}

// 3: routes agree
void route_agreement(Verdict& r) {
  Rng rng(3);
  using testing::Stratum;
  const std::pair<Stratum, int> plan[] = {{Stratum::Interior, 4000}, {Stratum::Edge, 2000}, {Stratum::Vertex, 1000},
                                          {Stratum::Zero, 1000},     {Stratum::Elliptic, 1500}, {Stratum::Defective, 500}};
  int total = 0, disagree = 0, excused = 0;
  for (const auto& [s, count] : plan) {
    for (int t = 0; t < count; ++t, ++total) {
      const testing::Sample x = testing::draw(rng, s);
      const ChainType e = eigen_route(x.u, x.z);
      const ChainType g = classify_by_range(x.u, x.omega);
      if (e == g) continue;
      ++disagree;
      // near a decision boundary iff the range route changes within 1e-7
      bool near = false;
      for (int k = 0; k < 8 && !near; ++k) {
        const Complex d = std::polar(1e-7, k * kPi / 4);
        try {
          near = !(classify_by_range(x.u, x.omega + d) == g);
        } catch (const OutsideRange&) {
          near = true;
        }
      }
      if (near) {
        ++excused;
      } else {
        r.require(false, std::string(testing::name(s)) + ": " + to_string(e) + " vs " + to_string(g));
      }
    }
  }
  r.detail << total << " pairs, " << disagree << " disagreements, " << excused << " near a boundary";
}

// 4: identities
void identities(Verdict& r) {
  Rng rng(4);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const Mat3 u = rng.haar_unitary();
    const Pifs f(u, rng.unit_vector());
    const SubsystemMap s = build_subsystem(f);
    const Complex w = s.omega;
    worst = std::max(worst, std::abs(s.a.trace() - (u.trace() - w)));
    worst = std::max(worst, std::abs(s.a.determinant() - std::conj(w) * u.determinant()));
    const Eigen::JacobiSVD<Mat2> svd(s.a);
    const auto sv = svd.singularValues();
    worst = std::max(worst, std::abs(sv[0] - 1.0));
    worst = std::max(worst, std::abs(sv[1] - std::abs(w)));
    const Vec2 e1 = eigenvector2(s.a, s.lambda1).normalized();
    const Vec2 perp(-std::conj(e1[1]), std::conj(e1[0]));
    const Complex x = e1.dot(s.a * perp);
    worst = std::max(worst, std::abs(std::norm(x) - (1 - std::norm(s.lambda1)) * (1 - std::norm(s.lambda2))));
    const DensityMatrix rho = DensityMatrix::pure(rng.unit_vector());
    worst = std::max(worst, std::abs(prob(f, Outcome::Ball, rho) + prob(f, Outcome::Point, rho) - 1.0));
    worst = std::max(worst, std::abs(prob(f, Outcome::Ball, rho_z(f)) - (1 - std::norm(w))));
  }
  r.require(worst <= 1e-8, "identity residual");
  r.detail << "6 identities x 10000, worst residual " << worst;
}

// 5: boundary theorem
void boundary(Verdict& r) {
  Rng rng(5);
  int ranges = 0, edge_pts = 0, interior_pts = 0;
  double edge_min = 1.0, interior_max = 0.0;
  while (ranges < 50) {
    const Mat3 u = rng.haar_unitary();
    const NumericalRange w = numerical_range(u);
    double sep = INFINITY;
    for (int k = 0; k < 3; ++k) sep = std::min(sep, std::abs(w.vertices[k] - w.vertices[(k + 1) % 3]));
    if (!w.is_triangle() || sep < 0.05) continue;
    ++ranges;
    for (int k = 0; k < 20; ++k, ++edge_pts) {
      const int j = k % 3;
      const double t = rng.uniform(0.001, 0.999);
      const Complex om = (1 - t) * w.vertices[j] + t * w.vertices[(j + 1) % 3];
      const SubsystemMap s = build_subsystem(Pifs(u, z_from_omega(w, om)));
      edge_min = std::min(edge_min, std::abs(s.lambda1));
    }
    for (int k = 0; k < 20;) {
      const auto b = rng.barycentric();
      const Complex om = b[0] * w.vertices[0] + b[1] * w.vertices[1] + b[2] * w.vertices[2];
      if (edge_distance(w, om) < 1e-3) continue;
      ++k;
      ++interior_pts;
      const SubsystemMap s = build_subsystem(Pifs(u, z_from_omega(w, om)));
      interior_max = std::max(interior_max, std::abs(s.lambda1));
    }
  }
  r.require(edge_min >= 1 - 1e-7, "edge |lambda1|");
  r.require(interior_max <= 1 - 1e-6, "interior |lambda1|");
  r.detail << edge_pts << " edge points min |l1| " << std::setprecision(12) << edge_min << ", " << interior_pts
           << " interior points max |l1| " << interior_max;
}

// 6: null subtypes
void null_subtypes(Verdict& r) {
  const Mat3 acute = diag_phases(0.0, 2.0, 4.3), right = diag_phases(0.0, kPi / 2, kPi);
  r.require(numerical_range(acute).kind == RangeKind::Acute, "acute fixture");
  r.require(numerical_range(cycle3()).kind == RangeKind::Equilateral, "equilateral fixture");
  r.require(numerical_range(right).kind == RangeKind::RightAngled, "right-angled fixture");
  const std::tuple<const char*, Mat3, ChainKind> cases[] = {
      {"acute", acute, ChainKind::GenericNull},
      {"equilateral", cycle3(), ChainKind::DoubleNull},
      {"right-angled", right, ChainKind::TaupekNull}};
  for (const auto& [name, u, want] : cases) {
    const ChainType g = classify_by_range(u, 0.0);
    const ChainType e = eigen_route(u, z_from_omega(u, 0.0));
    r.require(g.kind == want && e == g, std::string(name) + " gave " + to_string(g) + " / " + to_string(e));
    r.detail << name << " " << to_string(g) << "  ";
  }
}

// 7: block realization
void realization(Verdict& r) {
  Rng rng(7);
  double unit = 0.0, eig = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto draw = [&] {
      const double rad = t % 10 == 0 ? 1.0 : std::sqrt(rng.uniform());
      return std::polar(rad, rng.uniform(-kPi, kPi));
    };
    const Complex m1 = draw(), m2 = t % 7 == 0 ? m1 : draw();
    const Mat3 u = block_realization(m1, m2);
    unit = std::max(unit, unitarity_defect(u));
    const auto [l1, l2] = eig2(u.topLeftCorner<2, 2>());
    eig = std::max(eig, std::min(std::max(std::abs(l1 - m1), std::abs(l2 - m2)),
                                 std::max(std::abs(l1 - m2), std::abs(l2 - m1))));
  }
  r.require(unit <= 1e-9, "unitarity");
  r.require(eig <= 1e-8, "block eigenvalues");
  r.detail << "1000 cases, unitarity defect " << unit << ", eigenvalue error " << eig;
}

// 8: cubic curve
void cubic(Verdict& r) {
  Rng rng(8);
  double zeros = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Mat3 u = rng.haar_unitary();
    const CubicFrame f = cubic_frame(u);
    zeros = std::max(zeros, std::abs(musselman_eval(f, 0.0, 0.0)));
    zeros = std::max(zeros, std::abs(musselman_eval(f, f.alpha, f.beta)));
    for (double ph : eig_unitary3(f.rotation * u).phases)
      zeros = std::max(zeros, std::abs(musselman_eval(f, std::cos(ph), std::sin(ph))));
  }
  r.require(zeros <= 1e-8, "cubic zeros");

  // M = y^3 - 3x^2 y + ... equals minus the printed products
  double fact = 0.0;
  for (double th : {0.4, 1.1, 2.0, 2.8}) {
    const CubicFrame f = cubic_frame(diag_phases(0.0, th, -th));
    const double a = f.alpha;
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 100; ++j) {
        const double x = -1 + 2.0 * i / 99, y = -1 + 2.0 * j / 99;
        fact = std::max(fact, std::abs(musselman_eval(f, x, y) + y * (3 * x * x - y * y - 4 * a * x + a * a)));
      }
  }
  const CubicFrame e = cubic_frame(cycle3());
  const double s3 = std::sqrt(3.0);
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) {
      const double x = -1 + 2.0 * i / 99, y = -1 + 2.0 * j / 99;
      fact = std::max(fact, std::abs(musselman_eval(e, x, y) + y * (s3 * x - y) * (s3 * x + y)));
    }
  r.require(fact <= 1e-8, "factorizations");

  const Mat3 u = cw::unitary();
  const RangeAtlas at = render_atlas(u, 512);
  const CubicFrame f = cubic_frame(u);
  const double bound = testing::curve_tol(u.trace(), at.cell) * at.cell;
  const double c0 = std::sqrt(2.0) / 3;
  int elliptic = 0, outside = 0, off = 0;
  double fit = 0.0;
  for (const auto& c : at.cells) {
    if (!c.type.is_elliptic()) continue;
    ++elliptic;
    const Complex q = f.to_frame({c.cx, c.cy});
    if (std::abs(musselman_eval(f, q.real(), q.imag())) > bound) ++outside;
    if (std::abs(c.cy) > 1.5 * at.cell) {
      ++off;
      const double h = 18 * (c.cx - c0) * (c.cx - c0) - 6 * c.cy * c.cy - 1;
      fit = std::max(fit, std::abs(h) / std::hypot(36 * (c.cx - c0), 12 * c.cy));
    }
  }
  r.require(elliptic > 0 && off > 0, "elliptic cells present");
  r.require(outside == 0, "curve containment");
  r.require(fit <= 0.05, "hyperbola fit");
  r.detail << "zeros " << zeros << ", factorizations " << fact << ", " << elliptic << " elliptic cells, " << outside
           << " outside bound, hyperbola distance " << fit;
}

// 9: Monte Carlo
void monte_carlo(Verdict& r) {
  const Mat3 u = cw::unitary();
  for (int k : {0, 1}) {
    const auto t0 = std::chrono::steady_clock::now();
    const SimReport rep = simulate(Pifs(u, Vec3::Unit(k)), {2024, 100000, tol::kMatch});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double zmax = 0.0;
    for (const auto& e : rep.edges) zmax = std::max(zmax, edge_zscore(e, departures(rep, e.from)));
    const std::string z = k == 0 ? "e1" : "e2";
    r.require(zmax <= 3.0, z + " edge within 3 sigma");
    r.require(rep.unmatched_states == 0, z + " unmatched_states");
    r.require(rep.reentry_violations == 0, z + " re-entry");
    r.require(secs < 10.0, z + " runtime");
    r.detail << "z=" << z << ": " << rep.edges.size() << " edges, max z-score " << std::setprecision(3) << zmax
             << ", unmatched " << rep.unmatched_states << ", " << secs << " s  ";
  }
}

// 10: conjugacy
void conjugacy(Verdict& r) {
  Rng rng(10);
  double spread = 0.0, post = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Mat3 u = rng.haar_unitary();
    const NumericalRange w = numerical_range(u);
    const auto b = rng.barycentric();
    Vec3 z = Vec3::Zero(), zt = Vec3::Zero();
    for (int j = 0; j < 3; ++j) {
      z += std::polar(std::sqrt(b[j]), rng.uniform(0, kTwoPi)) * w.spectrum.vectors[j];
      zt += std::polar(std::sqrt(b[j]), rng.uniform(0, kTwoPi)) * w.spectrum.vectors[j];
    }
    const SubsystemMap s1 = build_subsystem(Pifs(u, z)), s2 = build_subsystem(Pifs(u, zt));
    r.require(classify_by_eigen(s1) == classify_by_eigen(s2), "chain types");
    auto sorted = [](const SubsystemMap& s) {
      std::array<Complex, 2> l{s.lambda1, s.lambda2};
      std::sort(l.begin(), l.end(), [](Complex a, Complex c) {
        return a.real() != c.real() ? a.real() < c.real() : a.imag() < c.imag();
      });
      return l;
    };
    const auto l1 = sorted(s1), l2 = sorted(s2);
    spread = std::max({spread, std::abs(l1[0] - l2[0]), std::abs(l1[1] - l2[1])});
    const Mat3 v = conjugator(u, z, zt);
    post = std::max({post, max_norm(v * u - u * v), (v * z - zt).norm()});
  }
  r.require(spread <= 1e-8, "sorted A-spectra");
  r.require(post <= 1e-8, "conjugator postconditions");
  r.detail << "1000 triples, spectrum difference " << spread << ", conjugator residual " << post;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<void(Verdict&)> run;
};

}  // namespace

int main() {
  const Criterion all[] = {
      {1, "CW reproduction", 1.0, cw_reproduction},
      {2, "CW real-axis intervals", 5.0, real_axis},
      {3, "route agreement", 30.0, route_agreement},
      {4, "algebraic identities", 30.0, identities},
      {5, "boundary eigenvalue", 10.0, boundary},
      {6, "null subtypes at zero", 1.0, null_subtypes},
      {7, "block realization", 5.0, realization},
      {8, "cubic curve", 60.0, cubic},
      {9, "Monte-Carlo consistency", 20.0, monte_carlo},
      {10, "conjugacy invariance", 10.0, conjugacy},
  };
  int failed = 0;
  for (const auto& c : all) {
    Verdict r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(r);
    } catch (const std::exception& e) {
      r.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.require(secs < c.limit_s, "runtime limit");
    failed += !r.ok;
    std::cout << (r.ok ? "PASS" : "FAIL") << " " << std::setw(2) << c.id << "  " << c.name << "  ("
              << std::fixed << std::setprecision(3) << secs << " s)  " << std::defaultfloat << r.detail.str() << "\n";
  }
  std::cout << (10 - failed) << "/10 criteria passed\n";
  return failed == 0 ? 0 : 1;
}
