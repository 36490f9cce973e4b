#include "qcl/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qcl/atlas.hpp"
#include "qcl/cw.hpp"
#include "qcl/simulator.hpp"

namespace qcl::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(std::string_view s, std::string_view whole) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError("malformed complex literal '" + std::string(whole) + "'");
  }
  return v;
}

double parse_unit_coefficient(std::string_view s, std::string_view whole) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  return parse_real(s, whole);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string fmt(Complex c) {
  std::ostringstream os;
  os << std::setprecision(12) << c.real() << (std::signbit(c.imag()) ? "-" : "+") << std::abs(c.imag()) << "i";
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string fmt_vec(const Vec3& v) {
  return "(" + fmt(v[0]) + ", " + fmt(v[1]) + ", " + fmt(v[2]) + ")";
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const NotUnitary& e) {
    err << "invalid unitary: " << e.what()
        << "\nhint: re-orthonormalize the matrix (e.g. polar decomposition) before passing it\n";
    return kParse;
  } catch (const InvalidState& e) {
    err << "invalid input: " << e.what() << '\n';
    return kParse;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kParse;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const nlohmann::json::exception& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  }
}

struct Resolved {
  Mat3 u;
  Pifs pifs;
};

Resolved resolve(const std::string& unitary, const std::string& omega, const std::string& z) {
  const Mat3 u = parse_unitary_spec(unitary);
  if (omega.empty() == z.empty()) throw ParseError("give exactly one of --omega and --z");
  Vec3 vec;
  if (!z.empty()) {
    vec = parse_z_spec(z);
  } else {
    const OmegaSpec o = parse_omega_spec(omega, u);
    vec = o.z ? *o.z : z_from_omega(u, *o.omega);
  }
  return {u, Pifs(u, vec)};
}

const char* kind_name(FixedPointKind k) {
  switch (k) {
    case FixedPointKind::Attractive: return "attractive";
    case FixedPointKind::Repulsive: return "repulsive";
    case FixedPointKind::Neutral: return "neutral";
  }
  return "?";
}

std::string describe(const Trajectory& t) {
  std::ostringstream os;
  os << to_string(t.termination);
  if (t.termination == Termination::Periodic) os << "(" << t.period << ")";
  os << " after " << t.states.size() - 1 << " steps";
  return os.str();
}

}  // namespace

Complex parse_complex(std::string_view raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw ParseError("empty complex literal");
  if (s.back() != 'i') return {parse_real(s, raw), 0.0};
  const std::string_view body(s.data(), s.size() - 1);
  std::size_t split_at = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  if (split_at == std::string_view::npos) return {0.0, parse_unit_coefficient(body, raw)};
  return {parse_real(body.substr(0, split_at), raw), parse_unit_coefficient(body.substr(split_at), raw)};
}

Mat3 read_unitary_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto& m = j.at("matrix");
  if (!m.is_array() || m.size() != 3) throw ParseError("\"matrix\" must hold 3 rows");
  Mat3 u;
  for (int r = 0; r < 3; ++r) {
    const auto& row = m.at(r);
    if (!row.is_array() || row.size() != 3) throw ParseError("each row must hold 3 [re, im] entries");
    for (int c = 0; c < 3; ++c) {
      const auto& e = row.at(c);
      if (!e.is_array() || e.size() != 2) throw ParseError("entries are [re, im] pairs");
      u(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return u;
}

std::string unitary_json(const Mat3& u) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 3; ++c) row.push_back({u(r, c).real(), u(r, c).imag()});
    rows.push_back(row);
  }
  return nlohmann::json{{"matrix", rows}}.dump() + "\n";
}

Mat3 parse_unitary_spec(const std::string& spec) {
  Mat3 u;
  if (spec == "cw") {
    u = cw::unitary();
  } else if (spec == "cycle3") {
    u << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  } else if (spec.rfind("diag:", 0) == 0) {
    const auto parts = split(spec.substr(5), ',');
    if (parts.size() != 3) throw ParseError("diag preset takes three phases");
    u = Mat3::Zero();
    for (int k = 0; k < 3; ++k) u(k, k) = std::polar(1.0, parse_real(trim(parts[k]), spec));
  } else {
    u = read_unitary_json(read_file(spec));
  }
  const double defect = unitarity_defect(u);
  if (!(defect <= tol::kUnit)) {
    std::ostringstream os;
    os << "max |U U^dagger - I| = " << defect << " exceeds " << tol::kUnit;
    throw NotUnitary(os.str());
  }
  return u;
}

Vec3 parse_z_spec(const std::string& spec) {
  const std::string s = trim(spec);
  if (s == "e1" || s == "e2" || s == "e3") return Vec3::Unit(s[1] - '1');
  const auto parts = split(s, ',');
  if (parts.size() != 3) throw ParseError("z must be e1, e2, e3 or three complex entries");
  Vec3 z;
  for (int k = 0; k < 3; ++k) z[k] = parse_complex(parts[k]);
  if (!(z.norm() > 0.0)) throw ParseError("z must be nonzero");
  return z.normalized();
}

OmegaSpec parse_omega_spec(const std::string& spec, const Mat3& u) {
  const std::string s = trim(spec);
  OmegaSpec o;
  if (s == "trU") {
    o.omega = u.trace();
  } else if (s == "zero") {
    o.omega = Complex(0.0);
  } else if (s.find(',') != std::string::npos || s == "e1" || s == "e2" || s == "e3") {
    o.z = parse_z_spec(s);
    o.omega = o.z->dot(u * *o.z);
  } else {
    o.omega = parse_complex(s);
  }
  return o;
}

ClassifierConfig config_from_env() {
  ClassifierConfig cfg;
  if (const char* env = std::getenv("QCL_TOLERANCE"); env && *env) {
    const double v = parse_real(trim(env), env);
    if (!(v > 0.0 && v < 0.5)) throw ParseError("QCL_TOLERANCE must lie in (0, 0.5)");
    cfg.eps_class = v;
  }
  return cfg;
}

int cmd_classify(const ClassifyArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ClassifierConfig cfg = config_from_env();
    cfg.q_max = a.q_max;
    cfg.eps_rat = a.eps_rat;
    const Resolved r = resolve(a.unitary, a.omega, a.z);
    const SubsystemMap sub = build_subsystem(r.pifs);
    const ChainType by_eigen = classify_by_eigen(sub, cfg);
    const ChainType by_range = classify_by_range(r.u, sub.omega, cfg);

    out << "chain type   : " << to_string(by_eigen) << '\n';
    out << "range route  : " << to_string(by_range) << (by_range == by_eigen ? " (agrees)" : " (DISAGREES)") << '\n';
    out << "omega        : " << fmt(sub.omega) << '\n';
    out << "z            : " << fmt_vec(r.pifs.z()) << '\n';
    out << "lambda1      : " << fmt(sub.lambda1) << "  |lambda1| = " << fmt(std::abs(sub.lambda1)) << '\n';
    out << "lambda2      : " << fmt(sub.lambda2) << "  |lambda2| = " << fmt(std::abs(sub.lambda2)) << '\n';
    out << "psi          : " << (sub.psi ? fmt(*sub.psi) : std::string("undefined")) << '\n';
    out << "mobius class : " << to_string(mobius_class(sub, cfg.eps_class)) << '\n';
    if (by_eigen.kind == ChainKind::Unitary) {
      out << "fixed points : every ball state (A is unitary)\n";
    } else {
      const BallReport ball = analyze_ball(sub);
      out << "fixed points :";
      if (ball.fixed.points.empty()) out << " none";
      out << '\n';
      for (std::size_t k = 0; k < ball.fixed.points.size(); ++k) {
        const auto& fp = ball.fixed.points[k];
        out << "  rho_e" << k + 1 << " (" << kind_name(fp.kind) << ")\n";
      }
      if (ball.fixed.segment) out << "  every mixture of rho_e1 and rho_e2 is fixed\n";
      out << "rho_m        : " << describe(ball.from_m) << '\n';
      if (ball.from_v) out << "rho_v        : " << describe(*ball.from_v) << '\n';
    }
    const TransitionDiagram d = expected_diagram(by_eigen, sub);
    out << "diagram      :\n";
    for (const auto& e : d.edges) {
      out << "  " << e.from << " -> " << e.to << "  " << (e.probability ? fmt(*e.probability) : std::string("-"))
          << "  [" << e.expression << "]" << (e.possibly_absent ? " (possibly absent)" : "") << '\n';
    }
    return kOk;
  });
}

int cmd_map(const MapArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ClassifierConfig cfg = config_from_env();
    cfg.q_max = a.q_max;
    cfg.eps_rat = a.eps_rat;
    const Mat3 u = parse_unitary_spec(a.unitary);
    const RangeAtlas at = render_atlas(u, a.resolution, cfg);
    std::ostringstream csv;
    write_atlas_csv(at, csv);
    write_file(a.out_csv, csv.str());
    if (!a.out_svg.empty()) {
      std::ostringstream svg;
      write_atlas_svg(at, svg);
      write_file(a.out_svg, svg.str());
    }
    std::map<int, std::size_t> counts;
    for (const auto& c : at.cells) ++counts[c.type.code()];
    out << "cells: " << at.cells.size() << " (grid " << at.nx << "x" << at.ny << ", cell " << fmt(at.cell) << ")\n";
    for (const auto& entry : atlas_legend()) {
      out << "  " << entry.code << ' ' << std::left << std::setw(17) << entry.name << counts[entry.code] << '\n';
    }
    return kOk;
  });
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (a.steps == 0) throw ParseError("--steps must be positive");
    const Resolved r = resolve(a.unitary, a.omega, a.z);
    const SimReport rep = simulate(r.pifs, SimConfig{a.seed, a.steps, a.match_tol});
    if (!a.out_json.empty()) write_file(a.out_json, to_json(rep));
    if (!a.out_outcomes.empty()) write_file(a.out_outcomes, rep.outcomes);
    out << "steps " << a.steps << ", seed " << a.seed << ", visited " << rep.visited.size() << " states, unmatched "
        << rep.unmatched_states << " (ambiguous " << rep.ambiguous_states << "), re-entry violations " << rep.reentry_violations << '\n';
    out << std::left << std::setw(12) << "from" << std::setw(12) << "to" << std::right << std::setw(9) << "count"
        << std::setw(14) << "empirical" << std::setw(14) << "analytic" << std::setw(9) << "|z|" << '\n';
    for (const auto& e : rep.edges) {
      const std::size_t n = departures(rep, e.from);
      std::ostringstream zs;
      zs << std::fixed << std::setprecision(2) << edge_zscore(e, n);
      out << std::left << std::setw(12) << e.from << std::setw(12) << e.to << std::right << std::setw(9) << e.count
          << std::setw(14) << std::fixed << std::setprecision(6) << e.frequency << std::setw(14) << e.analytic
          << std::setw(9) << zs.str() << '\n'
          << std::defaultfloat;
    }
    return kOk;
  });
}

int cmd_cw(std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto checks = cw::run_checks();
    const cw::Check* failed = nullptr;
    for (const auto& c : checks) {
      out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
      if (!c.passed && !failed) failed = &c;
    }
    if (failed) {
      err << "verification failed: " << failed->name << '\n';
      return kVerify;
    }
    out << "all " << checks.size() << " checks passed\n";
    return kOk;
  });
}

}  // namespace qcl::cli
