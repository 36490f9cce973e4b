#include "qcl/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace qcl {

namespace {

struct Segment {
  Complex a, b;
};

// Liang-Barsky; returns the clipped parameter interval on [0, 1].
bool clip(const Segment& s, double xa, double xb, double ya, double yb, double& t0, double& t1) {
  const double dx = s.b.real() - s.a.real(), dy = s.b.imag() - s.a.imag();
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {s.a.real() - xa, xb - s.a.real(), s.a.imag() - ya, yb - s.a.imag()};
  t0 = 0.0;
  t1 = 1.0;
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) return false;
  }
  return true;
}

class Sampler {
 public:
  Sampler(const Mat3& u, const ClassifierConfig& cfg)
      : w_(numerical_range(u)), trace_(u.trace()), det_(u.determinant()), frame_(cubic_frame(u)), cfg_(cfg) {
    std::vector<Complex> corners;
    for (int j = 0; j < 3; ++j) {
      if (j == 0 || w_.spectrum.phases[j] != w_.spectrum.phases[j - 1]) corners.push_back(w_.vertices[j]);
    }
    vertices_ = corners;
    for (std::size_t i = 0; i < corners.size(); ++i) {
      for (std::size_t j = i + 1; j < corners.size(); ++j) edges_.push_back({corners[i], corners[j]});
    }
  }

  const NumericalRange& range() const { return w_; }
  const std::vector<Complex>& vertices() const { return vertices_; }
  const std::vector<Segment>& edges() const { return edges_; }
  Complex trace() const { return trace_; }

  bool inside(Complex p) const { return locate(w_, p, cfg_.eps_geo) != Location::Outside; }
  Location where(Complex p) const { return locate(w_, p, cfg_.eps_geo); }
  ChainType classify(Complex p) const { return classify_by_range(w_, trace_, det_, p, cfg_); }
  double cubic(Complex p) const {
    const Complex q = frame_.to_frame(p);
    return musselman_eval(frame_, q.real(), q.imag());
  }

  Complex root(Complex a, Complex b, double fa) const {
    for (int it = 0; it < 60; ++it) {
      const Complex mid = 0.5 * (a + b);
      const double fm = cubic(mid);
      if (fm == 0.0) return mid;
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  }

 private:
  NumericalRange w_;
  Complex trace_, det_;
  CubicFrame frame_;
  ClassifierConfig cfg_;
  std::vector<Complex> vertices_;
  std::vector<Segment> edges_;
};

}  // namespace

const std::array<LegendEntry, 8>& atlas_legend() {
  static const std::array<LegendEntry, 8> legend = {{
      {0, "Unitary", "#000000"},
      {1, "GenericNull", "#e41a1c"},
      {2, "TaupekNull", "#ff7f00"},
      {3, "DoubleNull", "#984ea3"},
      {4, "Taupek", "#377eb8"},
      {5, "FiniteElliptic", "#4daf4a"},
      {6, "InfiniteElliptic", "#a6d854"},
      {7, "Generic", "#bdbdbd"},
  }};
  return legend;
}

RangeAtlas render_atlas(const Mat3& u, int resolution, const ClassifierConfig& cfg) {
  if (resolution < kAtlasMinResolution || resolution > kAtlasMaxResolution) {
    throw std::invalid_argument("resolution must lie in [16, 8192], got " + std::to_string(resolution));
  }
  const Sampler s(u, cfg);
  RangeAtlas at;
  at.resolution = resolution;
  at.vertices = s.range().vertices;

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Complex& v : s.vertices()) {
    xmin = std::min(xmin, v.real());
    xmax = std::max(xmax, v.real());
    ymin = std::min(ymin, v.imag());
    ymax = std::max(ymax, v.imag());
  }
  const double width = xmax - xmin, height = ymax - ymin;
  const double side = std::max({width, height, 1e-6});
  at.cell = side / resolution;
  at.nx = std::max(1, static_cast<int>(std::ceil(width / at.cell - 1e-9)));
  at.ny = std::max(1, static_cast<int>(std::ceil(height / at.cell - 1e-9)));
  at.x0 = xmin - 0.5 * (at.nx * at.cell - width);
  at.y0 = ymin - 0.5 * (at.ny * at.cell - height);

  auto index_of = [&](Complex p) {
    const int ix = std::clamp(static_cast<int>(std::floor((p.real() - at.x0) / at.cell)), 0, at.nx - 1);
    const int iy = std::clamp(static_cast<int>(std::floor((p.imag() - at.y0) / at.cell)), 0, at.ny - 1);
    return std::pair<int, int>{ix, iy};
  };

  // special points by priority: vertex, zero, trace
  std::vector<std::pair<std::pair<int, int>, Complex>> special;
  for (const Complex& v : s.vertices()) special.push_back({index_of(v), v});
  const std::size_t n_vertices = special.size();
  std::optional<std::pair<int, int>> zero_cell, trace_cell;
  if (s.inside(0.0)) zero_cell = index_of(0.0);
  if (s.where(s.trace()) == Location::Interior) trace_cell = index_of(s.trace());

  const int gx = at.nx + 1;
  std::vector<double> grid(static_cast<std::size_t>(gx) * (at.ny + 1));
  for (int iy = 0; iy <= at.ny; ++iy) {
    for (int ix = 0; ix <= at.nx; ++ix) {
      grid[static_cast<std::size_t>(iy) * gx + ix] = s.cubic({at.x0 + ix * at.cell, at.y0 + iy * at.cell});
    }
  }

  for (int iy = 0; iy < at.ny; ++iy) {
    const double ya = at.y0 + iy * at.cell, yb = ya + at.cell;
    for (int ix = 0; ix < at.nx; ++ix) {
      const double xa = at.x0 + ix * at.cell, xb = xa + at.cell;
      const Complex center(0.5 * (xa + xb), 0.5 * (ya + yb));
      const std::pair<int, int> here{ix, iy};
      std::optional<Complex> sample;

      for (std::size_t k = 0; k < n_vertices && !sample; ++k) {
        if (special[k].first == here) sample = special[k].second;
      }
      if (!sample && zero_cell == here) sample = Complex(0.0);
      if (!sample && trace_cell == here) sample = s.trace();
      if (!sample) {
        double best = 1e-12 * at.cell;
        for (const Segment& e : s.edges()) {
          double t0, t1;
          if (!clip(e, xa, xb, ya, yb, t0, t1)) continue;
          const double len = (t1 - t0) * std::abs(e.b - e.a);
          if (len > best) {
            best = len;
            sample = e.a + 0.5 * (t0 + t1) * (e.b - e.a);
          }
        }
      }
      if (!sample && s.inside(center)) {
        const Complex c[4] = {{xa, ya}, {xb, ya}, {xb, yb}, {xa, yb}};
        const double f[4] = {grid[static_cast<std::size_t>(iy) * gx + ix],
                             grid[static_cast<std::size_t>(iy) * gx + ix + 1],
                             grid[static_cast<std::size_t>(iy + 1) * gx + ix + 1],
                             grid[static_cast<std::size_t>(iy + 1) * gx + ix]};
        for (int k = 0; k < 4 && !sample; ++k) {
          const int l = (k + 1) % 4;
          if ((f[k] < 0.0) == (f[l] < 0.0) && f[k] != 0.0) continue;
          const Complex r = f[k] == 0.0 ? c[k] : s.root(c[k], c[l], f[k]);
          if (!s.inside(r)) continue;
          if (s.classify(r).is_elliptic()) sample = r;
        }
        if (!sample) sample = center;
      }
      if (!sample) continue;
      at.cells.push_back({ix, iy, center.real(), center.imag(), sample->real(), sample->imag(), s.classify(*sample)});
    }
  }
  return at;
}

void write_atlas_csv(const RangeAtlas& a, std::ostream& os) {
  std::vector<CsvRow> rows;
  rows.reserve(a.cells.size());
  for (const AtlasCell& c : a.cells) {
    rows.push_back({c.x, c.y, c.type.code(), c.type.kind == ChainKind::FiniteElliptic ? c.type.kappa : 0});
  }
  write_atlas_csv(rows, os);
}

void write_atlas_csv(const std::vector<CsvRow>& rows, std::ostream& os) {
  os << "x,y,type,kappa\n";
  char buf[96];
  for (const CsvRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.9f,%.9f,%d,", r.x, r.y, r.type);
    os << buf;
    if (r.type == static_cast<int>(ChainKind::FiniteElliptic)) os << r.kappa;
    os << '\n';
  }
}

std::vector<CsvRow> read_atlas_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "x,y,type,kappa") throw std::runtime_error("missing atlas CSV header");
  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    CsvRow r{};
    char kappa[32] = {0};
    int consumed = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%d,%n", &r.x, &r.y, &r.type, &consumed) != 3 || consumed == 0) {
      throw std::runtime_error("malformed atlas CSV line " + std::to_string(lineno));
    }
    const std::string rest = line.substr(static_cast<std::size_t>(consumed));
    if (!rest.empty()) {
      std::snprintf(kappa, sizeof kappa, "%s", rest.c_str());
      r.kappa = std::stoi(kappa);
    }
    rows.push_back(r);
  }
  return rows;
}

void write_atlas_svg(const RangeAtlas& a, std::ostream& os) {
  const double size = 800.0;
  const double scale = size / 2.4;
  auto px = [&](double x) { return size / 2.0 + x * scale; };
  auto py = [&](double y) { return size / 2.0 - y * scale; };
  char buf[256];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 200 << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size + 200 << ' ' << size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"none\" stroke=\"#444444\"/>\n",
                px(0), py(0), scale);
  os << buf;
  const double r = std::max(0.5, 0.5 * a.cell * scale);
  const auto& legend = atlas_legend();
  for (const AtlasCell& c : a.cells) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"%s\"/>\n", px(c.x), py(c.y), r,
                  legend[static_cast<std::size_t>(c.type.code())].color);
    os << buf;
  }
  for (int i = 0; i < 3; ++i) {
    const Complex p = a.vertices[i], q = a.vertices[(i + 1) % 3];
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#000000\" stroke-width=\"1\"/>\n",
                  px(p.real()), py(p.imag()), px(q.real()), py(q.imag()));
    os << buf;
  }
  for (std::size_t k = 0; k < legend.size(); ++k) {
    const double y = 30.0 + 24.0 * static_cast<double>(k);
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"14\" height=\"14\" fill=\"%s\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" font-family=\"sans-serif\">%d %s</text>\n",
                  size + 10.0, y, legend[k].color, size + 30.0, y + 12.0, legend[k].code, legend[k].name);
    os << buf;
  }
  os << "</svg>\n";
}

}  // namespace qcl
