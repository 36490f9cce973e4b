#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qcl/classifier.hpp"

namespace qcl {

struct AtlasCell {
  int ix = 0, iy = 0;
  double cx = 0.0, cy = 0.0;  // cell center
  double x = 0.0, y = 0.0;    // sample point, inside W(U)
  ChainType type;
};

struct RangeAtlas {
  int resolution = 0;
  double cell = 0.0;  // side length
  double x0 = 0.0, y0 = 0.0;
  int nx = 0, ny = 0;
  std::array<Complex, 3> vertices;
  std::vector<AtlasCell> cells;  // row-major over (iy, ix), empty cells omitted
};

inline constexpr int kAtlasMinResolution = 16;
inline constexpr int kAtlasMaxResolution = 8192;

// Throws std::invalid_argument for a resolution outside [16, 8192].
RangeAtlas render_atlas(const Mat3& u, int resolution, const ClassifierConfig& cfg = {});

struct LegendEntry {
  int code;
  const char* name;
  const char* color;
};

const std::array<LegendEntry, 8>& atlas_legend();

void write_atlas_csv(const RangeAtlas& a, std::ostream& os);
void write_atlas_svg(const RangeAtlas& a, std::ostream& os);

struct CsvRow {
  double x, y;
  int type;
  int kappa;  // 0 when the column is empty
};

// Throws std::runtime_error on malformed input.
std::vector<CsvRow> read_atlas_csv(std::istream& is);
void write_atlas_csv(const std::vector<CsvRow>& rows, std::ostream& os);

}  // namespace qcl
