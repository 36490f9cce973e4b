#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "qcl/classifier.hpp"
#include "qcl/errors.hpp"

namespace qcl::cli {

enum ExitCode : int { kOk = 0, kParse = 2, kDomain = 3, kIo = 4, kVerify = 5 };

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// a, bi, a+bi, a-bi
Complex parse_complex(std::string_view s);

// JSON file path, "cw", "cycle3" or "diag:p1,p2,p3". Throws ParseError, IoError.
Mat3 parse_unitary_spec(const std::string& spec);
Mat3 read_unitary_json(const std::string& text);
std::string unitary_json(const Mat3& u);

// e1, e2, e3 or three comma-separated complex literals (normalized).
Vec3 parse_z_spec(const std::string& spec);

// A complex literal, "trU", "zero", or a z-vector literal.
struct OmegaSpec {
  std::optional<Complex> omega;
  std::optional<Vec3> z;
};
OmegaSpec parse_omega_spec(const std::string& spec, const Mat3& u);

// eps_class, overridden by QCL_TOLERANCE when set.
ClassifierConfig config_from_env();

struct ClassifyArgs {
  std::string unitary;
  std::string omega;  // one of omega / z
  std::string z;
  int q_max = tol::kQMax;
  double eps_rat = tol::kRat;
};

struct MapArgs {
  std::string unitary;
  int resolution = 256;
  std::string out_csv;
  std::string out_svg;
  int q_max = tol::kQMax;
  double eps_rat = tol::kRat;
};

struct SimulateArgs {
  std::string unitary;
  std::string omega;
  std::string z;
  std::size_t steps = 100000;
  std::uint64_t seed = 1;
  double match_tol = tol::kMatch;
  std::string out_json;
  std::string out_outcomes;
};

int cmd_classify(const ClassifyArgs& a, std::ostream& out, std::ostream& err);
int cmd_map(const MapArgs& a, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err);
int cmd_cw(std::ostream& out, std::ostream& err);

}  // namespace qcl::cli
