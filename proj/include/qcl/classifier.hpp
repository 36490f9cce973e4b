#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcl/numrange.hpp"
#include "qcl/subsystem.hpp"
#include "qcl/tolerances.hpp"

namespace qcl {

enum class ChainKind {
  Unitary = 0,
  GenericNull = 1,
  TaupekNull = 2,
  DoubleNull = 3,
  Taupek = 4,
  FiniteElliptic = 5,
  InfiniteElliptic = 6,
  Generic = 7,
};

struct ChainType {
  ChainKind kind = ChainKind::Generic;
  int kappa = 0;  // FiniteElliptic: period of the ball trajectories
  int qmax = 0;   // InfiniteElliptic: no rational Upsilon/pi with denominator <= qmax

  int code() const { return static_cast<int>(kind); }
  bool is_elliptic() const { return kind == ChainKind::FiniteElliptic || kind == ChainKind::InfiniteElliptic; }
  bool is_null() const {
    return kind == ChainKind::GenericNull || kind == ChainKind::TaupekNull || kind == ChainKind::DoubleNull;
  }
  friend bool operator==(const ChainType&, const ChainType&) = default;
};

std::string to_string(ChainKind k);
std::string to_string(const ChainType& t);

struct ClassifierConfig {
  double eps_class = tol::kClass;
  double eps_geo = tol::kGeo;
  int q_max = tol::kQMax;
  double eps_rat = tol::kRat;
};

struct Commensurability {
  double upsilon = 0.0;
  bool rational = false;
  long p = 0, q = 0;
  int kappa = 0;  // 2q for odd p, q for even p
};

// Continued-fraction test of upsilon / pi with denominators up to q_max.
Commensurability commensurability(double upsilon, int q_max = tol::kQMax, double eps_rat = tol::kRat);

ChainType classify_by_eigen(const SubsystemMap& s, const ClassifierConfig& cfg = {});

// Throws OutsideRange.
ChainType classify_by_range(const Mat3& u, Complex omega, const ClassifierConfig& cfg = {});
ChainType classify_by_range(const NumericalRange& w, Complex trace, Complex det, Complex omega,
                            const ClassifierConfig& cfg = {});

// Rotation angle of an elliptic parameter from tr U, det U and omega.
double elliptic_upsilon(Complex trace, Complex omega);

struct DiagramEdge {
  std::string from, to;
  std::optional<double> probability;  // empty when only symbolic
  std::string expression;
  bool possibly_absent = false;
};

struct TransitionDiagram {
  std::vector<std::string> states;
  std::vector<DiagramEdge> edges;
};

TransitionDiagram expected_diagram(const ChainType& t, const SubsystemMap& s);

}  // namespace qcl
