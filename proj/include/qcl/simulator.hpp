#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcl/quantum.hpp"
#include "qcl/tolerances.hpp"

namespace qcl {

// splitmix64 with 53-bit uniform doubles in [0, 1).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// The states a chain can visit from I/3: rho_z, F1^n(rho_m) and F1^n(rho_v),
// merged when closer than a structural tolerance.
class AnalyticFamily {
 public:
  struct Candidate {
    std::string id;
    DensityMatrix state;
    bool has_m = false;  // some label is an m-trajectory label
    bool other = false;  // some label is z or v
  };

  AnalyticFamily(const Pifs& f, double merge_tol = tol::kConv);

  // Index of the candidate for F1^depth(rho_m) or F1^depth(rho_v), extending as needed.
  // Returns -1 when that iterate does not exist.
  int m_index(std::size_t depth) { return index(m_, depth, 'm'); }
  int v_index(std::size_t depth) { return index(v_, depth, 'v'); }
  int z_index() const { return 0; }

  const std::vector<Candidate>& candidates() const { return cands_; }

  // Nearest candidate within tol; -1 when none or when two lie within tol.
  // `hits` receives the number of candidates within tol.
  int match(const DensityMatrix& rho, double tol, int* hits = nullptr) const;

 private:
  struct Branch {
    std::vector<int> index;
    std::optional<DensityMatrix> next;  // state for index.size(), empty past the domain
  };

  int index(Branch& b, std::size_t depth, char root);
  int add(const DensityMatrix& rho, const std::string& label, bool m_label);

  Pifs f_;
  double merge_tol_;
  std::vector<Candidate> cands_;
  Branch m_, v_;
};

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t steps = 100000;
  double match_tol = tol::kMatch;
};

struct VisitedState {
  std::string id;
  std::size_t visits = 0;
  Mat3 state;
};

struct EmpiricalEdge {
  std::string from, to;
  std::size_t count = 0;
  double frequency = 0.0;  // count / departures from `from`
  double analytic = 0.0;   // transition probability from the analytic state
};

struct SimReport {
  SimConfig config;
  std::string outcomes;  // '1' / '2' per step
  std::vector<VisitedState> visited;  // unmatched visits are pooled under id "?"
  std::vector<EmpiricalEdge> edges;
  std::size_t unmatched_states = 0;
  std::size_t ambiguous_states = 0;  // the unmatched ones lying near two candidates
  std::size_t reentry_violations = 0;
};

struct StepInfo {
  Outcome outcome;
  DensityMatrix state;
  int matched = -1;  // candidate index
  bool ambiguous = false;
};

class Simulation {
 public:
  Simulation(const Pifs& f, const SimConfig& cfg);

  StepInfo step();
  const AnalyticFamily& family() const { return family_; }
  const DensityMatrix& state() const { return state_; }

 private:
  Pifs f_;
  SimConfig cfg_;
  SplitMix64 rng_;
  AnalyticFamily family_;
  DensityMatrix state_;
  bool started_ = false;
  bool on_m_ = true;  // false once outcome 2 has occurred
  std::size_t depth_ = 0;
};

SimReport simulate(const Pifs& f, const SimConfig& cfg);

// Sample statistics for edge (from -> to): |frequency - analytic| / sigma.
double edge_zscore(const EmpiricalEdge& e, std::size_t departures);
std::size_t departures(const SimReport& r, const std::string& from);

std::string to_json(const SimReport& r);
SimReport sim_report_from_json(const std::string& text);

struct FirstStepCheck {
  std::size_t trials = 0;
  double empirical_p1 = 0.0;
  double expected_p1 = 2.0 / 3.0;
  double zscore = 0.0;
};

FirstStepCheck first_step_check(const Pifs& f, std::size_t trials, std::uint64_t seed);

}  // namespace qcl
