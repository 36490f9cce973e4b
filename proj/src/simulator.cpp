#include "qcl/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "json.hpp"

#include "qcl/errors.hpp"

namespace qcl {

using nlohmann::json;

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

AnalyticFamily::AnalyticFamily(const Pifs& f, double merge_tol) : f_(f), merge_tol_(merge_tol) {
  cands_.push_back({"z", rho_z(f), false, true});
  m_.next = rho_m(f);
  if (prob(f, Outcome::Ball, rho_z(f)) > tol::kProb) v_.next = rho_v(f);
}

int AnalyticFamily::add(const DensityMatrix& rho, const std::string& label, bool m_label) {
  int best = -1;
  double best_d = merge_tol_;
  for (std::size_t i = 0; i < cands_.size(); ++i) {
    const double d = cands_[i].state.distance(rho);
    if (d <= best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) {
    cands_.push_back({label, rho, false, false});
    best = static_cast<int>(cands_.size() - 1);
  }
  (m_label ? cands_[best].has_m : cands_[best].other) = true;
  return best;
}

int AnalyticFamily::index(Branch& b, std::size_t depth, char root) {
  while (b.index.size() <= depth) {
    if (!b.next) return -1;
    const DensityMatrix cur = *b.next;
    b.index.push_back(add(cur, std::string(1, root) + ":" + std::to_string(b.index.size()), root == 'm'));
    if (prob(f_, Outcome::Ball, cur) > tol::kProb) {
      b.next = evolve(f_, Outcome::Ball, cur);
    } else {
      b.next.reset();
    }
  }
  return b.index[depth];
}

int AnalyticFamily::match(const DensityMatrix& rho, double tol, int* hits_out) const {
  int best = -1, hits = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cands_.size(); ++i) {
    const double d = cands_[i].state.distance(rho);
    if (d <= tol) {
      ++hits;
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
  }
  if (hits_out) *hits_out = hits;
  return hits == 1 ? best : -1;
}

Simulation::Simulation(const Pifs& f, const SimConfig& cfg)
    : f_(f), cfg_(cfg), rng_(cfg.seed), family_(f), state_(DensityMatrix::maximally_mixed()) {}

StepInfo Simulation::step() {
  const double p1 = prob(f_, Outcome::Ball, state_);
  Outcome o = rng_.uniform() < p1 ? Outcome::Ball : Outcome::Point;
  // a draw of an outcome with vanishing probability falls through to the other one
  if (o == Outcome::Ball && p1 <= tol::kProb) o = Outcome::Point;
  if (o == Outcome::Point && 1.0 - p1 <= tol::kProb) o = Outcome::Ball;
  state_ = evolve(f_, o, state_);

  if (o == Outcome::Point) {
    on_m_ = false;
    depth_ = 0;
  } else if (!started_) {
    depth_ = 0;
  } else if (on_m_) {
    ++depth_;
  } else {
    ++depth_;  // z is depth 0; v:k sits at depth k + 1
  }
  started_ = true;
  if (o == Outcome::Ball) {
    if (on_m_) {
      family_.m_index(depth_);
    } else {
      family_.v_index(depth_ - 1);
    }
  }
  int hits = 0;
  const int m = family_.match(state_, cfg_.match_tol, &hits);
  return {o, state_, m, hits > 1};
}

double edge_zscore(const EmpiricalEdge& e, std::size_t n) {
  if (n == 0) return 0.0;
  const double p = e.analytic;
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  const double diff = std::abs(e.frequency - p);
  if (sigma == 0.0) return diff <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / sigma;
}

std::size_t departures(const SimReport& r, const std::string& from) {
  std::size_t n = 0;
  for (const auto& e : r.edges) {
    if (e.from == from) n += e.count;
  }
  return n;
}

SimReport simulate(const Pifs& f, const SimConfig& cfg) {
  SimReport r;
  r.config = cfg;
  r.outcomes.reserve(cfg.steps);
  Simulation sim(f, cfg);

  std::vector<std::string> order = {"*"};
  std::map<std::string, std::size_t> rank = {{"*", 0}};
  std::map<std::string, std::size_t> visits;
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  std::map<std::string, int> cand_of;
  std::string prev = "*";
  bool seen_z = false;

  for (std::size_t t = 0; t < cfg.steps; ++t) {
    const StepInfo info = sim.step();
    r.outcomes.push_back(info.outcome == Outcome::Ball ? '1' : '2');
    std::string id = "?";
    if (info.matched >= 0) {
      const auto& c = sim.family().candidates()[static_cast<std::size_t>(info.matched)];
      id = c.id;
      cand_of[id] = info.matched;
      if (seen_z && c.has_m && !c.other) ++r.reentry_violations;
      if (info.matched == sim.family().z_index()) seen_z = true;
      ++visits[id];
    } else {
      ++r.unmatched_states;
      if (info.ambiguous) ++r.ambiguous_states;
      ++visits[id];
    }
    if (!rank.count(id)) {
      rank[id] = order.size();
      order.push_back(id);
    }
    ++counts[{prev, id}];
    prev = id;
  }

  const auto& cands = sim.family().candidates();
  for (const std::string& id : order) {
    if (id == "*") continue;
    const Mat3 rep = id == "?" ? Mat3::Zero() : cands[static_cast<std::size_t>(cand_of[id])].state.matrix();
    r.visited.push_back({id, visits[id], rep});
  }

  std::map<std::string, std::size_t> out;
  for (const auto& [k, n] : counts) out[k.first] += n;
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& kv : counts) keys.push_back(kv.first);
  std::sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) {
    return std::pair(rank[a.first], rank[a.second]) < std::pair(rank[b.first], rank[b.second]);
  });
  const DensityMatrix start = DensityMatrix::maximally_mixed();
  for (const auto& k : keys) {
    EmpiricalEdge e{k.first, k.second, counts[k], 0.0, 0.0};
    e.frequency = static_cast<double>(e.count) / static_cast<double>(out[k.first]);
    if (k.first != "?" && k.second != "?") {
      const DensityMatrix& from =
          k.first == "*" ? start : cands[static_cast<std::size_t>(cand_of[k.first])].state;
      const Outcome o = k.second == "z" ? Outcome::Point : Outcome::Ball;
      e.analytic = prob(f, o, from);
    }
    r.edges.push_back(e);
  }
  return r;
}

namespace {

json matrix_json(const Mat3& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int j = 0; j < 3; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

Mat3 matrix_from_json(const json& j) {
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      m(i, k) = Complex(j.at(i).at(k).at(0).get<double>(), j.at(i).at(k).at(1).get<double>());
    }
  }
  return m;
}

}  // namespace

std::string to_json(const SimReport& r) {
  json j;
  j["config"] = {{"seed", r.config.seed}, {"steps", r.config.steps}, {"match_tol", r.config.match_tol}};
  j["outcomes"] = r.outcomes;
  j["unmatched_states"] = r.unmatched_states;
  j["ambiguous_states"] = r.ambiguous_states;
  j["reentry_violations"] = r.reentry_violations;
  json visited = json::array();
  for (const auto& v : r.visited) visited.push_back({{"id", v.id}, {"visits", v.visits}, {"state", matrix_json(v.state)}});
  j["visited"] = visited;
  json edges = json::array();
  for (const auto& e : r.edges) {
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"count", e.count},
                     {"frequency", e.frequency},
                     {"analytic", e.analytic}});
  }
  j["edges"] = edges;
  return j.dump(2) + "\n";
}

SimReport sim_report_from_json(const std::string& text) {
  const json j = json::parse(text);
  SimReport r;
  r.config.seed = j.at("config").at("seed").get<std::uint64_t>();
  r.config.steps = j.at("config").at("steps").get<std::size_t>();
  r.config.match_tol = j.at("config").at("match_tol").get<double>();
  r.outcomes = j.at("outcomes").get<std::string>();
  r.unmatched_states = j.at("unmatched_states").get<std::size_t>();
  r.ambiguous_states = j.at("ambiguous_states").get<std::size_t>();
  r.reentry_violations = j.at("reentry_violations").get<std::size_t>();
  for (const auto& v : j.at("visited")) {
    r.visited.push_back({v.at("id").get<std::string>(), v.at("visits").get<std::size_t>(), matrix_from_json(v.at("state"))});
  }
  for (const auto& e : j.at("edges")) {
    r.edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(), e.at("count").get<std::size_t>(),
                       e.at("frequency").get<double>(), e.at("analytic").get<double>()});
  }
  return r;
}

FirstStepCheck first_step_check(const Pifs& f, std::size_t trials, std::uint64_t seed) {
  FirstStepCheck c;
  c.trials = trials;
  SplitMix64 rng(seed);
  const DensityMatrix start = DensityMatrix::maximally_mixed();
  c.expected_p1 = prob(f, Outcome::Ball, start);
  std::size_t ones = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    if (rng.uniform() < c.expected_p1) ++ones;
  }
  c.empirical_p1 = trials ? static_cast<double>(ones) / static_cast<double>(trials) : 0.0;
  const double sigma = std::sqrt(c.expected_p1 * (1.0 - c.expected_p1) / static_cast<double>(std::max<std::size_t>(trials, 1)));
  c.zscore = sigma > 0.0 ? std::abs(c.empirical_p1 - c.expected_p1) / sigma : 0.0;
  return c;
}

}  // namespace qcl
