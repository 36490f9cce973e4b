// qcl: classify, map and simulate ball & point qutrit chains.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qcl/atlas.hpp"
#include "qcl/cli.hpp"

namespace {

std::string legend_text() {
  std::ostringstream os;
  os << "Type codes and SVG colours:\n";
  for (const auto& e : qcl::atlas_legend()) os << "  " << e.code << "  " << e.name << "  " << e.color << "\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qcl::cli;

  CLI::App app{"Markov chains generated by a qutrit unitary followed by a rank-2/rank-1 measurement."};
  app.require_subcommand(1);
  app.footer(
      "Unitaries: a JSON file {\"matrix\": [[[re,im],...],...]}, or a preset: cw, cycle3, diag:p1,p2,p3.\n"
      "Omega: a+bi | trU | zero | three comma-separated complex entries of z.\n"
      "QCL_TOLERANCE overrides the classification tolerance (default 1e-9).\n"
      "Exit codes: 0 ok, 2 parse, 3 domain, 4 io, 5 verification.\n\n" +
      legend_text());

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Chain type, subsystem spectrum, fixed points and diagram");
  classify->add_option("--unitary,-u", ca.unitary, "Unitary spec")->required();
  auto* c_omega = classify->add_option("--omega", ca.omega, "Omega spec");
  auto* c_z = classify->add_option("--z", ca.z, "Measurement vector: e1, e2, e3 or three complex entries");
  c_omega->excludes(c_z);
  classify->add_option("--qmax", ca.q_max, "Largest denominator in the commensurability test")
      ->check(CLI::Range(1, 100000));
  classify->add_option("--eps-rat", ca.eps_rat, "Rational approximation tolerance")->check(CLI::PositiveNumber);

  MapArgs ma;
  auto* map = app.add_subcommand("map", "Atlas of chain types over the numerical range");
  map->add_option("--unitary,-u", ma.unitary, "Unitary spec")->required();
  map->add_option("--resolution,-r", ma.resolution, "Cells along the longer side of the bounding box")
      ->check(CLI::Range(16, 8192));
  map->add_option("--out,-o", ma.out_csv, "CSV output path")->required();
  map->add_option("--svg", ma.out_svg, "SVG output path");
  map->add_option("--qmax", ma.q_max, "Largest denominator in the commensurability test")
      ->check(CLI::Range(1, 100000));
  map->add_option("--eps-rat", ma.eps_rat, "Rational approximation tolerance")->check(CLI::PositiveNumber);

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Seeded Monte-Carlo run from I/3");
  sim->add_option("--unitary,-u", sa.unitary, "Unitary spec")->required();
  auto* s_omega = sim->add_option("--omega", sa.omega, "Omega spec");
  auto* s_z = sim->add_option("--z", sa.z, "Measurement vector");
  s_omega->excludes(s_z);
  sim->add_option("--steps,-n", sa.steps, "Number of steps");
  sim->add_option("--seed,-s", sa.seed, "splitmix64 seed");
  sim->add_option("--match-tol", sa.match_tol, "State matching tolerance")->check(CLI::PositiveNumber);
  sim->add_option("--out,-o", sa.out_json, "JSON report path");
  sim->add_option("--outcomes", sa.out_outcomes, "Raw 1/2 outcome stream path");

  auto* cw = app.add_subcommand("cw", "Reproduce and verify the Crutchfield-Wiesner example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  if (classify->parsed()) return cmd_classify(ca, std::cout, std::cerr);
  if (map->parsed()) return cmd_map(ma, std::cout, std::cerr);
  if (sim->parsed()) return cmd_simulate(sa, std::cout, std::cerr);
  if (cw->parsed()) return cmd_cw(std::cout, std::cerr);
  return kParse;
}
