#pragma once

#include <string>
#include <vector>

#include "qcl/linalg.hpp"

namespace qcl::cw {

// The Crutchfield-Wiesner qutrit unitary.
Mat3 unitary();

double gamma();          // cos(gamma) = (sqrt2 - 2) / 4
double omega_b();        // cos(gamma)
double omega_p();        // sqrt2/2 + 2 - sqrt(4 + 2 sqrt2)
double parabolic_eigenvalue();
Complex circular_eigenvalue();  // i 2^(-1/4)

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

// The full reproduction, including the atlas hyperbola fit at the given resolution.
std::vector<Check> run_checks(int atlas_resolution = 256);

}  // namespace qcl::cw
