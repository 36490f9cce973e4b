#pragma once

#include <cstddef>

namespace qcl::tol {

inline constexpr double kUnit = 1e-9;     // max-norm of U U^dagger - I
inline constexpr double kEig = 1e-8;
inline constexpr double kNum = 1e-9;
inline constexpr double kCluster = 1e-8;  // radians
inline constexpr double kProb = 1e-12;
inline constexpr double kClass = 1e-9;
inline constexpr double kGeo = 1e-9;      // barycentric
inline constexpr double kConv = 1e-8;
inline constexpr double kFix = 1e-8;
inline constexpr double kRat = 1e-9;
inline constexpr int kQMax = 64;
inline constexpr std::size_t kTrajectoryMax = 10000;
inline constexpr double kMatch = 1e-6;

}  // namespace qcl::tol
