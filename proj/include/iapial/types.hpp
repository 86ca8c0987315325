#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace iapial {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// log_1^+(t) = max{log t, 1}.
inline double log1_plus(double t) { return t > 0.0 ? std::max(std::log(t), 1.0) : 1.0; }

// Iteration counts saturate instead of overflowing.
inline int saturating_int(double x) {
  constexpr double top = static_cast<double>(std::numeric_limits<int>::max());
  return x >= top ? std::numeric_limits<int>::max() : static_cast<int>(x);
}

}  // namespace iapial
