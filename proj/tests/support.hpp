// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "amm/linalg.hpp"

namespace amm::testing {

inline double max_abs_diff(const Matrix& x, const Matrix& y) {
  double worst = 0.0;
  for (std::size_t k = 0; k < x.data().size(); ++k) worst = std::max(worst, std::abs(x.data()[k] - y.data()[k]));
  return worst;
}

inline ::testing::AssertionResult near(const Matrix& x, const Matrix& y, double tol) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    return ::testing::AssertionFailure() << "shapes " << describe(x) << " vs " << describe(y);
  const double d = max_abs_diff(x, y);
  if (d <= tol) return ::testing::AssertionSuccess();
  std::ostringstream os;
  os << "max |x - y| = " << d << " > " << tol;
  return ::testing::AssertionFailure() << os.str();
}

inline bool is_hermitian(const Matrix& h, double tol) {
  return max_abs_diff(h, h.adjoint()) <= tol;
}

}  // namespace amm::testing
