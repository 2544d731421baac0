#pragma once

#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "qmac/common.hpp"

namespace qmac::testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-15);
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qmac::testing
