#pragma once

#include <vector>

#include "platform_qbd/dense_matrix.hpp"

namespace pqbd {

// Block-tridiagonal layout of the boundary level plus its coupling with the
// first repeating level. `down[m-1]` maps sub-level m to m-1.
struct BoundaryBand {
  std::vector<Mat> diag;
  std::vector<Mat> up;
  std::vector<Mat> down;
  Mat to_level1;    // last sub-level -> first repeating level
  Mat from_level1;  // first repeating level -> last sub-level
};

}  // namespace pqbd
