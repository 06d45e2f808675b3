#pragma once

#include "smpred/analysis/pointset.hpp"

namespace smpred {

// Q_p: mean absolute pairwise-distance discrepancy between H projected into
// P's space (affine compensation) and P itself, normalized by the maximal
// distance in P. Q_h mirrors it with the roles swapped. The double sum runs
// over all (i, j) including the zero diagonal.
struct DissimilarityReport {
  double q_p = 0.0;
  double q_h = 0.0;
  AffineMap map_h_to_p;
  AffineMap map_p_to_h;
  PointSet h_proj_p;  // H after projection into P's space
  PointSet p_proj_h;  // P after projection into H's space
};

DissimilarityReport dissimilarity(const PointSet& h, const PointSet& p);

}  // namespace smpred
