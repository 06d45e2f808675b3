#include "smpred/analysis/dissimilarity.hpp"

#include <cmath>

#include "smpred/common/error.hpp"

namespace smpred {

namespace {

double normalized_discrepancy(const Matrix& d_proj, const Matrix& d_ref, const char* ref_name) {
  const std::size_t n = d_ref.rows();
  double max_ref = 0.0;
  for (double v : d_ref.data()) max_ref = std::max(max_ref, v);
  if (max_ref == 0.0)
    throw DegenerateError(std::string("dissimilarity: all points of ") + ref_name +
                          " coincide, max distance is zero");
  double acc = 0.0;
  for (std::size_t i = 0; i < d_ref.size(); ++i)
    acc += std::abs(d_proj.data()[i] - d_ref.data()[i]);
  return acc / (max_ref * static_cast<double>(n) * static_cast<double>(n));
}

}  // namespace

DissimilarityReport dissimilarity(const PointSet& h, const PointSet& p) {
  if (h.size() != p.size()) throw ShapeError("dissimilarity: point counts differ");

  DissimilarityReport report;
  report.map_h_to_p = affine_fit(h, p);
  report.map_p_to_h = affine_fit(p, h);
  report.h_proj_p = report.map_h_to_p.apply(h);
  report.p_proj_h = report.map_p_to_h.apply(p);

  const Matrix d_p = pairwise_distances(p);
  const Matrix d_h = pairwise_distances(h);
  const Matrix d_h_proj = pairwise_distances(report.h_proj_p);
  const Matrix d_p_proj = pairwise_distances(report.p_proj_h);

  report.q_p = normalized_discrepancy(d_h_proj, d_p, "P");
  report.q_h = normalized_discrepancy(d_p_proj, d_h, "H");
  return report;
}

}  // namespace smpred
