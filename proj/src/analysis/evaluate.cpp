#include "smpred/analysis/evaluate.hpp"

#include <algorithm>
#include <map>

#include "smpred/common/error.hpp"
#include "smpred/common/version.hpp"

namespace smpred {

EvalGrid make_eval_grid(const Environment& env, const Normalization& norm) {
  const auto grid_points = env.regular_motor_grid();
  const std::size_t n = grid_points.size();
  const std::size_t nm = env.motor_dim();

  EvalGrid grid;
  grid.motors_normalized = Matrix(n, nm);
  Matrix positions(n, 2);
  grid.groups.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const MotorGridPoint& pt = grid_points[i];
    for (std::size_t c = 0; c < nm; ++c)
      grid.motors_normalized(i, c) = norm.apply_motor(c, pt.m[c]);
    positions(i, 0) = pt.p[0];
    positions(i, 1) = pt.p[1];
    grid.groups[i] = pt.group;
  }
  grid.positions = PointSet(std::move(positions), grid.groups);
  return grid;
}

EvalReport evaluate(const PredictiveModel& model, const EvalGrid& grid) {
  EvalReport report;
  report.m = PointSet(grid.motors_normalized, grid.groups);
  report.h = PointSet(model.encode(grid.motors_normalized), grid.groups);
  report.p = grid.positions;
  report.dis = dissimilarity(report.h, report.p);
  return report;
}

double redundancy_collapse(const PredictiveModel& model, const EvalGrid& grid) {
  const PointSet h(model.encode(grid.motors_normalized));
  const Matrix d = pairwise_distances(h);
  const std::size_t n = h.size();

  double overall = 0.0;
  for (double v : d.data()) overall = std::max(overall, v);
  if (overall == 0.0)
    throw DegenerateError("redundancy_collapse: representation cloud fully collapsed");

  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[grid.groups[i]].push_back(i);

  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& [label, members] : groups) {
    if (members.size() < 2) continue;
    double diameter = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        diameter = std::max(diameter, d(members[a], members[b]));
    sum += diameter / overall;
    ++counted;
  }
  if (counted == 0)
    throw DegenerateError("redundancy_collapse: not applicable, all groups are singletons");
  return sum / static_cast<double>(counted);
}

namespace {

nlohmann::json matrix_rows(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : m.row(r)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json affine_json(const AffineMap& map) {
  return {{"linear", matrix_rows(map.linear)}, {"offset", map.offset}};
}

}  // namespace

nlohmann::json cloud_export_json(const EvalReport& report) {
  nlohmann::json j;
  j["schema"] = "smpred.clouds";
  j["version"] = kCloudSchemaVersion;
  j["m"] = matrix_rows(report.m.points);
  j["h"] = matrix_rows(report.h.points);
  j["p"] = matrix_rows(report.p.points);
  j["h_proj_p"] = matrix_rows(report.dis.h_proj_p.points);
  j["p_proj_h"] = matrix_rows(report.dis.p_proj_h.points);
  j["groups"] = report.m.labels;
  j["map_h_to_p"] = affine_json(report.dis.map_h_to_p);
  j["map_p_to_h"] = affine_json(report.dis.map_p_to_h);
  j["q_p"] = report.dis.q_p;
  j["q_h"] = report.dis.q_h;
  return j;
}

}  // namespace smpred
