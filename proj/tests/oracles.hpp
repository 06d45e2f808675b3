// Independent test oracles: brute-force implementations kept deliberately
// separate from the library code paths they check.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "smpred/analysis/pointset.hpp"
#include "smpred/env/armroom.hpp"
#include "smpred/nn/matrix.hpp"

namespace oracles {

using smpred::Matrix;
using smpred::PointSet;

// Relative error with an absolute floor to keep near-zero entries meaningful.
inline double rel_error(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Plain triple-loop matrix product.
inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

// Central finite differences over a flat parameter vector. `loss` must read
// the current `params` content on every call.
inline std::vector<double> fd_gradient(std::vector<double>& params,
                                       const std::function<double()>& loss, double h = 1e-5) {
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double orig = params[i];
    params[i] = orig + h;
    const double up = loss();
    params[i] = orig - h;
    const double down = loss();
    params[i] = orig;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

// Least squares through explicit normal equations and Gauss-Jordan inversion;
// no orthogonal decompositions involved. Full-rank designs only.
inline Matrix pinv_least_squares(const Matrix& design, const Matrix& target) {
  const std::size_t k = design.cols();
  Matrix ata(k, k), aty(k, target.cols());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < design.rows(); ++r) acc += design(r, i) * design(r, j);
      ata(i, j) = acc;
    }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < target.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < design.rows(); ++r) acc += design(r, i) * target(r, j);
      aty(i, j) = acc;
    }

  // Gauss-Jordan with partial pivoting on [ata | I].
  Matrix inv(k, k);
  for (std::size_t i = 0; i < k; ++i) inv(i, i) = 1.0;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(ata(r, col)) > std::abs(ata(pivot, col))) pivot = r;
    if (ata(pivot, col) == 0.0) throw std::runtime_error("pinv oracle: singular normal matrix");
    if (pivot != col)
      for (std::size_t c = 0; c < k; ++c) {
        std::swap(ata(pivot, c), ata(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    const double d = ata(col, col);
    for (std::size_t c = 0; c < k; ++c) {
      ata(col, c) /= d;
      inv(col, c) /= d;
    }
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = ata(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < k; ++c) {
        ata(r, c) -= f * ata(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return naive_matmul(inv, aty);
}

// Projects x through the affine fit x -> y computed with the pinv route.
inline Matrix brute_affine_project(const Matrix& x, const Matrix& y) {
  Matrix design(x.rows(), x.cols() + 1);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) design(r, c) = x(r, c);
    design(r, x.cols()) = 1.0;
  }
  const Matrix coeffs = pinv_least_squares(design, y);
  return naive_matmul(design, coeffs);
}

struct BruteDissimilarity {
  double q_p;
  double q_h;
};

// Explicit pseudo-inverse fit plus double-loop distance sums.
inline BruteDissimilarity brute_dissimilarity(const Matrix& h, const Matrix& p) {
  auto q_measure = [](const Matrix& proj, const Matrix& ref) {
    const std::size_t n = ref.rows();
    auto dist = [](const Matrix& m, std::size_t i, std::size_t j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < m.cols(); ++c) {
        const double d = m(i, c) - m(j, c);
        acc += d * d;
      }
      return std::sqrt(acc);
    };
    double max_ref = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) max_ref = std::max(max_ref, dist(ref, i, j));
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        acc += std::abs(dist(proj, i, j) - dist(ref, i, j)) / max_ref;
    return acc / (double(n) * double(n));
  };
  return {q_measure(brute_affine_project(h, p), p), q_measure(brute_affine_project(p, h), h)};
}

// Arm tip through composed complex rotations instead of summed angles.
inline smpred::Position arm_tip_complex(const smpred::MotorState& m) {
  std::complex<double> rot{1.0, 0.0}, tip{0.0, 0.0};
  for (double joint : m) {
    rot *= std::exp(std::complex<double>(0.0, joint));
    tip += rot;
  }
  return {tip.real(), tip.imag()};
}

// Closed-form nearest hit over a whole room, written from scratch: explicit
// quadratic for circles, segment parameterisation for walls and polygons.
inline double analytic_room_distance(const smpred::ArmRoom& room, smpred::Vec2 origin,
                                     smpred::Vec2 dir) {
  double best = room.sensor().max_range;
  auto consider_segment = [&](smpred::Vec2 a, smpred::Vec2 b) {
    const double ex = b.x - a.x, ey = b.y - a.y;
    const double denom = dir.x * ey - dir.y * ex;
    if (denom == 0.0) return;
    const double ax = a.x - origin.x, ay = a.y - origin.y;
    const double t = (ax * ey - ay * ex) / denom;
    const double u = (ax * dir.y - ay * dir.x) / denom;
    if (t >= 0.0 && u >= 0.0 && u <= 1.0) best = std::min(best, t);
  };
  const double w = smpred::ArmRoom::kRoomWidth;
  consider_segment({0, 0}, {w, 0});
  consider_segment({w, 0}, {w, w});
  consider_segment({w, w}, {0, w});
  consider_segment({0, w}, {0, 0});
  for (const auto& obj : room.objects()) {
    if (obj.kind == smpred::ObjectKind::kCircle) {
      const double ox = origin.x - obj.center.x, oy = origin.y - obj.center.y;
      const double b = 2.0 * (ox * dir.x + oy * dir.y);
      const double c = ox * ox + oy * oy - obj.size * obj.size;
      const double disc = b * b - 4.0 * c;
      if (disc < 0.0) continue;
      const double sq = std::sqrt(disc);
      for (double t : {(-b - sq) / 2.0, (-b + sq) / 2.0})
        if (t >= 0.0) best = std::min(best, t);
    } else {
      const auto verts = obj.vertices();
      for (std::size_t i = 0; i < verts.size(); ++i)
        consider_segment(verts[i], verts[(i + 1) % verts.size()]);
    }
  }
  return best;
}

// March-and-bisect on the free-space predicate: no intersection algebra at
// all. Assumes the hit is not a near-tangent graze relative to `step`.
inline double march_bisect_distance(const smpred::ArmRoom& room, smpred::Vec2 origin,
                                    smpred::Vec2 dir, double step = 1e-4) {
  auto free = [&](double t) {
    const smpred::Vec2 p{origin.x + t * dir.x, origin.y + t * dir.y};
    return room.tip_valid(p);
  };
  const double max_range = room.sensor().max_range;
  double lo = 0.0, hi = max_range;
  bool found = false;
  for (double t = step; t <= max_range; t += step) {
    if (!free(t)) {
      lo = t - step;
      hi = t;
      found = true;
      break;
    }
  }
  if (!found) return max_range;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (free(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracles
