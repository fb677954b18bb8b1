#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace jetfields {

// A point of T^N R^m stored as an (N+1) x m coordinate array, row r holding
// the level-r derivatives (y^1_r, ..., y^m_r).
struct JetPoint {
  int m = 0;
  int order = 0;                // N
  std::vector<double> coords;   // row-major by level: coords[r*m + (i-1)]

  JetPoint() = default;
  JetPoint(int m_, int order_) : m(m_), order(order_), coords(static_cast<size_t>(m_) * (order_ + 1), 0.0) {
    if (m_ < 1 || order_ < 0) throw std::invalid_argument("JetPoint: need m >= 1, order >= 0");
  }

  double y(int i, int r) const { return coords[idx(i, r)]; }
  double& y(int i, int r) { return coords[idx(i, r)]; }

  // Euclidean norm of the level-r row.
  double row_norm(int r) const {
    double s = 0.0;
    for (int i = 1; i <= m; ++i) s += y(i, r) * y(i, r);
    return std::sqrt(s);
  }

  // On the slit bundle the level-1 row must not vanish.
  bool slit(double guard = 0.0) const { return order >= 1 && row_norm(1) > guard; }

  JetPoint truncated(int new_order) const {
    if (new_order > order) throw std::invalid_argument("JetPoint::truncated: order too large");
    JetPoint p(m, new_order);
    for (int r = 0; r <= new_order; ++r)
      for (int i = 1; i <= m; ++i) p.y(i, r) = y(i, r);
    return p;
  }

  // Extend with an extra top row (used to lift T^N points to T^{N+1}).
  JetPoint extended(const std::vector<double>& top) const {
    if (static_cast<int>(top.size()) != m) throw std::invalid_argument("JetPoint::extended: wrong row size");
    JetPoint p(m, order + 1);
    for (int r = 0; r <= order; ++r)
      for (int i = 1; i <= m; ++i) p.y(i, r) = y(i, r);
    for (int i = 1; i <= m; ++i) p.y(i, order + 1) = top[i - 1];
    return p;
  }

 private:
  size_t idx(int i, int r) const {
    if (i < 1 || i > m || r < 0 || r > order) throw std::out_of_range("JetPoint: coordinate index");
    return static_cast<size_t>(r) * m + (i - 1);
  }
};

}  // namespace jetfields
