#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "condeg/condition.hpp"
#include "condeg/reach.hpp"
#include "condeg/topology.hpp"

namespace condeg {

struct Packing {
  int m = 1;
  std::vector<Vec> centers;
  int count = 0;
  double h_est = 0.0;  // generator's packing-density constant
};

// Lattice of centers whose radius-1/m disks are disjoint and inside D:
// interval lattice for n = 1, hexagonal for n = 2.
inline Packing pack_disks(const Disk& D, int m) {
  if (m < 1) throw std::invalid_argument("pack_disks: m must be >= 1");
  if (D.n > 2) throw std::invalid_argument("pack_disks: n <= 2 only");
  Packing P;
  P.m = m;
  const double spacing = 2.0 / m;
  const double margin = D.radius - 1.0 / m;
  if (D.n == 1) {
    P.h_est = 0.5;
    int K = m + 1;
    for (int i = -K; i <= K; ++i) {
      double x = (i + 0.5) * spacing;
      if (std::abs(x) <= margin + 1e-12)
        P.centers.push_back(Vec{D.center[0] + x, 0, 0});
    }
  } else {
    P.h_est = 0.45;
    const double row_h = std::sqrt(3.0) / m;
    int K = static_cast<int>(std::ceil(D.radius * m)) + 2;
    // A lattice anchored at the center wastes the clipping margin for small
    // m; translate it over one fundamental cell and keep the densest fit.
    std::vector<Vec> best;
    for (int sx = 0; sx < 4; ++sx)
      for (int sy = 0; sy < 4; ++sy) {
        double ox = sx * spacing / 4.0, oy = sy * row_h / 4.0;
        std::vector<Vec> cur;
        for (int j = -K; j <= K; ++j) {
          double y = j * row_h + oy;
          double off = (j % 2 == 0) ? 0.0 : 1.0 / m;
          for (int i = -K; i <= K; ++i) {
            double x = i * spacing + off + ox;
            if (x * x + y * y <= margin * margin + 1e-12)
              cur.push_back(Vec{D.center[0] + x, D.center[1] + y, 0});
          }
        }
        if (cur.size() > best.size()) best = std::move(cur);
      }
    P.centers = std::move(best);
  }
  P.count = static_cast<int>(P.centers.size());
  if (m == 1 && P.count == 0 && D.radius >= 1.0) {
    P.centers.push_back(D.center);
    P.count = 1;
  }
  return P;
}

// f_m = 1 - count + sum_i f_base(m(x - z_i)). Copies have disjoint support,
// so at most one term differs from 1 at any point; a hash grid over the
// centers finds it in O(1).
class ReplicatedField final : public ScalarField {
 public:
  ReplicatedField(FieldPtr base, Packing P)
      : base_(std::move(base)), P_(std::move(P)) {
    cell_ = 2.0 / P_.m;
    for (int i = 0; i < P_.count; ++i)
      buckets_[key(P_.centers[i])].push_back(i);
  }
  int dim() const override { return base_->dim(); }
  int max_order() const override { return base_->max_order(); }
  Jet jet(const Vec& z, int order) const override {
    int idx = locate(z);
    if (idx < 0) return Jet::constant(1.0, dim(), order);
    const double m = P_.m;
    Jet j = base_->jet(m * (z - P_.centers[idx]), order);
    const int n = j.n;
    for (int i = 0; i < n; ++i) {
      j.grad[i] *= m;
      for (int a = 0; a < n; ++a) {
        j.hess[i][a] *= m * m;
        for (int b = 0; b < n; ++b) j.third[i][a][b] *= m * m * m;
      }
    }
    return j;
  }
  const Packing& packing() const { return P_; }

 private:
  long key_of(long ix, long iy) const { return ix * 1000003L + iy; }
  long key(const Vec& p) const {
    return key_of(static_cast<long>(std::floor(p[0] / cell_)),
                  static_cast<long>(std::floor(p[1] / cell_)));
  }
  int locate(const Vec& z) const {
    long ix = static_cast<long>(std::floor(z[0] / cell_));
    long iy = static_cast<long>(std::floor(z[1] / cell_));
    const double r = 1.0 / P_.m;
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = buckets_.find(key_of(ix + dx, iy + dy));
        if (it == buckets_.end()) continue;
        for (int c : it->second) {
          Vec d = z - P_.centers[c];
          if (dot(d, d) < r * r) return c;
        }
      }
    return -1;
  }

  FieldPtr base_;
  Packing P_;
  double cell_;
  std::unordered_map<long, std::vector<int>> buckets_;
};

inline FieldPtr replicate(const FieldPtr& f_base, const Packing& P) {
  // The construction needs f_base == 1 outside the unit disk.
  const int n = f_base->dim();
  for (int i = 0; i < 64; ++i) {
    double a = 2.0 * M_PI * i / 64.0;
    for (double rad : {1.0, 1.25}) {
      Vec x{rad * std::cos(a), n >= 2 ? rad * std::sin(a) : 0.0, 0};
      if (n == 1) x = Vec{(i % 2 ? -1.0 : 1.0) * rad, 0, 0};
      if (std::abs(f_base->value(x) - 1.0) > 1e-9)
        throw std::invalid_argument(
            "replicate: base field must equal 1 outside the unit disk");
    }
  }
  return std::make_shared<ReplicatedField>(f_base, P);
}

// Circle defining function rescaled to plateau at exactly 1 near the
// unit-disk boundary; zero set is the circle of radius 1/2.
inline FieldPtr unit_circle_base() {
  auto f = defining_function(
      std::make_shared<CircleSurface>(Vec{0, 0, 0}, 0.5));
  double plateau = BumpProfile::kPlateau * 0.5;
  return std::make_shared<ScaledField>(1.0 / plateau, f);
}

struct GrowthRow {
  int m = 0;
  int count = 0;
  double kappa1 = 0.0;
  int betti = 0;
};

struct GrowthScan {
  std::vector<GrowthRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
};

inline GrowthScan growth_scan(const FieldPtr& f_base, const Disk& D,
                              const std::vector<int>& m_list) {
  GrowthScan out;
  for (int m : m_list) {
    Packing P = pack_disks(D, m);
    FieldPtr fm = replicate(f_base, P);
    // Features live at scale 1/m; the grid must resolve them.
    double res = std::min(default_resolution(D), 1.0 / (32.0 * m));
    ConditionReport rep = delta_hypersurface(*fm, D, res);
    if (!(rep.delta > 0.0))
      throw std::runtime_error("growth_scan: delta = 0 at m = " +
                               std::to_string(m));
    GrowthRow row;
    row.m = m;
    row.count = P.count;
    row.kappa1 = c_norm(*fm, D, 1, res).value / rep.delta;
    row.betti = zero_set_signature(*fm, D, res).total_betti;
    out.rows.push_back(row);
  }
  // Least squares of log(betti) against log(kappa1).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (const auto& r : out.rows) {
    if (r.betti <= 0) continue;
    double x = std::log(r.kappa1), y = std::log(double(r.betti));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  if (k >= 2) {
    out.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    out.intercept = (sy - out.slope * sx) / k;
  }
  return out;
}

}  // namespace condeg
