#pragma once

// Shared test oracles: finite-difference jets (independent of the AD path)
// and small random-sampling helpers.

#include <cmath>
#include <random>

#include "condeg/field.hpp"
#include "condeg/jet.hpp"

namespace oracles {

using condeg::ScalarField;
using condeg::Vec;

inline double fd_grad(const ScalarField& f, Vec z, int i, double h = 1e-4) {
  Vec a = z, b = z;
  a[i] += h;
  b[i] -= h;
  return (f.value(a) - f.value(b)) / (2.0 * h);
}

inline double fd_hess(const ScalarField& f, Vec z, int i, int j,
                      double h = 1e-4) {
  if (i == j) {
    Vec a = z, b = z;
    a[i] += h;
    b[i] -= h;
    return (f.value(a) - 2.0 * f.value(z) + f.value(b)) / (h * h);
  }
  Vec pp = z, pm = z, mp = z, mm = z;
  pp[i] += h; pp[j] += h;
  pm[i] += h; pm[j] -= h;
  mp[i] -= h; mp[j] += h;
  mm[i] -= h; mm[j] -= h;
  return (f.value(pp) - f.value(pm) - f.value(mp) + f.value(mm)) /
         (4.0 * h * h);
}

// Third derivatives use a larger step (the 1e-4 step of the lower orders
// drowns in roundoff at third order) plus Richardson extrapolation to kill
// the leading h^2 truncation term.
inline double fd_third(const ScalarField& f, Vec z, int i, int j, int k,
                       double h = 2e-3) {
  auto single = [&](double step) {
    Vec a = z, b = z;
    a[i] += step;
    b[i] -= step;
    return (fd_hess(f, a, j, k, step) - fd_hess(f, b, j, k, step)) /
           (2.0 * step);
  };
  return (4.0 * single(h / 2.0) - single(h)) / 3.0;
}

inline Vec random_point_in_ball(std::mt19937_64& rng, int n, double radius,
                                const Vec& center = Vec{}) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (;;) {
    Vec p{};
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      p[i] = uni(rng);
      s += p[i] * p[i];
    }
    if (s <= 1.0) {
      for (int i = 0; i < n; ++i) p[i] = center[i] + radius * p[i];
      return p;
    }
  }
}

}  // namespace oracles
