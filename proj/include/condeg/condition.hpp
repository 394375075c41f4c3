#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "condeg/field.hpp"
#include "condeg/grid.hpp"
#include "condeg/norms.hpp"

namespace condeg {

// The two supported singularity types: zero sets (r = 0) and critical
// points of a function (r = 1).
enum class SingularityKind { kHypersurface, kCriticalPoints };

inline int jet_order_of(SingularityKind kind) {
  return kind == SingularityKind::kHypersurface ? 0 : 1;
}

struct ConditionReport {
  double delta = 0.0;
  double interior_term = 0.0;
  double boundary_term = 0.0;
  Vec argmin{};
  NormEstimate norm;
  double kappa = std::numeric_limits<double>::infinity();
  SingularityKind kind = SingularityKind::kHypersurface;
  int ell = 1;
  double resolution = 0.0;
  // CriticalPoints only: a near-critical grid point was found within a
  // two-cell collar of the boundary, where the discriminant formula is
  // not available.
  bool boundary_unverified = false;
};

namespace detail {

// Smallest absolute eigenvalue of a symmetric n x n matrix (n <= 3),
// by cyclic Jacobi rotations.
inline double smallest_abs_eigenvalue(
    const std::array<std::array<double, kMaxDim>, kMaxDim>& H, int n) {
  if (n == 1) return std::abs(H[0][0]);
  double a[3][3];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = H[i][j];
  for (int sweep = 0; sweep < 32; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  double best = std::abs(a[0][0]);
  for (int i = 1; i < n; ++i) best = std::min(best, std::abs(a[i][i]));
  return best;
}

// Fixed-budget descent on a pointwise objective, starting from the best
// grid point. Steps are normalized to 0.25*resolution and halved on
// non-improvement; `project` keeps iterates in the admissible set.
template <typename Objective, typename Project>
void refine_minimum(const Objective& phi, const Project& project, Vec& best_z,
                    double& best_v, int n, double resolution) {
  Vec z = best_z;
  double v = best_v;
  double step = 0.25 * resolution;
  double h = std::max(1e-9, 1e-4 * resolution);
  for (int iter = 0; iter < 20; ++iter) {
    Vec g{};
    for (int i = 0; i < n; ++i) {
      Vec zp = z, zm = z;
      zp[i] += h;
      zm[i] -= h;
      g[i] = (phi(project(zp)) - phi(project(zm))) / (2.0 * h);
    }
    double gn = norm(g);
    if (gn < 1e-300) break;
    Vec cand = project(z - (step / gn) * g);
    double cv = phi(cand);
    if (cv < v) {
      z = cand;
      v = cv;
    } else {
      step *= 0.5;
    }
  }
  if (v < best_v) {
    best_v = v;
    best_z = z;
  }
}

inline Vec project_to_disk(const Disk& D, const Vec& z) {
  Vec d = z - D.center;
  double r = norm(d);
  if (r <= D.radius || r == 0.0) return z;
  return D.center + (D.radius / r) * d;
}

inline Vec project_to_boundary(const Disk& D, const Vec& z) {
  Vec d = z - D.center;
  double r = norm(d);
  if (r == 0.0) return D.center + Vec{D.radius, 0, 0};
  return D.center + (D.radius / r) * d;
}

inline Vec tangential_gradient(const Jet& j, const Vec& nu) {
  Vec g = j.gradient();
  double gn = dot(g, nu);
  return g - gn * nu;
}

}  // namespace detail

// Pointwise distance of the 1-jet from the hypersurface discriminant:
// sqrt(f^2 + |grad f|^2) in the interior, with the gradient replaced by its
// tangential part on the boundary sphere.
inline ConditionReport delta_hypersurface(const ScalarField& f, const Disk& D,
                                          double resolution) {
  if (f.dim() != D.n)
    throw std::invalid_argument("delta_hypersurface: dimension mismatch");
  ConditionReport rep;
  rep.kind = SingularityKind::kHypersurface;
  rep.resolution = resolution;

  auto interior_phi = [&](const Vec& z) {
    Jet j = f.jet(z, 1);
    Vec g = j.gradient();
    return std::sqrt(j.value * j.value + dot(g, g));
  };
  double int_v = std::numeric_limits<double>::infinity();
  Vec int_z{};
  for_each_interior_point(D, resolution, [&](const Vec& z) {
    double v = interior_phi(z);
    if (v < int_v) {
      int_v = v;
      int_z = z;
    }
  });
  detail::refine_minimum(
      interior_phi, [&](const Vec& z) { return detail::project_to_disk(D, z); },
      int_z, int_v, D.n, resolution);

  double bd_v = std::numeric_limits<double>::infinity();
  Vec bd_z{};
  auto boundary_phi = [&](const Vec& z) {
    Jet j = f.jet(z, 1);
    if (D.n == 1) return std::abs(j.value);
    Vec d = z - D.center;
    Vec nu = (1.0 / norm(d)) * d;
    Vec tg = detail::tangential_gradient(j, nu);
    return std::sqrt(j.value * j.value + dot(tg, tg));
  };
  for_each_boundary_point(D, resolution, [&](const Vec& z, const Vec&) {
    double v = boundary_phi(z);
    if (v < bd_v) {
      bd_v = v;
      bd_z = z;
    }
  });
  if (D.n > 1) {
    detail::refine_minimum(
        boundary_phi,
        [&](const Vec& z) { return detail::project_to_boundary(D, z); }, bd_z,
        bd_v, D.n, resolution);
  }

  rep.interior_term = int_v;
  rep.boundary_term = bd_v;
  if (int_v <= bd_v) {
    rep.delta = int_v;
    rep.argmin = int_z;
  } else {
    rep.delta = bd_v;
    rep.argmin = bd_z;
  }
  return rep;
}

// Pointwise distance of the 2-jet from the critical-point discriminant:
// sqrt(|grad f|^2 + sigma_1(He f)^2), interior points only. Near-boundary
// small-gradient points set boundary_unverified.
inline ConditionReport delta_critical(const ScalarField& f, const Disk& D,
                                      double resolution) {
  if (f.dim() != D.n)
    throw std::invalid_argument("delta_critical: dimension mismatch");
  ConditionReport rep;
  rep.kind = SingularityKind::kCriticalPoints;
  rep.resolution = resolution;

  auto phi = [&](const Vec& z) {
    Jet j = f.jet(z, 2);
    Vec g = j.gradient();
    double s1 = detail::smallest_abs_eigenvalue(j.hess, D.n);
    return std::sqrt(dot(g, g) + s1 * s1);
  };
  double best = std::numeric_limits<double>::infinity();
  Vec best_z{};
  std::vector<std::pair<Vec, double>> near_boundary_grads;
  for_each_interior_point(D, resolution, [&](const Vec& z) {
    double v = phi(z);
    if (v < best) {
      best = v;
      best_z = z;
    }
    if (D.boundary_distance(z) <= 2.0 * resolution) {
      Jet j = f.jet(z, 1);
      near_boundary_grads.emplace_back(z, norm(j.gradient()));
    }
  });
  detail::refine_minimum(
      phi, [&](const Vec& z) { return detail::project_to_disk(D, z); }, best_z,
      best, D.n, resolution);

  for (const auto& [z, gn] : near_boundary_grads) {
    if (gn < best) rep.boundary_unverified = true;
  }
  rep.interior_term = best;
  rep.boundary_term = std::numeric_limits<double>::infinity();
  rep.delta = best;
  rep.argmin = best_z;
  return rep;
}

// C^ell condition number: ratio of the C^ell norm to the pointwise
// discriminant distance. delta = 0 gives +inf, not an error.
inline ConditionReport kappa(const ScalarField& f, const Disk& D, int ell,
                             SingularityKind kind, double resolution) {
  int r = jet_order_of(kind);
  if (ell < r + 1)
    throw std::invalid_argument("kappa: ell must be at least r+1 for this kind");
  ConditionReport rep = kind == SingularityKind::kHypersurface
                            ? delta_hypersurface(f, D, resolution)
                            : delta_critical(f, D, resolution);
  rep.ell = ell;
  rep.norm = c_norm(f, D, ell, resolution);
  rep.kappa = rep.delta > 0.0
                  ? rep.norm.value / rep.delta
                  : std::numeric_limits<double>::infinity();
  return rep;
}

// Distance from zero to the critical values of f on D: minimum of |f| over
// detected stationary points (tangential stationarity on the boundary),
// +inf when none is found.
inline double gamma_critical_values(const ScalarField& f, const Disk& D,
                                    double resolution) {
  if (f.dim() != D.n)
    throw std::invalid_argument("gamma_critical_values: dimension mismatch");
  double gamma = std::numeric_limits<double>::infinity();

  // Scale for stationarity thresholds.
  double grad_max = 0.0, hess_max = 0.0;
  std::vector<Vec> interior_candidates;
  for_each_interior_point(D, resolution, [&](const Vec& z) {
    Jet j = f.jet(z, 2);
    double gn = norm(j.gradient());
    grad_max = std::max(grad_max, gn);
    double hf = 0.0;
    for (int a = 0; a < D.n; ++a)
      for (int b = 0; b < D.n; ++b) hf += j.hess[a][b] * j.hess[a][b];
    hess_max = std::max(hess_max, std::sqrt(hf));
  });
  double coarse = 2.0 * resolution * std::sqrt(double(D.n)) * (hess_max + 1e-12) +
                  1e-12 * (1.0 + grad_max);
  double accept_tol = 1e-6 * (1.0 + grad_max);

  for_each_interior_point(D, resolution, [&](const Vec& z) {
    Jet j = f.jet(z, 1);
    if (norm(j.gradient()) <= coarse) interior_candidates.push_back(z);
  });

  for (Vec z : interior_candidates) {
    // Newton polish on grad f = 0; falls back to the raw candidate.
    Vec w = z;
    bool ok = false;
    for (int iter = 0; iter < 30; ++iter) {
      Jet j = f.jet(w, 2);
      Vec g = j.gradient();
      if (norm(g) <= accept_tol * 1e-3) {
        ok = true;
        break;
      }
      // Solve He * d = -g (n <= 3) by Gaussian elimination with pivoting.
      double A[3][4] = {};
      int n = D.n;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) A[a][b] = j.hess[a][b];
        A[a][n] = -g[a];
      }
      bool singular = false;
      for (int c = 0; c < n; ++c) {
        int p = c;
        for (int rr = c + 1; rr < n; ++rr)
          if (std::abs(A[rr][c]) > std::abs(A[p][c])) p = rr;
        if (std::abs(A[p][c]) < 1e-14) {
          singular = true;
          break;
        }
        std::swap(A[p], A[c]);
        for (int rr = 0; rr < n; ++rr) {
          if (rr == c) continue;
          double m = A[rr][c] / A[c][c];
          for (int cc = c; cc <= n; ++cc) A[rr][cc] -= m * A[c][cc];
        }
      }
      if (singular) break;
      Vec d{};
      for (int a = 0; a < n; ++a) d[a] = A[a][n] / A[a][a];
      double dn = norm(d);
      if (dn > resolution) d = (resolution / dn) * d;
      w = detail::project_to_disk(D, w + d);
    }
    Jet j = f.jet(w, 1);
    if (ok || norm(j.gradient()) <= accept_tol) {
      gamma = std::min(gamma, std::abs(j.value));
    }
  }

  // Boundary critical points.
  if (D.n == 1) {
    gamma = std::min(gamma, std::abs(f.value(Vec{D.center[0] - D.radius, 0, 0})));
    gamma = std::min(gamma, std::abs(f.value(Vec{D.center[0] + D.radius, 0, 0})));
  } else {
    double tgrad_max = 0.0;
    std::vector<Vec> bd_candidates;
    for_each_boundary_point(D, resolution, [&](const Vec& z, const Vec& nu) {
      Jet j = f.jet(z, 1);
      double tn = norm(detail::tangential_gradient(j, nu));
      tgrad_max = std::max(tgrad_max, tn);
      if (tn <= coarse) bd_candidates.push_back(z);
    });
    double bd_tol = 1e-6 * (1.0 + tgrad_max);
    for (Vec z : bd_candidates) {
      auto phi = [&](const Vec& w) {
        Vec d = w - D.center;
        Vec nu = (1.0 / norm(d)) * d;
        Jet j = f.jet(w, 1);
        Vec tg = detail::tangential_gradient(j, nu);
        return dot(tg, tg);
      };
      double v = phi(z);
      detail::refine_minimum(
          phi, [&](const Vec& w) { return detail::project_to_boundary(D, w); },
          z, v, D.n, resolution);
      if (std::sqrt(v) <= bd_tol) gamma = std::min(gamma, std::abs(f.value(z)));
    }
  }
  return gamma;
}

}  // namespace condeg
