#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "condeg/jet.hpp"

namespace condeg {

inline double default_resolution(const Disk& D) {
  switch (D.n) {
    case 1: return D.radius / 512.0;
    case 2: return D.radius / 256.0;
    default: return D.radius / 64.0;
  }
}

// Regular lattice centered at the disk center, clipped to the disk.
// Deterministic enumeration order. `jitter` shifts the lattice origin,
// used to escape degenerate alignments.
template <typename Fn>
void for_each_interior_point(const Disk& D, double resolution, Fn&& fn,
                             const Vec& jitter = Vec{}) {
  int N = static_cast<int>(std::ceil(D.radius / resolution));
  double h = D.radius / N;
  double r2 = D.radius * D.radius * (1.0 + 1e-12);
  if (D.n == 1) {
    for (int i = -N; i <= N; ++i) {
      Vec z{D.center[0] + i * h + jitter[0], 0, 0};
      double d = z[0] - D.center[0];
      if (d * d <= r2) fn(z);
    }
  } else if (D.n == 2) {
    for (int i = -N; i <= N; ++i)
      for (int j = -N; j <= N; ++j) {
        Vec z{D.center[0] + i * h + jitter[0], D.center[1] + j * h + jitter[1],
              0};
        Vec d = z - D.center;
        if (dot(d, d) <= r2) fn(z);
      }
  } else {
    for (int i = -N; i <= N; ++i)
      for (int j = -N; j <= N; ++j)
        for (int k = -N; k <= N; ++k) {
          Vec z{D.center[0] + i * h + jitter[0],
                D.center[1] + j * h + jitter[1],
                D.center[2] + k * h + jitter[2]};
          Vec d = z - D.center;
          if (dot(d, d) <= r2) fn(z);
        }
  }
}

// Samples on the sphere bounding the disk, with arc spacing ~resolution.
// The callback receives the point and the outward unit normal.
template <typename Fn>
void for_each_boundary_point(const Disk& D, double resolution, Fn&& fn) {
  if (D.n == 1) {
    fn(Vec{D.center[0] - D.radius, 0, 0}, Vec{-1, 0, 0});
    fn(Vec{D.center[0] + D.radius, 0, 0}, Vec{1, 0, 0});
    return;
  }
  if (D.n == 2) {
    int M = std::max(16, static_cast<int>(std::ceil(
                             2.0 * M_PI * D.radius / resolution)));
    for (int i = 0; i < M; ++i) {
      double a = 2.0 * M_PI * i / M;
      Vec nu{std::cos(a), std::sin(a), 0};
      fn(D.center + D.radius * nu, nu);
    }
    return;
  }
  // Fibonacci sphere.
  double area = 4.0 * M_PI * D.radius * D.radius;
  int M = std::max(64, static_cast<int>(std::ceil(area / (resolution * resolution))));
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < M; ++i) {
    double y = 1.0 - 2.0 * (i + 0.5) / M;
    double r = std::sqrt(std::max(0.0, 1.0 - y * y));
    double a = golden * i;
    Vec nu{r * std::cos(a), y, r * std::sin(a)};
    fn(D.center + D.radius * nu, nu);
  }
}

}  // namespace condeg
