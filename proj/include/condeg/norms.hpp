#pragma once

#include <stdexcept>

#include "condeg/field.hpp"
#include "condeg/grid.hpp"

namespace condeg {

// Grid estimate of a sup norm. Always a lower bound of the true supremum;
// `resolution` records the lattice spacing used.
struct NormEstimate {
  double value = 0.0;
  double resolution = 0.0;
  bool is_lower_bound = true;
  Vec argmax{};
};

// Sup over the disk of the euclidean jet norm of order ell, estimated on a
// regular lattice plus boundary samples.
inline NormEstimate c_norm(const ScalarField& f, const Disk& D, int ell,
                           double resolution) {
  if (ell < 0 || ell > 3) throw std::invalid_argument("c_norm: ell must be in [0,3]");
  if (ell > f.max_order())
    throw std::invalid_argument("c_norm: field does not provide this order");
  if (f.dim() != D.n) throw std::invalid_argument("c_norm: dimension mismatch");
  NormEstimate est;
  est.resolution = resolution;
  auto consider = [&](const Vec& z) {
    double v = jet_norm(f.jet(z, ell), ell);
    if (v > est.value) {
      est.value = v;
      est.argmax = z;
    }
  };
  for_each_interior_point(D, resolution, consider);
  for_each_boundary_point(D, resolution, [&](const Vec& z, const Vec&) { consider(z); });
  return est;
}

inline NormEstimate c_norm(const FieldPtr& f, const Disk& D, int ell,
                           double resolution) {
  return c_norm(*f, D, ell, resolution);
}

}  // namespace condeg
