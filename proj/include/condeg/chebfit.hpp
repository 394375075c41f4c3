#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "condeg/field.hpp"
#include "condeg/polynomial.hpp"

namespace condeg {

struct FitError : std::runtime_error {
  FitError(const std::string& msg, int deg)
      : std::runtime_error(msg), degree(deg) {}
  int degree;
};

namespace detail {

// Chebyshev T_k on [-1,1] as monomial polynomials, k = 0..d.
inline std::vector<Polynomial> chebyshev_basis_1d(int d) {
  std::vector<Polynomial> T;
  T.reserve(d + 1);
  Polynomial t0(1, 0);
  t0.set_coeff(0, 0, 0, 1.0);
  T.push_back(t0);
  if (d >= 1) {
    Polynomial t1(1, 1);
    t1.set_coeff(1, 0, 0, 1.0);
    T.push_back(t1);
  }
  Polynomial two_x(1, 1);
  two_x.set_coeff(1, 0, 0, 2.0);
  for (int k = 2; k <= d; ++k) T.push_back(two_x * T[k - 1] - T[k - 2]);
  return T;
}

inline double chebyshev_eval(int k, double u) {
  // Stable via the trig form; |u| can slightly exceed 1 from rounding.
  if (u >= 1.0) return 1.0;
  if (u <= -1.0) return (k % 2 == 0) ? 1.0 : -1.0;
  return std::cos(k * std::acos(u));
}

}  // namespace detail

// Least-squares fit of f by a polynomial of total degree <= d over the
// bounding box of the disk, in tensor Chebyshev coordinates; the result is
// expressed in the original x coordinates. Throws FitError when the normal
// system is numerically rank deficient.
inline Polynomial fit_polynomial(const ScalarField& f, const Disk& D, int d) {
  if (f.dim() != D.n)
    throw std::invalid_argument("fit_polynomial: dimension mismatch");
  if (d < 0) throw std::invalid_argument("fit_polynomial: negative degree");
  const int n = D.n;

  // Basis: tensor Chebyshev products with total degree <= d.
  Polynomial index_template(n, d);
  const auto& exps = index_template.exponents();
  const int basis_size = static_cast<int>(exps.size());

  // Per-axis Chebyshev nodes; ~4x oversampling of the basis dimension.
  int m = std::max(d + 2, static_cast<int>(std::ceil(
                              std::pow(4.0 * basis_size, 1.0 / n))));
  std::vector<double> nodes(m);
  for (int i = 0; i < m; ++i)
    nodes[i] = std::cos(M_PI * (i + 0.5) / m);

  const int total = static_cast<int>(std::pow(m, n));
  Eigen::MatrixXd A(total, basis_size);
  Eigen::VectorXd b(total);
  std::array<int, 3> idx{};
  for (int row = 0; row < total; ++row) {
    int rem = row;
    Vec u{}, z{};
    for (int i = 0; i < n; ++i) {
      idx[i] = rem % m;
      rem /= m;
      u[i] = nodes[idx[i]];
      z[i] = D.center[i] + D.radius * u[i];
    }
    b[row] = f.value(z);
    for (int c = 0; c < basis_size; ++c) {
      double v = 1.0;
      for (int i = 0; i < n; ++i)
        v *= detail::chebyshev_eval(exps[c][i], u[i]);
      A(row, c) = v;
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  const auto& R = qr.matrixR();
  double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < basis_size; ++i) {
    double r = std::abs(R(i, i));
    rmax = std::max(rmax, r);
    rmin = std::min(rmin, r);
  }
  if (!(rmin > 0.0) || rmax / rmin > 1e12)
    throw FitError("fit_polynomial: ill-conditioned basis at degree " +
                       std::to_string(d),
                   d);
  Eigen::VectorXd coef = qr.solve(b);

  // Assemble in u coordinates, then substitute u = (x - center)/radius.
  auto T = detail::chebyshev_basis_1d(d);
  Polynomial in_u(n, d);
  for (int c = 0; c < basis_size; ++c) {
    if (coef[c] == 0.0) continue;
    Polynomial term = T[exps[c][0]];
    if (n >= 2) {
      // Lift the remaining axes: T_a2(u2) has exponents on variable 2.
      Polynomial t2(n, exps[c][1]);
      for (int k = 0; k <= exps[c][1]; ++k)
        t2.set_coeff(0, k, 0, T[exps[c][1]].coeff(k));
      Polynomial t1(n, exps[c][0]);
      for (int k = 0; k <= exps[c][0]; ++k)
        t1.set_coeff(k, 0, 0, T[exps[c][0]].coeff(k));
      term = t1 * t2;
      if (n == 3) {
        Polynomial t3(n, exps[c][2]);
        for (int k = 0; k <= exps[c][2]; ++k)
          t3.set_coeff(0, 0, k, T[exps[c][2]].coeff(k));
        term = term * t3;
      }
    }
    in_u = in_u + term.scaled(coef[c]);
  }
  std::array<double, 3> s{}, t{};
  for (int i = 0; i < 3; ++i) {
    s[i] = i < n ? 1.0 / D.radius : 0.0;
    t[i] = i < n ? -D.center[i] / D.radius : 0.0;
  }
  return in_u.affine_substitute(s, t).trimmed(0.0);
}

}  // namespace condeg
