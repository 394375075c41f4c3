#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace condeg {

inline constexpr int kMaxDim = 3;

// Point in R^n, n <= 3. Unused coordinates stay zero.
using Vec = std::array<double, kMaxDim>;

inline Vec make_vec(double x, double y = 0.0, double z = 0.0) {
  return Vec{x, y, z};
}

inline double dot(const Vec& a, const Vec& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec operator+(const Vec& a, const Vec& b) {
  return Vec{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Vec operator-(const Vec& a, const Vec& b) {
  return Vec{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Vec operator*(double c, const Vec& a) {
  return Vec{c * a[0], c * a[1], c * a[2]};
}

// Ambient domain: euclidean disk of dimension n, 1 <= n <= 3.
struct Disk {
  Vec center{};
  double radius = 1.0;
  int n = 2;

  Disk() = default;
  Disk(Vec c, double r, int dim) : center(c), radius(r), n(dim) {
    if (r <= 0.0) throw std::invalid_argument("Disk: radius must be positive");
    if (dim < 1 || dim > kMaxDim)
      throw std::invalid_argument("Disk: dimension must be in [1,3]");
  }

  bool contains(const Vec& z) const { return norm(z - center) <= radius; }
  double boundary_distance(const Vec& z) const {
    return radius - norm(z - center);
  }
};

// Derivatives of a scalar function at a point, up to order 3.
// hess and third are stored fully symmetric.
struct Jet {
  int n = 1;
  int order = 0;
  double value = 0.0;
  std::array<double, kMaxDim> grad{};
  std::array<std::array<double, kMaxDim>, kMaxDim> hess{};
  std::array<std::array<std::array<double, kMaxDim>, kMaxDim>, kMaxDim>
      third{};

  static Jet constant(double c, int n, int order) {
    Jet j;
    j.n = n;
    j.order = order;
    j.value = c;
    return j;
  }

  static Jet variable(int i, double x, int n, int order) {
    Jet j = constant(x, n, order);
    if (order >= 1) j.grad[i] = 1.0;
    return j;
  }

  Vec gradient() const { return Vec{grad[0], grad[1], grad[2]}; }
};

namespace detail {
inline void check_compatible(const Jet& a, const Jet& b) {
  if (a.n != b.n || a.order != b.order)
    throw std::invalid_argument("Jet: incompatible operands");
}
}  // namespace detail

inline Jet operator+(const Jet& a, const Jet& b) {
  detail::check_compatible(a, b);
  Jet r = a;
  r.value += b.value;
  for (int i = 0; i < a.n; ++i) {
    r.grad[i] += b.grad[i];
    for (int j = 0; j < a.n; ++j) {
      r.hess[i][j] += b.hess[i][j];
      for (int k = 0; k < a.n; ++k) r.third[i][j][k] += b.third[i][j][k];
    }
  }
  return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  detail::check_compatible(a, b);
  Jet r = a;
  r.value -= b.value;
  for (int i = 0; i < a.n; ++i) {
    r.grad[i] -= b.grad[i];
    for (int j = 0; j < a.n; ++j) {
      r.hess[i][j] -= b.hess[i][j];
      for (int k = 0; k < a.n; ++k) r.third[i][j][k] -= b.third[i][j][k];
    }
  }
  return r;
}

inline Jet operator*(double c, const Jet& a) {
  Jet r = a;
  r.value *= c;
  for (int i = 0; i < a.n; ++i) {
    r.grad[i] *= c;
    for (int j = 0; j < a.n; ++j) {
      r.hess[i][j] *= c;
      for (int k = 0; k < a.n; ++k) r.third[i][j][k] *= c;
    }
  }
  return r;
}

// Leibniz rule up to third order.
inline Jet operator*(const Jet& a, const Jet& b) {
  detail::check_compatible(a, b);
  Jet r = Jet::constant(a.value * b.value, a.n, a.order);
  if (a.order >= 1) {
    for (int i = 0; i < a.n; ++i)
      r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
  }
  if (a.order >= 2) {
    for (int i = 0; i < a.n; ++i)
      for (int j = 0; j < a.n; ++j)
        r.hess[i][j] = a.hess[i][j] * b.value + a.grad[i] * b.grad[j] +
                       a.grad[j] * b.grad[i] + a.value * b.hess[i][j];
  }
  if (a.order >= 3) {
    for (int i = 0; i < a.n; ++i)
      for (int j = 0; j < a.n; ++j)
        for (int k = 0; k < a.n; ++k)
          r.third[i][j][k] =
              a.third[i][j][k] * b.value + a.hess[i][j] * b.grad[k] +
              a.hess[i][k] * b.grad[j] + a.hess[j][k] * b.grad[i] +
              a.grad[i] * b.hess[j][k] + a.grad[j] * b.hess[i][k] +
              a.grad[k] * b.hess[i][j] + a.value * b.third[i][j][k];
  }
  return r;
}

// Faa di Bruno to order 3 for a univariate outer function with derivatives
// f0 = phi(u), f1 = phi'(u), f2 = phi''(u), f3 = phi'''(u).
inline Jet compose(const Jet& u, double f0, double f1, double f2, double f3) {
  Jet r = Jet::constant(f0, u.n, u.order);
  if (u.order >= 1) {
    for (int i = 0; i < u.n; ++i) r.grad[i] = f1 * u.grad[i];
  }
  if (u.order >= 2) {
    for (int i = 0; i < u.n; ++i)
      for (int j = 0; j < u.n; ++j)
        r.hess[i][j] = f2 * u.grad[i] * u.grad[j] + f1 * u.hess[i][j];
  }
  if (u.order >= 3) {
    for (int i = 0; i < u.n; ++i)
      for (int j = 0; j < u.n; ++j)
        for (int k = 0; k < u.n; ++k)
          r.third[i][j][k] = f3 * u.grad[i] * u.grad[j] * u.grad[k] +
                             f2 * (u.hess[i][j] * u.grad[k] +
                                   u.hess[i][k] * u.grad[j] +
                                   u.hess[j][k] * u.grad[i]) +
                             f1 * u.third[i][j][k];
  }
  return r;
}

inline Jet operator/(const Jet& a, const Jet& b) {
  if (b.value == 0.0) throw std::domain_error("Jet: division by zero");
  double v = b.value;
  Jet inv = compose(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v),
                    -6.0 / (v * v * v * v));
  return a * inv;
}

inline Jet jet_sin(const Jet& u) {
  double s = std::sin(u.value), c = std::cos(u.value);
  return compose(u, s, c, -s, -c);
}

inline Jet jet_cos(const Jet& u) {
  double s = std::sin(u.value), c = std::cos(u.value);
  return compose(u, c, -s, -c, s);
}

inline Jet jet_exp(const Jet& u) {
  double e = std::exp(u.value);
  return compose(u, e, e, e, e);
}

inline Jet jet_sqrt(const Jet& u) {
  if (u.value <= 0.0)
    throw std::domain_error("Jet: sqrt of non-positive value");
  double s = std::sqrt(u.value);
  return compose(u, s, 0.5 / s, -0.25 / (s * u.value),
                 0.375 / (s * u.value * u.value));
}

// sqrt(u^2 + eps^2), a C^inf regularization of |u|.
inline Jet jet_abs_smooth(const Jet& u, double eps) {
  Jet sq = u * u;
  Jet shifted = sq;
  shifted.value += eps * eps;
  return jet_sqrt(shifted);
}

inline Jet jet_pow(const Jet& u, int k) {
  if (k < 0) throw std::invalid_argument("Jet: negative exponent");
  Jet r = Jet::constant(1.0, u.n, u.order);
  Jet base = u;
  int e = k;
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return r;
}

// Euclidean norm of the order-ell part of the jet, one term per distinct
// multi-index |alpha| <= ell.
inline double jet_norm(const Jet& j, int ell) {
  double s = j.value * j.value;
  if (ell >= 1) {
    for (int i = 0; i < j.n; ++i) s += j.grad[i] * j.grad[i];
  }
  if (ell >= 2) {
    for (int a = 0; a < j.n; ++a)
      for (int b = a; b < j.n; ++b) s += j.hess[a][b] * j.hess[a][b];
  }
  if (ell >= 3) {
    for (int a = 0; a < j.n; ++a)
      for (int b = a; b < j.n; ++b)
        for (int c = b; c < j.n; ++c) s += j.third[a][b][c] * j.third[a][b][c];
  }
  return std::sqrt(s);
}

}  // namespace condeg
