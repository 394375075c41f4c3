#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "condeg/field.hpp"
#include "condeg/jet.hpp"

namespace condeg {

// Dense real polynomial in n <= 3 variables, coefficients stored over all
// multi-indices |alpha| <= max_degree in graded-lexicographic order.
class Polynomial {
 public:
  using Exp = std::array<int, 3>;

  Polynomial(int n, int max_degree) : n_(n), max_degree_(max_degree) {
    if (n < 1 || n > kMaxDim)
      throw std::invalid_argument("Polynomial: dimension must be in [1,3]");
    if (max_degree < 0)
      throw std::invalid_argument("Polynomial: negative degree");
    build_index();
    coeffs_.assign(exps_.size(), 0.0);
  }

  int dim() const { return n_; }
  int max_degree() const { return max_degree_; }

  // Max |alpha| with a nonzero coefficient (0 for the zero polynomial).
  int degree() const {
    int d = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (coeffs_[i] != 0.0)
        d = std::max(d, exps_[i][0] + exps_[i][1] + exps_[i][2]);
    return d;
  }

  const std::vector<Exp>& exponents() const { return exps_; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double coeff(int a1, int a2 = 0, int a3 = 0) const {
    int i = find(a1, a2, a3);
    return i < 0 ? 0.0 : coeffs_[i];
  }

  void set_coeff(int a1, int a2, int a3, double c) {
    int i = find(a1, a2, a3);
    if (i < 0) throw std::out_of_range("Polynomial: exponent exceeds max degree");
    coeffs_[i] = c;
  }

  void add_coeff(int a1, int a2, int a3, double c) {
    int i = find(a1, a2, a3);
    if (i < 0) throw std::out_of_range("Polynomial: exponent exceeds max degree");
    coeffs_[i] += c;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  // Drop coefficients below rel_tol * max|coeff| and shrink max_degree to
  // the actual degree.
  Polynomial trimmed(double rel_tol = 0.0) const {
    double cut = rel_tol * max_abs_coeff();
    int d = 0;
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (std::abs(coeffs_[i]) > cut)
        d = std::max(d, exps_[i][0] + exps_[i][1] + exps_[i][2]);
    Polynomial r(n_, d);
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (std::abs(coeffs_[i]) > cut)
        r.set_coeff(exps_[i][0], exps_[i][1], exps_[i][2], coeffs_[i]);
    return r;
  }

  Jet eval_jet(const Vec& z, int order) const {
    if (order < 0 || order > 3)
      throw std::invalid_argument("Polynomial: order must be in [0,3]");
    // Cached powers z_i^k.
    std::array<std::vector<double>, 3> pw;
    for (int i = 0; i < n_; ++i) {
      pw[i].resize(max_degree_ + 1);
      pw[i][0] = 1.0;
      for (int k = 1; k <= max_degree_; ++k) pw[i][k] = pw[i][k - 1] * z[i];
    }
    Jet j = Jet::constant(0.0, n_, order);
    auto deriv = [&](const Exp& e, const Exp& b) -> double {
      double f = 1.0;
      for (int i = 0; i < n_; ++i) {
        if (e[i] < b[i]) return 0.0;
        for (int k = 0; k < b[i]; ++k) f *= (e[i] - k);
        f *= pw[i][e[i] - b[i]];
      }
      return f;
    };
    for (std::size_t t = 0; t < exps_.size(); ++t) {
      double c = coeffs_[t];
      if (c == 0.0) continue;
      const Exp& e = exps_[t];
      j.value += c * deriv(e, {0, 0, 0});
      if (order >= 1) {
        for (int i = 0; i < n_; ++i) {
          Exp b{};
          b[i] = 1;
          j.grad[i] += c * deriv(e, b);
        }
      }
      if (order >= 2) {
        for (int a = 0; a < n_; ++a)
          for (int bb = a; bb < n_; ++bb) {
            Exp b{};
            b[a] += 1;
            b[bb] += 1;
            double v = c * deriv(e, b);
            j.hess[a][bb] += v;
            if (a != bb) j.hess[bb][a] += v;
          }
      }
      if (order >= 3) {
        for (int a = 0; a < n_; ++a)
          for (int bb = a; bb < n_; ++bb)
            for (int cc = bb; cc < n_; ++cc) {
              Exp b{};
              b[a] += 1;
              b[bb] += 1;
              b[cc] += 1;
              double v = c * deriv(e, b);
              // Distribute over all distinct index permutations.
              int idx[3] = {a, bb, cc};
              std::array<std::array<int, 3>, 6> perms = {{{0, 1, 2},
                                                          {0, 2, 1},
                                                          {1, 0, 2},
                                                          {1, 2, 0},
                                                          {2, 0, 1},
                                                          {2, 1, 0}}};
              bool seen[6] = {};
              for (int p = 0; p < 6; ++p) {
                int i0 = idx[perms[p][0]], i1 = idx[perms[p][1]],
                    i2 = idx[perms[p][2]];
                bool dup = false;
                for (int q = 0; q < p; ++q) {
                  if (!seen[q]) continue;
                  int j0 = idx[perms[q][0]], j1 = idx[perms[q][1]],
                      j2 = idx[perms[q][2]];
                  if (i0 == j0 && i1 == j1 && i2 == j2) dup = true;
                }
                seen[p] = !dup;
                if (!dup) j.third[i0][i1][i2] += v;
              }
            }
      }
    }
    return j;
  }

  Polynomial operator+(const Polynomial& o) const {
    Polynomial r(n_, std::max(max_degree_, o.max_degree_));
    for (std::size_t i = 0; i < exps_.size(); ++i)
      r.add_coeff(exps_[i][0], exps_[i][1], exps_[i][2], coeffs_[i]);
    for (std::size_t i = 0; i < o.exps_.size(); ++i)
      r.add_coeff(o.exps_[i][0], o.exps_[i][1], o.exps_[i][2], o.coeffs_[i]);
    return r;
  }

  Polynomial operator-(const Polynomial& o) const {
    Polynomial r(n_, std::max(max_degree_, o.max_degree_));
    for (std::size_t i = 0; i < exps_.size(); ++i)
      r.add_coeff(exps_[i][0], exps_[i][1], exps_[i][2], coeffs_[i]);
    for (std::size_t i = 0; i < o.exps_.size(); ++i)
      r.add_coeff(o.exps_[i][0], o.exps_[i][1], o.exps_[i][2], -o.coeffs_[i]);
    return r;
  }

  Polynomial operator*(const Polynomial& o) const {
    Polynomial r(n_, max_degree_ + o.max_degree_);
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (coeffs_[i] == 0.0) continue;
      for (std::size_t j = 0; j < o.exps_.size(); ++j) {
        if (o.coeffs_[j] == 0.0) continue;
        r.add_coeff(exps_[i][0] + o.exps_[j][0], exps_[i][1] + o.exps_[j][1],
                    exps_[i][2] + o.exps_[j][2], coeffs_[i] * o.coeffs_[j]);
      }
    }
    return r;
  }

  Polynomial scaled(double c) const {
    Polynomial r = *this;
    for (double& v : r.coeffs_) v *= c;
    return r;
  }

  // Substitute x_i = s_i * y_i + t_i; the result is a polynomial in y of the
  // same max degree.
  Polynomial affine_substitute(const std::array<double, 3>& s,
                               const std::array<double, 3>& t) const {
    Polynomial r(n_, max_degree_);
    std::vector<std::vector<double>> binom(max_degree_ + 1,
                                           std::vector<double>(max_degree_ + 1, 0.0));
    for (int i = 0; i <= max_degree_; ++i) {
      binom[i][0] = 1.0;
      for (int j = 1; j <= i; ++j)
        binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0.0);
    }
    for (std::size_t ti = 0; ti < exps_.size(); ++ti) {
      double c = coeffs_[ti];
      if (c == 0.0) continue;
      const Exp& e = exps_[ti];
      for (int b1 = 0; b1 <= e[0]; ++b1)
        for (int b2 = 0; b2 <= e[1]; ++b2)
          for (int b3 = 0; b3 <= e[2]; ++b3) {
            double w = c;
            int bs[3] = {b1, b2, b3};
            for (int i = 0; i < 3; ++i) {
              w *= binom[e[i]][bs[i]] * std::pow(s[i], bs[i]) *
                   std::pow(t[i], e[i] - bs[i]);
            }
            if (w != 0.0) r.add_coeff(b1, b2, b3, w);
          }
    }
    return r;
  }

  // Graded-lex text form; round-trips through parse_field.
  std::string to_string() const {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      double c = coeffs_[i];
      if (c == 0.0) continue;
      if (!out.empty()) out += " + ";
      std::snprintf(buf, sizeof(buf), "%.17g", c);
      std::string term = c < 0 ? "(" + std::string(buf) + ")" : std::string(buf);
      for (int v = 0; v < n_; ++v) {
        if (exps_[i][v] == 0) continue;
        term += "*x" + std::to_string(v + 1);
        if (exps_[i][v] > 1) term += "^" + std::to_string(exps_[i][v]);
      }
      out += term;
    }
    if (out.empty()) out = "0";
    return out;
  }

 private:
  void build_index() {
    for (int g = 0; g <= max_degree_; ++g) {
      if (n_ == 1) {
        exps_.push_back({g, 0, 0});
      } else if (n_ == 2) {
        for (int a1 = g; a1 >= 0; --a1) exps_.push_back({a1, g - a1, 0});
      } else {
        for (int a1 = g; a1 >= 0; --a1)
          for (int a2 = g - a1; a2 >= 0; --a2)
            exps_.push_back({a1, a2, g - a1 - a2});
      }
    }
    int side = max_degree_ + 1;
    lookup_.assign(side * side * side, -1);
    for (std::size_t i = 0; i < exps_.size(); ++i)
      lookup_[(exps_[i][0] * side + exps_[i][1]) * side + exps_[i][2]] =
          static_cast<int>(i);
  }

  int find(int a1, int a2, int a3) const {
    if (a1 < 0 || a2 < 0 || a3 < 0) return -1;
    if (a1 + a2 + a3 > max_degree_) return -1;
    int side = max_degree_ + 1;
    return lookup_[(a1 * side + a2) * side + a3];
  }

  int n_;
  int max_degree_;
  std::vector<Exp> exps_;
  std::vector<double> coeffs_;
  std::vector<int> lookup_;
};

class PolynomialField final : public ScalarField {
 public:
  explicit PolynomialField(Polynomial p) : p_(std::move(p)) {}
  int dim() const override { return p_.dim(); }
  Jet jet(const Vec& z, int order) const override {
    return p_.eval_jet(z, order);
  }
  const Polynomial& poly() const { return p_; }

 private:
  Polynomial p_;
};

inline FieldPtr make_field(const Polynomial& p) {
  return std::make_shared<PolynomialField>(p);
}

}  // namespace condeg
