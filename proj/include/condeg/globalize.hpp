#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "condeg/norms.hpp"
#include "condeg/polynomial.hpp"
#include "condeg/reach.hpp"
#include "condeg/topology.hpp"

namespace condeg {

struct GrowthConstant {
  int n = 0, d = 0, ell = 0;
  double a1 = 1.0;     // coefficient-vs-C^ell(D_1) norm equivalence constant
  double value = 1.0;  // dim(V_{n,d}) * a1
  bool is_lower_bound = true;
};

namespace detail {

inline long long binomial(int n, int k) {
  long long b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace detail

// Estimate of the constant in |p(x)| <= value * ||p||_{C^ell(D_R)} *
// (||x||/R)^d * (1+R^ell): random sampling of normalized polynomials plus
// coordinate ascent on the best specimen. Lower bound only.
inline GrowthConstant growth_constant(int n, int d, int ell,
                                      int samples = 2000,
                                      std::uint64_t seed = 7) {
  if (n < 1 || n > 3 || d < 0 || ell < 0 || ell > 2)
    throw std::invalid_argument("growth_constant: unsupported (n, d, ell)");
  GrowthConstant gc;
  gc.n = n;
  gc.d = d;
  gc.ell = ell;
  const long long dimV = detail::binomial(n + d, n);
  Disk D1{Vec{0, 0, 0}, 1.0, n};
  const double res = n == 1 ? 1.0 / 64.0 : (n == 2 ? 1.0 / 16.0 : 1.0 / 8.0);
  Polynomial proto(n, d);
  const int m = static_cast<int>(proto.exponents().size());
  auto ratio = [&](const std::vector<double>& c) {
    Polynomial p(n, d);
    double mx = 0.0;
    for (int i = 0; i < m; ++i) {
      const auto& e = proto.exponents()[i];
      p.set_coeff(e[0], e[1], e[2], c[i]);
      mx = std::max(mx, std::abs(c[i]));
    }
    double nrm = c_norm(PolynomialField(p), D1, ell, res).value;
    return nrm > 0 ? mx / nrm : 0.0;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> best(m, 0.0), cur(m);
  best[0] = 1.0;
  double best_ratio = ratio(best);
  for (int s = 0; s < samples; ++s) {
    for (int i = 0; i < m; ++i) cur[i] = uni(rng);
    double r = ratio(cur);
    if (r > best_ratio) {
      best_ratio = r;
      best = cur;
    }
  }
  if (m <= 100) {
    double step = 0.2;
    for (int pass = 0; pass < 3; ++pass, step *= 0.5)
      for (int i = 0; i < m; ++i)
        for (double sgn : {1.0, -1.0}) {
          cur = best;
          cur[i] += sgn * step;
          double r = ratio(cur);
          if (r > best_ratio) {
            best_ratio = r;
            best = cur;
          }
        }
  }
  gc.a1 = std::max(best_ratio, 1.0);
  gc.value = dimV * gc.a1;
  return gc;
}

inline double tau_from_max_dist(double max_dist, const Disk& D) {
  if (!(max_dist > 0.0))
    throw std::invalid_argument("tau_of: empty zero set");
  if (!(max_dist < D.radius))
    throw std::invalid_argument("tau_of: zero set not inside the disk");
  return std::log(D.radius / max_dist) / 3.0;
}

inline double tau_of(const ContourSet& cs, const Disk& D) {
  double mx = 0.0;
  if (cs.n == 1) {
    for (double r : cs.roots) mx = std::max(mx, std::abs(r - D.center[0]));
  } else {
    for (const auto& pl : cs.contours)
      for (const auto& v : pl.vertices) mx = std::max(mx, norm(v - D.center));
  }
  return tau_from_max_dist(mx, D);
}

inline double tau_of(const Hypersurface& Z, const Disk& D) {
  double mx = 0.0;
  for (const Vec& p : Z.sample(512)) mx = std::max(mx, norm(p - D.center));
  return tau_from_max_dist(mx, D);
}

struct GlobalizeCheck {
  std::string name;
  bool passed = false;
  double lhs = 0.0, rhs = 0.0;
  Vec witness{};
};

struct GlobalizeParams {
  double tau = 0.0;
  double s = 0.0;
  double r_in = 0.0;
  double a = 0.0;
  int ell = 0;
  int degree = 0;
  double c1 = 0.0;
  double kappa1_tilde = 0.0;
  std::vector<GlobalizeCheck> checks;
};

struct GlobalizeResult {
  Polynomial p;
  GlobalizeParams params;
};

struct GlobalizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// p = p0 + a * (|x - z0|^2 / s^2)^ell with the minimal feasible a and ell:
// the result has no zeros outside the disk while agreeing with p0 inside
// D_{r_in} up to C^1 error delta/2. `delta` is min{delta(f,D),
// delta(f,D_{r_in})}.
inline GlobalizeResult globalize(const Polynomial& p0, const FieldPtr& f,
                                 const Disk& D, double delta,
                                 double resolution = 0.0) {
  if (p0.dim() != D.n || f->dim() != D.n)
    throw std::invalid_argument("globalize: dimension mismatch");
  if (!(delta > 0.0)) throw std::invalid_argument("globalize: delta must be positive");
  if (resolution <= 0.0) resolution = default_resolution(D);
  const int n = D.n;
  const double R = D.radius;

  ContourSet cs = extract_zero_set(*f, D, resolution);
  double tau = tau_of(cs, D);
  double s = std::exp(-tau) * R;
  double r_in = std::exp(-2.0 * tau) * R;
  Disk D_in{D.center, r_in, n};

  const int d = std::max(p0.degree(), 1);
  GrowthConstant gc = growth_constant(n, d, 1);
  double normf1 = c_norm(*f, D, 1, resolution).value;
  double a = gc.value * (1.0 + s) * 2.0 * normf1;
  double k1t = normf1 / delta;

  // Smallest ell with ell > d/2 whose closed-form interior envelope
  // a e^{-2 ell tau} sqrt(1 + (2 ell / r_in)^2) -- the C^1 size of the added
  // term on D_{r_in} -- drops below delta/2. Seed with the log estimate,
  // then walk up: the exponential decay in ell dominates the linear factor.
  double rhs = (std::log(k1t) +
                std::log(gc.value * (1.0 + s) * (8.0 / (r_in * tau) + 4.0))) /
               tau;
  int ell = std::max(d / 2 + 1, static_cast<int>(std::ceil(rhs / 2.0)));
  auto envelope = [&](int L) {
    return a * std::exp(-2.0 * L * tau) *
           std::sqrt(1.0 + std::pow(2.0 * L / r_in, 2));
  };
  while (ell < 4000 && !(envelope(ell) < 0.5 * delta)) ++ell;
  if (!(envelope(ell) < 0.5 * delta))
    throw GlobalizeError("globalize: no feasible exponent below the cap");

  // The annulus D \ D_{r_in} must be free of zeros of p0, with known sign.
  {
    bool any_nonpos = false;
    Vec bad{};
    for (int i = 0; i < 512; ++i) {
      double frac = r_in / R + (1.0 - r_in / R) * ((i % 16) + 0.5) / 16.0;
      double ang = 2.0 * M_PI * (i / 16) / 32.0;
      Vec x = D.center;
      if (n == 1) x[0] += (i % 2 == 0 ? 1 : -1) * frac * R;
      else {
        x[0] += frac * R * std::cos(ang);
        x[1] += frac * R * std::sin(ang);
        if (n == 3) x[2] += 0.0;
      }
      if (p0.eval_jet(x, 0).value <= 0.0) {
        any_nonpos = true;
        bad = x;
        break;
      }
    }
    if (any_nonpos)
      throw GlobalizeError(
          "globalize: p0 is not positive on the annulus between r_in and R "
          "(zero set escapes the inner disk); witness (" +
          std::to_string(bad[0]) + ", " + std::to_string(bad[1]) + ")");
  }

  // Assemble p = p0 + a * (|x - z0|^2 / s^2)^ell.
  Polynomial q(n, 2);
  for (int i = 0; i < n; ++i) {
    q.add_coeff(i == 0 ? 2 : 0, i == 1 ? 2 : 0, i == 2 ? 2 : 0, 1.0);
    double c = D.center[i];
    if (c != 0.0) {
      q.add_coeff(i == 0 ? 1 : 0, i == 1 ? 1 : 0, i == 2 ? 1 : 0, -2.0 * c);
      q.add_coeff(0, 0, 0, c * c);
    }
  }
  Polynomial term(n, 0);
  term.set_coeff(0, 0, 0, 1.0);
  for (int i = 0; i < ell; ++i) term = term * q;
  term = term.scaled(a / std::pow(s * s, ell));
  Polynomial p = p0 + term;

  GlobalizeParams params;
  params.tau = tau;
  params.s = s;
  params.r_in = r_in;
  params.a = a;
  params.ell = ell;
  params.degree = p.degree();
  params.c1 = gc.value;
  params.kappa1_tilde = k1t;

  // Check 1: positivity outside the disk, sampled on spheres of radius R,
  // 1.1R, 2R, plus the growth-bound tail with a 2x safety factor.
  {
    GlobalizeCheck ck;
    ck.name = "positive_outside";
    ck.passed = true;
    double worst = std::numeric_limits<double>::infinity();
    for (double fac : {1.0, 1.1, 2.0}) {
      Disk sphere{D.center, fac * R, n};
      for_each_boundary_point(
          sphere, 2.0 * M_PI * fac * R / 1000.0, [&](const Vec& x, const Vec&) {
            double v = p.eval_jet(x, 0).value;
            if (v < worst) {
              worst = v;
              ck.witness = x;
            }
            if (v <= 0.0) ck.passed = false;
          });
    }
    ck.lhs = worst;
    ck.rhs = 0.0;
    params.checks.push_back(ck);

    // Beyond 2R positivity rests on the growth bound; demand a 2x margin
    // over the threshold since the constant is only a lower-bound estimate.
    GlobalizeCheck tail;
    tail.name = "growth_tail";
    double p0norm =
        c_norm(PolynomialField(p0), Disk{D.center, s, n}, 1, resolution).value;
    tail.lhs = a;
    tail.rhs = 2.0 * gc.value * (1.0 + s) * p0norm;
    tail.passed = a + 1e-12 >= tail.rhs && 2 * ell > d;
    params.checks.push_back(tail);
  }

  // Check 2: C^1 agreement with p0 inside D_{r_in}.
  {
    GlobalizeCheck ck;
    ck.name = "interior_c1";
    Polynomial diff = p - p0;
    NormEstimate err = c_norm(PolynomialField(diff), D_in, 1, resolution);
    ck.lhs = err.value;
    ck.rhs = delta / 2.0;
    ck.witness = err.argmax;
    ck.passed = ck.lhs < ck.rhs;
    params.checks.push_back(ck);
  }

  for (const auto& ck : params.checks)
    if (!ck.passed)
      throw GlobalizeError("globalize: check '" + ck.name +
                           "' failed (lhs " + std::to_string(ck.lhs) +
                           " vs rhs " + std::to_string(ck.rhs) +
                           "); witness (" + std::to_string(ck.witness[0]) +
                           ", " + std::to_string(ck.witness[1]) + ")");
  return GlobalizeResult{std::move(p), std::move(params)};
}

}  // namespace condeg
