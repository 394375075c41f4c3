#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "condeg/condition.hpp"
#include "condeg/field.hpp"
#include "condeg/norms.hpp"

namespace condeg {

// Odd C^2 profile: identity on [0, 5/8], concave transition, constant 3/4
// beyond 7/8. The transition has triangular second derivative with peak
// height 8 and integral -1; symmetry of the profile about the midpoint makes
// the value and slope constraints at 7/8 hold exactly (no C^2 profile with
// these breakpoints can keep |g''| below 4, and the wide symmetric ramp
// keeps the third-derivative scale small enough for low-degree fits).
class BumpProfile {
 public:
  struct Eval {
    double g, g1, g2;
  };

  static constexpr double kLinearEnd = 0.625;   // 5/8
  static constexpr double kPlateauStart = 0.875; // 7/8
  static constexpr double kPlateau = 0.75;
  static constexpr double kRampWidth = 1.0 / 8.0;
  static constexpr double kPeak = 8.0;

  Eval operator()(double t) const {
    double s = t < 0 ? -1.0 : 1.0;
    double u = std::abs(t);
    Eval e = positive_branch(u);
    return Eval{s * e.g, e.g1, s * e.g2};
  }

  double value(double t) const { return (*this)(t).g; }

 private:
  static Eval positive_branch(double t) {
    const double t0 = kLinearEnd, t1 = kPlateauStart, w = kRampWidth,
                 M = kPeak;
    if (t <= t0) return Eval{t, 1.0, 0.0};
    if (t >= t1) return Eval{kPlateau, 0.0, 0.0};
    // g'' ramps 0 -> -M over [t0, t0+w], stays at -M, ramps back over
    // [t1-w, t1]; antiderivatives are closed-form per piece.
    const double gA1 = 1.0 - M * w / 2.0;
    const double gA = t0 + w - M * w * w / 6.0;
    const double L = t1 - t0 - 2.0 * w;
    const double gB1 = gA1 - M * L;
    const double gB = gA + gA1 * L - M * L * L / 2.0;
    if (t <= t0 + w) {
      double u = t - t0;
      return Eval{t0 + u - M * u * u * u / (6.0 * w),
                  1.0 - M * u * u / (2.0 * w), -M * u / w};
    }
    if (t <= t1 - w) {
      double u = t - (t0 + w);
      return Eval{gA + gA1 * u - M * u * u / 2.0, gA1 - M * u, -M};
    }
    double u = t - (t1 - w);
    return Eval{gB + gB1 * u - M * (u * u / 2.0 - u * u * u / (6.0 * w)),
                gB1 - M * (u - u * u / (2.0 * w)), -M * (1.0 - u / w)};
  }
};

inline BumpProfile build_bump() { return BumpProfile{}; }

// Local geometry of the signed-distance field at a point inside the tube.
struct SurfaceFrame {
  double t = 0.0;                       // signed distance, negative inside
  Vec normal{};                         // unit outward normal (= grad d*)
  Vec closest{};                        // nearest surface point
  std::array<Vec, 2> tangents{};        // principal directions at x
  std::array<double, 2> curvatures{};   // principal curvatures at closest
};

class Hypersurface {
 public:
  virtual ~Hypersurface() = default;
  virtual int ambient_dim() const = 0;
  virtual double reach() const = 0;
  // Signed distance alone; total (defined for every x where the surface
  // primitive makes sense, including beyond the reach tube).
  virtual double distance_value(const Vec& x) const = 0;
  virtual SurfaceFrame frame(const Vec& x) const = 0;
  virtual std::vector<Vec> sample(int k) const = 0;
  virtual std::string describe() const = 0;
};

using SurfacePtr = std::shared_ptr<const Hypersurface>;

class CircleSurface final : public Hypersurface {
 public:
  CircleSurface(Vec center, double rho0) : c_(center), rho0_(rho0) {
    if (!(rho0 > 0)) throw std::invalid_argument("CircleSurface: radius must be positive");
  }
  int ambient_dim() const override { return 2; }
  double reach() const override { return rho0_; }
  double distance_value(const Vec& x) const override {
    return norm(x - c_) - rho0_;
  }
  SurfaceFrame frame(const Vec& x) const override {
    Vec d = x - c_;
    double r = norm(d);
    if (r == 0.0)
      throw std::domain_error("CircleSurface: center is on the medial axis");
    SurfaceFrame fr;
    fr.t = r - rho0_;
    fr.normal = (1.0 / r) * d;
    fr.closest = c_ + rho0_ * fr.normal;
    fr.tangents[0] = Vec{-fr.normal[1], fr.normal[0], 0};
    fr.curvatures[0] = 1.0 / rho0_;
    return fr;
  }
  std::vector<Vec> sample(int k) const override {
    std::vector<Vec> pts;
    for (int i = 0; i < k; ++i) {
      double a = 2.0 * M_PI * i / k;
      pts.push_back(c_ + rho0_ * Vec{std::cos(a), std::sin(a), 0});
    }
    return pts;
  }
  std::string describe() const override {
    return "circle radius " + std::to_string(rho0_);
  }

 private:
  Vec c_;
  double rho0_;
};

class EllipseSurface final : public Hypersurface {
 public:
  EllipseSurface(double a, double b) : a_(a), b_(b) {
    if (!(a >= b && b > 0))
      throw std::invalid_argument("EllipseSurface: requires a >= b > 0");
  }
  int ambient_dim() const override { return 2; }
  double reach() const override { return b_ * b_ / a_; }
  double distance_value(const Vec& x) const override {
    double theta = closest_theta(x);
    Vec p{a_ * std::cos(theta), b_ * std::sin(theta), 0};
    double d = norm(x - p);
    double q = (x[0] / a_) * (x[0] / a_) + (x[1] / b_) * (x[1] / b_);
    return q < 1.0 ? -d : d;
  }
  SurfaceFrame frame(const Vec& x) const override {
    double theta = closest_theta(x);
    double ct = std::cos(theta), st = std::sin(theta);
    Vec p{a_ * ct, b_ * st, 0};
    SurfaceFrame fr;
    fr.closest = p;
    // Outward normal from the gradient of the implicit equation.
    Vec nrm{ct / a_, st / b_, 0};
    fr.normal = (1.0 / norm(nrm)) * nrm;
    double d = norm(x - p);
    double q = (x[0] / a_) * (x[0] / a_) + (x[1] / b_) * (x[1] / b_);
    fr.t = q < 1.0 ? -d : d;
    fr.tangents[0] = Vec{-fr.normal[1], fr.normal[0], 0};
    double den = a_ * a_ * st * st + b_ * b_ * ct * ct;
    fr.curvatures[0] = a_ * b_ / (den * std::sqrt(den));
    return fr;
  }
  std::vector<Vec> sample(int k) const override {
    std::vector<Vec> pts;
    for (int i = 0; i < k; ++i) {
      double a = 2.0 * M_PI * i / k;
      pts.push_back(Vec{a_ * std::cos(a), b_ * std::sin(a), 0});
    }
    return pts;
  }
  std::string describe() const override {
    return "ellipse " + std::to_string(a_) + " x " + std::to_string(b_);
  }

 private:
  // Newton on the stationarity equation (x - p(theta)) . p'(theta) = 0,
  // seeded by the best of a dense angular scan; bisection fallback.
  double closest_theta(const Vec& x) const {
    auto dist2 = [&](double th) {
      double dx = x[0] - a_ * std::cos(th), dy = x[1] - b_ * std::sin(th);
      return dx * dx + dy * dy;
    };
    const int K = 64;
    double best = 0.0, bestv = dist2(0.0);
    for (int i = 1; i < K; ++i) {
      double th = 2.0 * M_PI * i / K;
      double v = dist2(th);
      if (v < bestv) {
        bestv = v;
        best = th;
      }
    }
    double th = best;
    for (int it = 0; it < 100; ++it) {
      double ct = std::cos(th), st = std::sin(th);
      double px = a_ * ct, py = b_ * st;
      double tx = -a_ * st, ty = b_ * ct;       // p'
      double sx = -a_ * ct, sy = -b_ * st;      // p''
      double F = (x[0] - px) * tx + (x[1] - py) * ty;
      double dF = -(tx * tx + ty * ty) + (x[0] - px) * sx + (x[1] - py) * sy;
      if (std::abs(F) < 1e-12 * (1.0 + a_ * a_)) break;
      double step = dF != 0.0 ? -F / dF : 0.0;
      if (!(std::abs(step) < M_PI / K) || dist2(th + step) > dist2(th)) {
        // Fallback: golden-section shrink around the scan minimum.
        double lo = best - 2.0 * M_PI / K, hi = best + 2.0 * M_PI / K;
        for (int b2 = 0; b2 < 200 && hi - lo > 1e-14; ++b2) {
          double m1 = lo + (hi - lo) * 0.382, m2 = lo + (hi - lo) * 0.618;
          if (dist2(m1) < dist2(m2)) hi = m2;
          else lo = m1;
        }
        return 0.5 * (lo + hi);
      }
      th += step;
    }
    return th;
  }

  double a_, b_;
};

class TorusSurface final : public Hypersurface {
 public:
  TorusSurface(double tube, double ring) : r_(tube), R_(ring) {
    if (!(ring > tube && tube > 0))
      throw std::invalid_argument("TorusSurface: requires ring > tube > 0");
  }
  int ambient_dim() const override { return 3; }
  double reach() const override { return std::min(r_, R_ - r_); }
  double distance_value(const Vec& x) const override {
    double q = std::hypot(x[0], x[1]);
    return std::hypot(q - R_, x[2]) - r_;
  }
  SurfaceFrame frame(const Vec& x) const override {
    double q = std::hypot(x[0], x[1]);
    if (q == 0.0)
      throw std::domain_error("TorusSurface: axis is on the medial axis");
    Vec u{x[0] / q, x[1] / q, 0};            // radial direction in the plane
    double dq = q - R_;
    double s = std::hypot(dq, x[2]);
    if (s == 0.0)
      throw std::domain_error("TorusSurface: core ring is on the medial axis");
    SurfaceFrame fr;
    fr.t = s - r_;
    fr.normal = Vec{u[0] * dq / s, u[1] * dq / s, x[2] / s};
    Vec ring_pt{R_ * u[0], R_ * u[1], 0};
    fr.closest = ring_pt + r_ * (1.0 / s) * Vec{u[0] * dq, u[1] * dq, x[2]};
    // Meridian direction: rotate the normal by 90 deg in the (u, z) plane.
    fr.tangents[0] = Vec{-u[0] * x[2] / s, -u[1] * x[2] / s, dq / s};
    fr.curvatures[0] = 1.0 / r_;
    // Ring direction: horizontal, perpendicular to u.
    fr.tangents[1] = Vec{-u[1], u[0], 0};
    double cos_phi = dq / s;
    fr.curvatures[1] = cos_phi / (R_ + r_ * cos_phi);
    return fr;
  }
  std::vector<Vec> sample(int k) const override {
    std::vector<Vec> pts;
    int m = std::max(4, static_cast<int>(std::sqrt(double(k))));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double a = 2.0 * M_PI * i / m, b = 2.0 * M_PI * j / m;
        double q = R_ + r_ * std::cos(b);
        pts.push_back(Vec{q * std::cos(a), q * std::sin(a), r_ * std::sin(b)});
      }
    return pts;
  }
  std::string describe() const override {
    return "torus tube " + std::to_string(r_) + " ring " + std::to_string(R_);
  }

 private:
  double r_, R_;
};

// Order-2 jet of the signed distance inside the reach tube. Hessian
// eigenvalues are k_i/(1 + k_i t) on the principal directions and 0 on the
// normal, with k_i the principal curvatures at the nearest surface point.
inline Jet signed_distance(const Hypersurface& Z, const Vec& x) {
  SurfaceFrame fr = Z.frame(x);
  if (!(std::abs(fr.t) < Z.reach()))
    throw std::domain_error("signed_distance: point outside the reach tube");
  const int n = Z.ambient_dim();
  Jet j = Jet::constant(fr.t, n, 2);
  j.grad = fr.normal;
  for (int k = 0; k < n - 1; ++k) {
    double kp = fr.curvatures[k];
    double beta = kp / (1.0 + kp * fr.t);
    const Vec& e = fr.tangents[k];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) j.hess[a][b] += beta * e[a] * e[b];
  }
  return j;
}

// f = g_rho(d*_Z): zero set exactly Z, plateau +-(3/4)rho outside the
// |d*| < (7/8)rho tube, C^2 everywhere. Jets available up to order 2.
class DefiningFunctionField final : public ScalarField {
 public:
  explicit DefiningFunctionField(SurfacePtr Z) : Z_(std::move(Z)) {}
  int dim() const override { return Z_->ambient_dim(); }
  int max_order() const override { return 2; }
  Jet jet(const Vec& z, int order) const override {
    if (order > 2)
      throw std::invalid_argument("DefiningFunctionField: order capped at 2");
    const double rho = Z_->reach();
    double t = Z_->distance_value(z);
    if (std::abs(t) >= BumpProfile::kPlateauStart * rho) {
      double s = t < 0 ? -1.0 : 1.0;
      return Jet::constant(s * BumpProfile::kPlateau * rho, dim(), order);
    }
    Jet d = signed_distance(*Z_, z);
    d.order = order;  // callers may want less than the full order-2 jet
    BumpProfile::Eval e = g_(t / rho);
    // g_rho(u) = rho*g(u/rho): derivatives g'(u/rho), g''(u/rho)/rho.
    return compose(d, rho * e.g, e.g1, e.g2 / rho, 0.0);
  }
  const Hypersurface& surface() const { return *Z_; }

 private:
  SurfacePtr Z_;
  BumpProfile g_;
};

inline FieldPtr defining_function(SurfacePtr Z) {
  return std::make_shared<DefiningFunctionField>(std::move(Z));
}

struct ReachBoundsReport {
  double rho = 0.0;
  double delta = 0.0, delta_bound = 0.0;
  double kappa1 = 0.0, kappa1_bound = 0.0;
  double kappa2 = 0.0, kappa2_bound = 0.0;
  bool delta_ok = false, kappa1_ok = false, kappa2_ok = false;
  bool kappa2_checked = false;
  double resolution = 0.0;
  double tol = 0.02;
};

// Measured delta / kappa^(1) / kappa^(2) of the defining function against
// the closed-form bounds rho/2, 2(1+1/rho), 2(1+1/rho+5n/rho^2).
inline ReachBoundsReport verify_condition_bounds(const SurfacePtr& Z,
                                                 const Disk& D,
                                                 double resolution = 0.0,
                                                 bool check_kappa2 = true) {
  if (Z->ambient_dim() != D.n)
    throw std::invalid_argument("verify_condition_bounds: dimension mismatch");
  if (resolution <= 0.0) resolution = default_resolution(D);
  const double rho = Z->reach();
  double dist_boundary = std::numeric_limits<double>::infinity();
  for (const Vec& p : Z->sample(256))
    dist_boundary = std::min(dist_boundary, D.radius - norm(p - D.center));
  if (!(dist_boundary > rho))
    throw std::invalid_argument(
        "verify_condition_bounds: requires dist(Z, boundary) > reach");

  auto f = defining_function(Z);
  ReachBoundsReport rep;
  rep.rho = rho;
  rep.resolution = resolution;
  ConditionReport cr = delta_hypersurface(*f, D, resolution);
  rep.delta = cr.delta;
  rep.delta_bound = rho / 2.0;
  rep.delta_ok = rep.delta >= rep.delta_bound * (1.0 - rep.tol);
  double n1 = c_norm(*f, D, 1, resolution).value;
  rep.kappa1 = cr.delta > 0 ? n1 / cr.delta : std::numeric_limits<double>::infinity();
  rep.kappa1_bound = 2.0 * (1.0 + 1.0 / rho);
  rep.kappa1_ok = rep.kappa1 <= rep.kappa1_bound * (1.0 + rep.tol);
  if (check_kappa2) {
    rep.kappa2_checked = true;
    double n2 = c_norm(*f, D, 2, resolution).value;
    rep.kappa2 = cr.delta > 0 ? n2 / cr.delta : std::numeric_limits<double>::infinity();
    rep.kappa2_bound = 2.0 * (1.0 + 1.0 / rho + 5.0 * D.n / (rho * rho));
    rep.kappa2_ok = rep.kappa2 <= rep.kappa2_bound * (1.0 + rep.tol);
  }
  return rep;
}

// CLI surface spec: "circle:cx,cy,r" | "ellipse:a,b" | "torus:r,R".
inline SurfacePtr parse_surface(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("parse_surface: expected kind:params");
  std::string kind = text.substr(0, colon);
  std::vector<double> v;
  std::string rest = text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    std::size_t next = rest.find(',', pos);
    if (next == std::string::npos) next = rest.size();
    try {
      v.push_back(std::stod(rest.substr(pos, next - pos)));
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_surface: malformed number in '" + text + "'");
    }
    pos = next + 1;
  }
  if (kind == "circle" && v.size() == 3)
    return std::make_shared<CircleSurface>(Vec{v[0], v[1], 0}, v[2]);
  if (kind == "ellipse" && v.size() == 2)
    return std::make_shared<EllipseSurface>(v[0], v[1]);
  if (kind == "torus" && v.size() == 2)
    return std::make_shared<TorusSurface>(v[0], v[1]);
  throw std::invalid_argument("parse_surface: unrecognized spec '" + text + "'");
}

}  // namespace condeg
