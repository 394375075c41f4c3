#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "condeg/reach.hpp"
#include "condeg/topology.hpp"
#include "oracles.hpp"

using namespace condeg;

namespace {

// FD oracles against the exact distance function, bypassing the frame path.
double dist_hess(const Hypersurface& Z, Vec x, int i, int j, double h = 1e-4) {
  auto val = [&](Vec p) { return Z.distance_value(p); };
  if (i == j) {
    Vec a = x, b = x;
    a[i] += h;
    b[i] -= h;
    return (val(a) - 2.0 * val(x) + val(b)) / (h * h);
  }
  Vec pp = x, pm = x, mp = x, mm = x;
  pp[i] += h; pp[j] += h;
  pm[i] += h; pm[j] -= h;
  mp[i] -= h; mp[j] += h;
  mm[i] -= h; mm[j] -= h;
  return (val(pp) - val(pm) - val(mp) + val(mm)) / (4.0 * h * h);
}

}  // namespace

TEST_CASE("bump profile values and oddness") {
  BumpProfile g = build_bump();
  CHECK(g.value(0.25) == doctest::Approx(0.25));
  CHECK(g.value(0.875) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(g.value(1.0) == doctest::Approx(0.75));
  CHECK(g.value(-1.0) == doctest::Approx(-0.75));
  CHECK(g.value(0.0) == 0.0);
  for (double t : {0.1, 0.3, 0.55, 0.7, 0.8, 0.95}) {
    auto p = g(t), m = g(-t);
    CHECK(m.g == doctest::Approx(-p.g).epsilon(1e-14));
    CHECK(m.g1 == doctest::Approx(p.g1).epsilon(1e-14));
    CHECK(m.g2 == doctest::Approx(-p.g2).epsilon(1e-14));
  }
}

TEST_CASE("bump profile is C2 across the breakpoints") {
  BumpProfile g = build_bump();
  const double eps = 1e-9;
  const double breaks[] = {BumpProfile::kLinearEnd,
                           BumpProfile::kLinearEnd + BumpProfile::kRampWidth,
                           BumpProfile::kPlateauStart - BumpProfile::kRampWidth,
                           BumpProfile::kPlateauStart};
  for (double b : breaks) {
    auto lo = g(b - eps), hi = g(b + eps);
    CHECK(lo.g == doctest::Approx(hi.g).epsilon(1e-8).scale(1.0));
    CHECK(lo.g1 == doctest::Approx(hi.g1).epsilon(1e-7).scale(1.0));
    CHECK(lo.g2 == doctest::Approx(hi.g2).epsilon(1e-5).scale(1.0));
  }
}

TEST_CASE("bump profile slope and curvature envelopes") {
  BumpProfile g = build_bump();
  double worst_g2 = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    double t = -1.2 + 2.4 * i / 100000.0;
    auto e = g(t);
    CHECK(e.g1 >= -1e-12);
    CHECK(e.g1 <= 1.0 + 1e-12);
    worst_g2 = std::max(worst_g2, std::abs(e.g2));
    // Concave transition on the positive side.
    if (t >= 0.5 && t <= BumpProfile::kPlateauStart) CHECK(e.g2 <= 1e-12);
  }
  CHECK(worst_g2 <= BumpProfile::kPeak + 1e-12);
  CHECK(worst_g2 == doctest::Approx(BumpProfile::kPeak).epsilon(1e-3));
}

TEST_CASE("bump profile curvature integrates to the slope drop") {
  BumpProfile g = build_bump();
  // Trapezoid quadrature of g'' over [0,1] must equal g'(1) - g'(0) = -1.
  const int N = 100000;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    double a = double(i) / N, b = double(i + 1) / N;
    sum += 0.5 * (g(a).g2 + g(b).g2) / N;
  }
  CHECK(sum == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("bump profile derivatives match finite differences") {
  BumpProfile g = build_bump();
  // Sample away from the g'' kinks, where FD is clean.
  const double pts[] = {0.1, 0.3, 0.55, 0.7, 0.75, 0.8, 0.95, -0.4, -0.72};
  for (double t : pts) {
    auto e = g(t);
    double h = 1e-6;
    double fd1 = (g.value(t + h) - g.value(t - h)) / (2.0 * h);
    double fd2 = (g.value(t + h) - 2.0 * g.value(t) + g.value(t - h)) / (h * h);
    CHECK(e.g1 == doctest::Approx(fd1).epsilon(1e-6).scale(1.0));
    CHECK(e.g2 == doctest::Approx(fd2).epsilon(1e-3).scale(1.0));
  }
}

TEST_CASE("signed distance jet on the circle") {
  CircleSurface Z(Vec{0, 0, 0}, 0.5);
  Jet j = signed_distance(Z, Vec{0.75, 0, 0});
  CHECK(j.value == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(j.grad[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(j.grad[1] == doctest::Approx(0.0));
  // Tangential eigenvalue k/(1 + k t) = 2/(1 + 0.5) = 4/3; normal direction 0.
  CHECK(j.hess[0][0] == doctest::Approx(0.0).scale(1.0));
  CHECK(j.hess[1][1] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  // Independent second-difference oracle on the exact distance.
  CHECK(j.hess[1][1] ==
        doctest::Approx(dist_hess(Z, Vec{0.75, 0, 0}, 1, 1)).epsilon(1e-6));
}

TEST_CASE("signed distance vanishes with unit gradient on the surface") {
  CircleSurface circ(Vec{0.2, -0.1, 0}, 0.6);
  EllipseSurface ell(1.0, 0.5);
  for (const Hypersurface* Z : {(const Hypersurface*)&circ,
                                (const Hypersurface*)&ell}) {
    for (const Vec& p : Z->sample(16)) {
      Jet j = signed_distance(*Z, p);
      CHECK(std::abs(j.value) < 1e-9);
      CHECK(norm(j.gradient()) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("signed distance rejects points beyond the reach tube") {
  CircleSurface Z(Vec{0, 0, 0}, 0.5);
  CHECK_THROWS_AS(signed_distance(Z, Vec{1.2, 0, 0}), std::domain_error);
  CHECK_THROWS_AS(signed_distance(Z, Vec{0, 0, 0}), std::domain_error);
}

TEST_CASE("signed distance Hessian matches FD on circle, ellipse, torus") {
  CircleSurface circ(Vec{0, 0, 0}, 1.0);
  EllipseSurface ell(1.0, 0.5);
  TorusSurface tor(1.0, 3.0);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto check = [&](const Hypersurface& Z, const Vec& x) {
    Jet j = signed_distance(Z, x);
    int n = Z.ambient_dim();
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        CHECK(j.hess[a][b] ==
              doctest::Approx(dist_hess(Z, x, a, b)).epsilon(5e-5).scale(1.0));
  };
  for (int t = 0; t < 30; ++t) {
    double r = 1.0 + 0.6 * (2.0 * uni(rng) - 1.0);
    double a = 2.0 * M_PI * uni(rng);
    check(circ, Vec{r * std::cos(a), r * std::sin(a), 0});
  }
  for (int t = 0; t < 30; ++t) {
    // Stay well inside the 0.25 reach tube of the ellipse.
    double th = 2.0 * M_PI * uni(rng);
    Vec p{std::cos(th), 0.5 * std::sin(th), 0};
    Vec nr{std::cos(th) / 1.0, std::sin(th) / 0.5, 0};
    nr = (1.0 / norm(nr)) * nr;
    check(ell, p + (0.15 * (2.0 * uni(rng) - 1.0)) * nr);
  }
  for (int t = 0; t < 30; ++t) {
    double a = 2.0 * M_PI * uni(rng), b = 2.0 * M_PI * uni(rng);
    double rr = 1.0 + 0.6 * (2.0 * uni(rng) - 1.0);
    double q = 3.0 + rr * std::cos(b);
    check(tor, Vec{q * std::cos(a), q * std::sin(a), rr * std::sin(b)});
  }
}

TEST_CASE("defining function values on and around the circle") {
  auto Z = std::make_shared<CircleSurface>(Vec{0, 0, 0}, 0.5);
  auto f = defining_function(Z);
  // Linear zone: f = rho * g(t/rho) = t for |t| <= (5/8) rho.
  CHECK(f->value(Vec{0.75, 0, 0}) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(f->value(Vec{0.5, 0, 0}) == doctest::Approx(0.0).scale(1.0));
  CHECK(f->value(Vec{0.3, 0, 0}) == doctest::Approx(-0.2).epsilon(1e-12));
  // Plateau: +-(3/4) rho with vanishing jet.
  Jet far = f->jet(Vec{1.5, 0, 0}, 2);
  CHECK(far.value == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(norm(far.gradient()) == 0.0);
  Jet center = f->jet(Vec{0.02, 0.01, 0}, 2);
  CHECK(center.value == doctest::Approx(-0.375).epsilon(1e-14));
  CHECK(norm(center.gradient()) == 0.0);
}

TEST_CASE("defining function chain rule matches finite differences") {
  auto Z = std::make_shared<CircleSurface>(Vec{0, 0, 0}, 1.0);
  auto f = defining_function(Z);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int checked = 0;
  for (int t = 0; t < 200 && checked < 100; ++t) {
    // Keep t/rho out of the g'' kink neighborhoods so FD is trustworthy.
    double u = -0.95 + 1.9 * uni(rng);
    bool near_kink = false;
    for (double b : {BumpProfile::kLinearEnd,
                     BumpProfile::kLinearEnd + BumpProfile::kRampWidth,
                     BumpProfile::kPlateauStart - BumpProfile::kRampWidth,
                     BumpProfile::kPlateauStart})
      if (std::abs(std::abs(u) - b) < 0.015) near_kink = true;
    if (near_kink) continue;
    double a = 2.0 * M_PI * uni(rng);
    Vec x{(1.0 + u) * std::cos(a), (1.0 + u) * std::sin(a), 0};
    Jet j = f->jet(x, 2);
    ++checked;
    for (int i = 0; i < 2; ++i) {
      CHECK(j.grad[i] ==
            doctest::Approx(oracles::fd_grad(*f, x, i)).epsilon(1e-6).scale(1.0));
      for (int k = i; k < 2; ++k)
        CHECK(j.hess[i][k] ==
              doctest::Approx(oracles::fd_hess(*f, x, i, k)).epsilon(1e-4).scale(1.0));
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("defining function first and second derivatives stay bounded") {
  auto Z = std::make_shared<CircleSurface>(Vec{0, 0, 0}, 0.5);
  auto f = defining_function(Z);
  const double rho = 0.5;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    double r = 2.0 * uni(rng);
    if (r < 1e-3) continue;
    double a = 2.0 * M_PI * uni(rng);
    Jet j = f->jet(Vec{r * std::cos(a), r * std::sin(a), 0}, 2);
    CHECK(norm(j.gradient()) <= 1.0 + 1e-9);
    // |f''| <= |g''|/rho + |g'| * curvature damping <= (peak + 8)/rho.
    double hmax = 0.0;
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) hmax = std::max(hmax, std::abs(j.hess[p][q]));
    CHECK(hmax <= (BumpProfile::kPeak + 8.0) / rho + 1e-6);
  }
}

TEST_CASE("defining function zero set tracks the surface") {
  auto Z = std::make_shared<CircleSurface>(Vec{0.1, -0.05, 0}, 0.5);
  auto f = defining_function(Z);
  Disk D{Vec{0, 0, 0}, 1.2, 2};
  ContourSet cs = extract_zero_set(*f, D, 1.2 / 128.0);
  REQUIRE(cs.contours.size() == 1);
  for (const auto& v : cs.contours[0].vertices)
    CHECK(std::abs(Z->distance_value(v)) < 1.2 / 128.0);
}

TEST_CASE("condition bounds hold for the unit circle") {
  auto Z = std::make_shared<CircleSurface>(Vec{0, 0, 0}, 1.0);
  Disk D{Vec{0, 0, 0}, 3.0, 2};
  auto rep = verify_condition_bounds(Z, D, 3.0 / 128.0);
  CHECK(rep.delta_ok);
  CHECK(rep.kappa1_ok);
  CHECK(rep.kappa2_checked);
  CHECK(rep.kappa2_ok);
  CHECK(rep.delta >= 0.5 * (1.0 - rep.tol));
  CHECK(rep.kappa1 <= 4.0 * (1.0 + rep.tol));
}

TEST_CASE("condition bounds hold for a 2:1 ellipse") {
  auto Z = std::make_shared<EllipseSurface>(1.0, 0.5);
  CHECK(Z->reach() == doctest::Approx(0.25));
  Disk D{Vec{0, 0, 0}, 3.0, 2};
  auto rep = verify_condition_bounds(Z, D, 3.0 / 128.0);
  CHECK(rep.delta_ok);
  CHECK(rep.kappa1_ok);
  CHECK(rep.kappa2_ok);
}

TEST_CASE("condition bound verification rejects surfaces near the boundary") {
  auto Z = std::make_shared<CircleSurface>(Vec{0, 0, 0}, 2.5);
  Disk D{Vec{0, 0, 0}, 3.0, 2};
  CHECK_THROWS_AS(verify_condition_bounds(Z, D, 0.05), std::invalid_argument);
}

TEST_CASE("reach values of the model surfaces") {
  CHECK(CircleSurface(Vec{0, 0, 0}, 0.7).reach() == doctest::Approx(0.7));
  CHECK(EllipseSurface(2.0, 1.0).reach() == doctest::Approx(0.5));
  CHECK(TorusSurface(1.0, 3.0).reach() == doctest::Approx(1.0));
  CHECK(TorusSurface(1.5, 2.0).reach() == doctest::Approx(0.5));
}

TEST_CASE("parse_surface round trips the CLI specs") {
  auto c = parse_surface("circle:0.5,-0.25,1.5");
  CHECK(c->ambient_dim() == 2);
  CHECK(c->reach() == doctest::Approx(1.5));
  CHECK(c->distance_value(Vec{2.0, -0.25, 0}) == doctest::Approx(0.0));
  auto e = parse_surface("ellipse:1,0.5");
  CHECK(e->reach() == doctest::Approx(0.25));
  auto t = parse_surface("torus:1,3");
  CHECK(t->ambient_dim() == 3);
  CHECK_THROWS_AS(parse_surface("circle:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_surface("blob:1,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_surface("circle:a,b,c"), std::invalid_argument);
  CHECK_THROWS_AS(parse_surface("noparams"), std::invalid_argument);
}
