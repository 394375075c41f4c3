#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "condeg/condition.hpp"
#include "condeg/field.hpp"
#include "condeg/grid.hpp"
#include "condeg/norms.hpp"

namespace condeg {

struct Polyline {
  std::vector<Vec> vertices;
  bool closed = false;
};

struct ContourSet {
  int n = 2;
  double resolution = 0.0;
  std::vector<Polyline> contours;     // n = 2
  std::vector<double> roots;          // n = 1, sorted
  int region_components = 0;          // n = 3: sign regions - 1
};

struct ZeroSetSignature {
  int n = 2;
  int components = 0;
  std::vector<int> nesting_parent;    // n = 2; -1 for roots of the forest
  std::string forest_canonical;       // canonical encoding of the nesting forest
  std::vector<int> betti;
  int total_betti = 0;
  std::vector<double> roots;          // n = 1

  bool operator==(const ZeroSetSignature& o) const {
    return n == o.n && components == o.components &&
           forest_canonical == o.forest_canonical;
  }
};

namespace detail {

inline double bisect_root(const ScalarField& f, double a, double b, double fa,
                          double fb) {
  // Signs of fa, fb differ strictly.
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    double m = 0.5 * (a + b);
    double fm = f.value(Vec{m, 0, 0});
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return 0.5 * (a + b);
}

// One marching-squares pass over the bounding box; returns false when a
// degenerate cell (all corners ~0 inside the disk, or an exact zero corner)
// demands a jittered retry.
inline bool marching_squares_pass(const ScalarField& f, const Disk& D,
                                  double res, const Vec& jitter,
                                  std::vector<Polyline>& out) {
  out.clear();
  const int N = std::max(2, static_cast<int>(std::ceil(2.0 * D.radius / res)));
  const double h = 2.0 * D.radius / N;
  const double x0 = D.center[0] - D.radius + jitter[0];
  const double y0 = D.center[1] - D.radius + jitter[1];
  std::vector<double> v((N + 1) * (N + 1));
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i)
      v[j * (N + 1) + i] = f.value(Vec{x0 + i * h, y0 + j * h, 0});
  auto at = [&](int i, int j) { return v[j * (N + 1) + i]; };
  // Degeneracy is judged against the surrounding patch, not the global
  // maximum: fields with steep growth near the rim would otherwise swamp
  // legitimate small values along the zero set.
  auto cell_degenerate = [&](int i, int j) {
    double corners = std::max(std::max(std::abs(at(i, j)), std::abs(at(i + 1, j))),
                              std::max(std::abs(at(i, j + 1)), std::abs(at(i + 1, j + 1))));
    double patch = 0.0;
    for (int jj = std::max(0, j - 3); jj <= std::min(N, j + 4); ++jj)
      for (int ii = std::max(0, i - 3); ii <= std::min(N, i + 4); ++ii)
        patch = std::max(patch, std::abs(at(ii, jj)));
    return corners <= 1e-12 * std::max(1.0, patch);
  };
  auto in_disk = [&](double x, double y) {
    double dx = x - D.center[0], dy = y - D.center[1];
    return dx * dx + dy * dy <= D.radius * D.radius * 1.05;
  };
  // Exact zeros on the lattice make the sign pattern ambiguous.
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i)
      if (at(i, j) == 0.0 && in_disk(x0 + i * h, y0 + j * h)) return false;
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      double cx = x0 + (i + 0.5) * h, cy = y0 + (j + 0.5) * h;
      if (!in_disk(cx, cy)) continue;
      if (cell_degenerate(i, j)) return false;
    }

  // Edge keys: horizontal edge (i,j)->(i+1,j) is 2*(j*(N+1)+i); vertical
  // edge (i,j)->(i,j+1) is 2*(j*(N+1)+i)+1.
  auto hkey = [&](int i, int j) { return 2L * (static_cast<long>(j) * (N + 1) + i); };
  auto vkey = [&](int i, int j) { return 2L * (static_cast<long>(j) * (N + 1) + i) + 1; };
  std::map<long, Vec> cross;
  std::map<long, std::vector<long>> adj;
  auto crossing = [&](double xa, double ya, double va, double xb, double yb,
                      double vb) {
    double t = va / (va - vb);
    return Vec{xa + t * (xb - xa), ya + t * (yb - ya), 0};
  };
  auto link = [&](long a, long b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };

  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) {
      double bl = at(i, j), br = at(i + 1, j), tl = at(i, j + 1),
             tr = at(i + 1, j + 1);
      double xl = x0 + i * h, xr = x0 + (i + 1) * h;
      double yb = y0 + j * h, yt = y0 + (j + 1) * h;
      bool sb = bl > 0, sr2 = br > 0, st = tl > 0, sT = tr > 0;
      std::vector<long> edges;
      if (sb != sr2) {
        long k = hkey(i, j);
        if (!cross.count(k)) cross[k] = crossing(xl, yb, bl, xr, yb, br);
        edges.push_back(k);  // bottom
      }
      if (sr2 != sT) {
        long k = vkey(i + 1, j);
        if (!cross.count(k)) cross[k] = crossing(xr, yb, br, xr, yt, tr);
        edges.push_back(k);  // right
      }
      if (st != sT) {
        long k = hkey(i, j + 1);
        if (!cross.count(k)) cross[k] = crossing(xl, yt, tl, xr, yt, tr);
        edges.push_back(k);  // top
      }
      if (sb != st) {
        long k = vkey(i, j);
        if (!cross.count(k)) cross[k] = crossing(xl, yb, bl, xl, yt, tl);
        edges.push_back(k);  // left
      }
      if (edges.size() == 2) {
        link(edges[0], edges[1]);
      } else if (edges.size() == 4) {
        // Saddle: pair crossings by the sign of the cell center.
        double center = f.value(Vec{0.5 * (xl + xr), 0.5 * (yb + yt), 0});
        // edges order here: bottom, right, top, left.
        bool cs = center > 0;
        if (cs == sb) {
          // Bottom-left corner region joins the center: (left,bottom) apart,
          // contour separates (bottom,right) and (top,left).
          link(edges[0], edges[1]);  // bottom-right
          link(edges[2], edges[3]);  // top-left
        } else {
          link(edges[0], edges[3]);  // bottom-left
          link(edges[1], edges[2]);  // right-top
        }
      }
    }

  // Chain crossings into polylines: open paths first (degree-1 seeds),
  // then cycles.
  std::map<long, bool> used;
  auto walk = [&](long start) {
    Polyline pl;
    long prev = -1, cur = start;
    for (;;) {
      used[cur] = true;
      pl.vertices.push_back(cross[cur]);
      long next = -1;
      for (long nb : adj[cur])
        if (nb != prev && !used[nb]) {
          next = nb;
          break;
        }
      if (next == -1) {
        // Either a dead end or the cycle closes back to start.
        for (long nb : adj[cur])
          if (nb == start && pl.vertices.size() >= 2) {
            pl.closed = true;
            pl.vertices.push_back(cross[start]);
          }
        break;
      }
      prev = cur;
      cur = next;
    }
    return pl;
  };
  for (auto& [k, nbs] : adj)
    if (nbs.size() == 1 && !used[k]) out.push_back(walk(k));
  for (auto& [k, nbs] : adj)
    if (!used[k]) out.push_back(walk(k));
  return true;
}

}  // namespace detail

inline ContourSet extract_zero_set(const ScalarField& f, const Disk& D,
                                   double resolution = 0.0) {
  if (resolution <= 0.0) resolution = default_resolution(D);
  ContourSet cs;
  cs.n = D.n;
  cs.resolution = resolution;
  if (D.n == 1) {
    int N = std::max(2, static_cast<int>(std::ceil(2.0 * D.radius / resolution)));
    double h = 2.0 * D.radius / N;
    double a0 = D.center[0] - D.radius;
    double prev = f.value(Vec{a0, 0, 0});
    for (int i = 1; i <= N; ++i) {
      double x = a0 + i * h;
      double cur = f.value(Vec{x, 0, 0});
      if (prev == 0.0) cs.roots.push_back(a0 + (i - 1) * h);
      else if ((prev > 0) != (cur > 0) && cur != 0.0)
        cs.roots.push_back(detail::bisect_root(f, a0 + (i - 1) * h, x, prev, cur));
      prev = cur;
    }
    if (prev == 0.0) cs.roots.push_back(a0 + N * h);
    std::sort(cs.roots.begin(), cs.roots.end());
    return cs;
  }
  if (D.n == 2) {
    const Vec jitters[3] = {Vec{0, 0, 0},
                            Vec{0.137 * resolution, 0.291 * resolution, 0},
                            Vec{-0.223 * resolution, 0.173 * resolution, 0}};
    for (int attempt = 0; attempt < 3; ++attempt) {
      if (detail::marching_squares_pass(f, D, resolution, jitters[attempt],
                                        cs.contours))
        return cs;
    }
    throw std::runtime_error("extract_zero_set: non-transverse at grid scale");
  }
  // n = 3: flood fill of sign regions on the lattice clipped to the disk;
  // a closed surface separates one region per component.
  int N = std::max(2, static_cast<int>(std::ceil(D.radius / resolution)));
  double h = D.radius / N;
  int side = 2 * N + 1;
  std::vector<signed char> sign(side * side * side, 0);
  auto id = [&](int i, int j, int k) {
    return ((i + N) * side + (j + N)) * side + (k + N);
  };
  for (int i = -N; i <= N; ++i)
    for (int j = -N; j <= N; ++j)
      for (int k = -N; k <= N; ++k) {
        double dx = i * h, dy = j * h, dz = k * h;
        if (dx * dx + dy * dy + dz * dz > D.radius * D.radius) continue;
        double v = f.value(Vec{D.center[0] + dx, D.center[1] + dy, D.center[2] + dz});
        sign[id(i, j, k)] = v > 0 ? 1 : -1;
      }
  std::vector<int> label(side * side * side, -1);
  int regions = 0;
  std::vector<int> stack;
  for (int i = -N; i <= N; ++i)
    for (int j = -N; j <= N; ++j)
      for (int k = -N; k <= N; ++k) {
        int s0 = id(i, j, k);
        if (sign[s0] == 0 || label[s0] >= 0) continue;
        int lab = regions++;
        stack.push_back(s0);
        label[s0] = lab;
        while (!stack.empty()) {
          int cur = stack.back();
          stack.pop_back();
          int ci = cur / (side * side) - N;
          int cj = (cur / side) % side - N;
          int ck = cur % side - N;
          const int d6[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
          for (auto& d : d6) {
            int ni = ci + d[0], nj = cj + d[1], nk = ck + d[2];
            if (std::abs(ni) > N || std::abs(nj) > N || std::abs(nk) > N) continue;
            int nid = id(ni, nj, nk);
            if (sign[nid] == sign[s0] && label[nid] < 0) {
              label[nid] = lab;
              stack.push_back(nid);
            }
          }
        }
      }
  cs.region_components = std::max(0, regions - 1);
  return cs;
}

inline ContourSet extract_zero_set(const FieldPtr& f, const Disk& D,
                                   double resolution = 0.0) {
  return extract_zero_set(*f, D, resolution);
}

namespace detail {

// Even-odd test of point p against a closed polyline.
inline bool point_inside(const Vec& p, const Polyline& pl) {
  int crossings = 0;
  std::size_t m = pl.vertices.size();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const Vec& a = pl.vertices[i];
    const Vec& b = pl.vertices[i + 1];
    if ((a[1] > p[1]) == (b[1] > p[1])) continue;
    double x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
    if (x > p[0]) ++crossings;
  }
  return crossings % 2 == 1;
}

inline std::string forest_encode(int node, const std::vector<std::vector<int>>& kids) {
  std::vector<std::string> parts;
  for (int k : kids[node]) parts.push_back(forest_encode(k, kids));
  std::sort(parts.begin(), parts.end());
  std::string s = "(";
  for (auto& p : parts) s += p;
  s += ")";
  return s;
}

}  // namespace detail

inline ZeroSetSignature signature(const ContourSet& cs, const Disk& D) {
  ZeroSetSignature sig;
  sig.n = cs.n;
  if (cs.n == 1) {
    sig.roots = cs.roots;
    sig.components = static_cast<int>(cs.roots.size());
    sig.betti = {sig.components};
    sig.total_betti = sig.components;
    sig.forest_canonical = std::string(sig.components, '.');
    return sig;
  }
  if (cs.n == 3) {
    sig.components = cs.region_components;
    sig.betti = {sig.components};
    sig.total_betti = sig.components;
    sig.forest_canonical = std::string(sig.components, '.');
    return sig;
  }
  // n = 2: keep contours meeting the disk; reject those crossing its rim.
  std::vector<const Polyline*> kept;
  for (const auto& pl : cs.contours) {
    bool any_in = false, any_out = false;
    for (const auto& v : pl.vertices) {
      double d = norm(v - D.center);
      (d <= D.radius ? any_in : any_out) = true;
    }
    if (!any_in) continue;  // lives outside the disk entirely
    if (any_out || !pl.closed)
      throw std::runtime_error("signature: zero set meets boundary");
    kept.push_back(&pl);
  }
  int m = static_cast<int>(kept.size());
  sig.components = m;
  sig.nesting_parent.assign(m, -1);
  // Parent = the containing contour that is itself contained the most.
  std::vector<std::vector<bool>> contains(m, std::vector<bool>(m, false));
  std::vector<int> depth(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && detail::point_inside(kept[j]->vertices.front(), *kept[i])) {
        contains[i][j] = true;
        ++depth[j];
      }
  for (int j = 0; j < m; ++j) {
    int best = -1;
    for (int i = 0; i < m; ++i)
      if (contains[i][j] && (best == -1 || depth[i] > depth[best])) best = i;
    sig.nesting_parent[j] = best;
  }
  std::vector<std::vector<int>> kids(m);
  std::vector<int> roots;
  for (int j = 0; j < m; ++j) {
    if (sig.nesting_parent[j] < 0) roots.push_back(j);
    else kids[sig.nesting_parent[j]].push_back(j);
  }
  std::vector<std::string> parts;
  for (int r : roots) parts.push_back(detail::forest_encode(r, kids));
  std::sort(parts.begin(), parts.end());
  for (auto& p : parts) sig.forest_canonical += p;
  sig.betti = {m, m};
  sig.total_betti = 2 * m;
  return sig;
}

inline ZeroSetSignature zero_set_signature(const ScalarField& f, const Disk& D,
                                           double resolution = 0.0) {
  return signature(extract_zero_set(f, D, resolution), D);
}

inline bool isotopy_signature_equal(const ZeroSetSignature& a,
                                    const ZeroSetSignature& b) {
  if (a.n != b.n) throw std::invalid_argument("isotopy_signature_equal: dimension mismatch");
  return a == b;
}

// Total signed turning of a closed polyline; +-2pi for simple curves.
inline double signed_turning(const Polyline& pl) {
  if (!pl.closed || pl.vertices.size() < 4) return 0.0;
  double total = 0.0;
  std::size_t m = pl.vertices.size() - 1;  // last repeats first
  for (std::size_t i = 0; i < m; ++i) {
    const Vec& a = pl.vertices[i];
    const Vec& b = pl.vertices[(i + 1) % m];
    const Vec& c = pl.vertices[(i + 2) % m];
    double ux = b[0] - a[0], uy = b[1] - a[1];
    double vx = c[0] - b[0], vy = c[1] - b[1];
    total += std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
  }
  return total;
}

struct StabilityReport {
  int trials = 0;
  int failures = 0;
  std::vector<int> failed_trials;
  double magnitude = 0.0;
  double delta = 0.0;
};

// Random-bump invariance of the zero-set signature at sub-delta magnitude.
inline StabilityReport perturbation_stability_test(const FieldPtr& f,
                                                   const Disk& D,
                                                   SingularityKind kind,
                                                   double magnitude, int trials,
                                                   std::uint64_t seed = 1,
                                                   double resolution = 0.0) {
  if (resolution <= 0.0) resolution = default_resolution(D);
  const int r = jet_order_of(kind);
  ConditionReport rep = (kind == SingularityKind::kHypersurface)
                            ? delta_hypersurface(*f, D, resolution)
                            : delta_critical(*f, D, resolution);
  if (!(magnitude < rep.delta))
    throw std::invalid_argument(
        "perturbation_stability_test: magnitude must be < delta");
  StabilityReport out;
  out.trials = trials;
  out.magnitude = magnitude;
  out.delta = rep.delta;
  ZeroSetSignature base = zero_set_signature(*f, D, resolution);
  if (magnitude == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Norm rescaling on a coarse grid is fine: the exact constant does not
  // matter below delta, only the order of magnitude.
  double norm_res = std::max(resolution, D.radius / 64.0);
  for (int t = 0; t < trials; ++t) {
    Vec c{};
    for (;;) {
      for (int i = 0; i < D.n; ++i)
        c[i] = D.center[i] + D.radius * (2.0 * unit(rng) - 1.0);
      if (norm(c - D.center) <= D.radius) break;
    }
    double w = (0.1 + 0.4 * unit(rng)) * D.radius;
    double s = unit(rng) < 0.5 ? -1.0 : 1.0;
    auto bump = std::make_shared<GaussianBumpField>(s, c, w, D.n);
    double bn = c_norm(*bump, D, r + 1, norm_res).value;
    auto scaled = std::make_shared<ScaledField>(magnitude / bn, bump);
    auto g = std::make_shared<SumField>(f, scaled);
    ZeroSetSignature got = zero_set_signature(*g, D, resolution);
    if (!(got == base)) {
      ++out.failures;
      out.failed_trials.push_back(t);
    }
  }
  return out;
}

// A single bump at the discriminant-distance argmin, pushed across the zero
// level; used to show instability above delta.
inline FieldPtr targeted_perturbation(const FieldPtr& f, const Disk& D,
                                      SingularityKind kind, double magnitude,
                                      double resolution = 0.0) {
  if (resolution <= 0.0) resolution = default_resolution(D);
  const int r = jet_order_of(kind);
  ConditionReport rep = (kind == SingularityKind::kHypersurface)
                            ? delta_hypersurface(*f, D, resolution)
                            : delta_critical(*f, D, resolution);
  double s = f->value(rep.argmin) < 0 ? 1.0 : -1.0;
  auto bump = std::make_shared<GaussianBumpField>(s, rep.argmin,
                                                  0.5 * D.radius, D.n);
  double bn = c_norm(*bump, D, r + 1, std::max(resolution, D.radius / 64.0)).value;
  auto scaled = std::make_shared<ScaledField>(magnitude / bn, bump);
  return std::make_shared<SumField>(f, scaled);
}

inline void write_svg(const ContourSet& cs, const Disk& D,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_svg: cannot open " + path);
  double R = D.radius;
  double scale = 400.0 / (2.0 * R);
  auto X = [&](double x) { return (x - D.center[0] + R) * scale; };
  auto Y = [&](double y) { return (D.center[1] + R - y) * scale; };
  char buf[128];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" "
         "viewBox=\"0 0 400 400\">\n";
  std::snprintf(buf, sizeof(buf),
                "  <circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"none\" "
                "stroke=\"#bbb\"/>\n",
                X(D.center[0]), Y(D.center[1]), R * scale);
  out << buf;
  for (const auto& pl : cs.contours) {
    out << "  <path fill=\"none\" stroke=\"#c22\" stroke-width=\"1\" d=\"";
    for (std::size_t i = 0; i < pl.vertices.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%c%.3f %.3f", i == 0 ? 'M' : 'L',
                    X(pl.vertices[i][0]), Y(pl.vertices[i][1]));
      out << buf;
    }
    if (pl.closed) out << "Z";
    out << "\"/>\n";
  }
  for (double rt : cs.roots) {
    std::snprintf(buf, sizeof(buf),
                  "  <circle cx=\"%.3f\" cy=\"200\" r=\"3\" fill=\"#c22\"/>\n",
                  X(rt));
    out << buf;
  }
  out << "</svg>\n";
}

inline void write_csv(const ContourSet& cs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  char buf[128];
  if (cs.n == 1) {
    out << "root\n";
    for (double r : cs.roots) {
      std::snprintf(buf, sizeof(buf), "%.17g\n", r);
      out << buf;
    }
    return;
  }
  out << "contour,x,y\n";
  for (std::size_t c = 0; c < cs.contours.size(); ++c)
    for (const auto& v : cs.contours[c].vertices) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", c, v[0], v[1]);
      out << buf;
    }
}

}  // namespace condeg
