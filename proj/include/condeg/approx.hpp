#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "condeg/chebfit.hpp"
#include "condeg/condition.hpp"
#include "condeg/field.hpp"
#include "condeg/norms.hpp"
#include "condeg/polynomial.hpp"

namespace condeg {

// C^ell grid norm of f - p over the disk.
inline NormEstimate c_error(const FieldPtr& f, const Polynomial& p,
                            const Disk& D, int ell, double resolution) {
  auto diff = std::make_shared<DifferenceField>(f, make_field(p));
  return c_norm(*diff, D, ell, resolution);
}

struct ApproxCertificate {
  int degree_used = 0;
  double measured_error = 0.0;
  double delta_used = 0.0;
  double margin = 0.0;          // measured_error / delta_used
  double degree_bound_rhs = 0.0; // max{r+1, ||f||_{C^{r+2}} / delta}
};

struct ApproxResult {
  Polynomial p;
  ApproxCertificate cert;
};

// Raised when the degree budget is exhausted; carries the (degree, error)
// trace of every attempt.
struct ApproxBudgetError : std::runtime_error {
  ApproxBudgetError(std::string msg, std::vector<std::pair<int, double>> t)
      : std::runtime_error(std::move(msg)), trace(std::move(t)) {}
  std::vector<std::pair<int, double>> trace;
};

inline long long milnor_thom_bound(int d, int n) {
  if (d < 1) throw std::invalid_argument("milnor_thom_bound: degree must be >= 1");
  long long b = d;
  for (int i = 1; i < n; ++i) b *= (2LL * d - 1);
  return b;
}

// Degree-escalation loop: smallest degree whose C^{r+1} fit error drops
// below safety * delta.
inline ApproxResult approximate_with_certificate(
    const FieldPtr& f, const Disk& D, SingularityKind kind,
    double safety = 0.5, int d_max = 32, double resolution = 0.0) {
  if (!(safety > 0.0 && safety < 1.0))
    throw std::invalid_argument("approximate_with_certificate: safety must be in (0,1)");
  const int r = jet_order_of(kind);
  if (d_max < r + 1)
    throw std::invalid_argument("approximate_with_certificate: d_max < r+1");
  if (resolution <= 0.0) resolution = default_resolution(D);

  ConditionReport rep = (kind == SingularityKind::kHypersurface)
                            ? delta_hypersurface(*f, D, resolution)
                            : delta_critical(*f, D, resolution);
  if (!(rep.delta > 0.0))
    throw std::invalid_argument(
        "approximate_with_certificate: delta = 0 (input degenerate)");

  double norm_r2 = c_norm(*f, D, r + 2, resolution).value;

  std::vector<int> schedule;
  for (int d = r + 1; d <= std::min(16, d_max); ++d) schedule.push_back(d);
  for (int d = 20; d <= d_max; d += 4) schedule.push_back(d);

  std::vector<std::pair<int, double>> trace;
  for (int d : schedule) {
    Polynomial p(D.n, 0);
    try {
      p = fit_polynomial(*f, D, d);
    } catch (const FitError&) {
      trace.emplace_back(d, std::numeric_limits<double>::infinity());
      continue;
    }
    double err = c_error(f, p, D, r + 1, resolution).value;
    trace.emplace_back(d, err);
    if (err < safety * rep.delta) {
      ApproxCertificate cert;
      cert.degree_used = std::max(p.degree(), 0);
      cert.measured_error = err;
      cert.delta_used = rep.delta;
      cert.margin = err / rep.delta;
      cert.degree_bound_rhs = std::max(double(r + 1), norm_r2 / rep.delta);
      return ApproxResult{std::move(p), cert};
    }
  }
  std::string msg = "approximate_with_certificate: degree budget " +
                    std::to_string(d_max) + " exhausted; best error " +
                    std::to_string([&] {
                      double best = std::numeric_limits<double>::infinity();
                      for (auto& t : trace) best = std::min(best, t.second);
                      return best;
                    }());
  throw ApproxBudgetError(std::move(msg), std::move(trace));
}

}  // namespace condeg
