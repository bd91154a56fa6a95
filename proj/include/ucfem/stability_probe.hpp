/* Copyright 2026 The ucfem Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#ifndef UCFEM_STABILITY_PROBE_HPP
#define UCFEM_STABILITY_PROBE_HPP

#include "ucfem/common.hpp"
#include "ucfem/experiments.hpp"
#include "ucfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace ucfem {

/// Premises of the log-convexity interpolation inequality.
struct LogConvexityInstance {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double p = 1.0;
  double q = 1.0;
  double lambda0 = 0.0;

  /// Checks c <= b and c <= e^{p l} a + e^{-q l} b at the given lambdas.
  bool premises_hold(const std::vector<double>& lambdas, double rel_tol = 1e-12) const {
    if (c > b * (1.0 + rel_tol)) return false;
    return std::all_of(lambdas.begin(), lambdas.end(), [&](double l) {
      const double rhs = std::exp(p * l) * a + std::exp(-q * l) * b;
      return l <= lambda0 || c <= rhs * (1.0 + rel_tol);
    });
  }
};

struct LogConvexityBound {
  double kappa = 0.0;
  double constant = 0.0;
  double bound = 0.0;
};

/// kappa = q/(p+q), C = r^{p/(p+q)} + r^{-q/(p+q)} with r = q/p, and
/// bound = C e^{q lambda0} a^kappa b^{1-kappa}. Any c satisfying the
/// premises obeys c <= bound.
inline LogConvexityBound log_convexity_bound(const LogConvexityInstance& in) {
  if (!(in.p > 0.0) || !(in.q > 0.0)) {
    throw ConfigError("log_convexity_bound: p and q must be positive");
  }
  if (in.a < 0.0 || in.b < 0.0 || in.lambda0 < 0.0) {
    throw ConfigError("log_convexity_bound: a, b and lambda0 must be nonnegative");
  }
  LogConvexityBound out;
  const double s = in.p + in.q;
  const double r = in.q / in.p;
  out.kappa = in.q / s;
  out.constant = std::pow(r, in.p / s) + std::pow(r, -in.q / s);
  out.bound = out.constant * std::exp(in.q * in.lambda0) * std::pow(in.a, out.kappa) *
              std::pow(in.b, 1.0 - out.kappa);
  return out;
}

struct LemmaAuditReport {
  int samples = 0;
  int violations = 0;
  double worst_ratio = 0.0;  // max c / bound
};

/// Randomized audit: a, b in (0, 10], p, q in (0, 5], lambda0 in [0, 3], and
/// c the largest value the premises allow on a lambda grid over
/// (lambda0, lambda0 + 40] augmented with the analytic minimizer.
inline LemmaAuditReport audit_log_convexity(int samples, std::uint64_t seed, int grid = 400) {
  std::mt19937_64 gen(seed);
  const auto unit = [&] { return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53; };  // (0, 1]
  LemmaAuditReport rep;
  rep.samples = samples;
  for (int s = 0; s < samples; ++s) {
    LogConvexityInstance in;
    in.a = 10.0 * unit();
    in.b = 10.0 * unit();
    in.p = 5.0 * unit();
    in.q = 5.0 * unit();
    in.lambda0 = 3.0 * (1.0 - unit());
    const auto f = [&](double l) { return std::exp(in.p * l) * in.a + std::exp(-in.q * l) * in.b; };
    double c = in.b;
    for (int k = 1; k <= grid; ++k) c = std::min(c, f(in.lambda0 + 40.0 * k / grid));
    // The grid alone overestimates inf f when the minimizer falls between nodes.
    const double l_star = std::log(in.q * in.b / (in.p * in.a)) / (in.p + in.q);
    if (l_star > in.lambda0 && l_star <= in.lambda0 + 40.0) c = std::min(c, f(l_star));
    in.c = c;
    const auto res = log_convexity_bound(in);
    const double ratio = in.c / res.bound;
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (in.c > res.bound * (1.0 + 1e-12)) ++rep.violations;
  }
  return rep;
}

/// Hoelder exponent for concentric radii r1 < r2 < r3:
/// log(r3/r2) / (C3 log(r2/r1) + log(r3/r2)).
inline double kappa_formula(double r1, double r2, double r3, double c3) {
  if (!(r1 > 0.0 && r1 < r2 && r2 < r3)) {
    throw ConfigError("kappa_formula: radii must satisfy 0 < r1 < r2 < r3");
  }
  if (!(c3 > 0.0)) throw ConfigError("kappa_formula: C3 must be positive");
  const double outer = std::log(r3 / r2);
  return outer / (c3 * std::log(r2 / r1) + outer);
}

enum class BallNorm { l2, h1 };

struct ThreeBallConfig {
  Point center{0.5, 0.5};
  double r1 = 0.1;
  double r2 = 0.2;
  double r3 = 0.4;
  BallNorm norm = BallNorm::l2;
  double kappa = 0.5;

  void validate() const {
    if (!(r1 > 0.0 && r1 < r2 && r2 < r3)) {
      throw ConfigError("ThreeBallConfig: radii must satisfy 0 < r1 < r2 < r3");
    }
    const double dist = std::min({center.x(), 1.0 - center.x(), center.y(), 1.0 - center.y()});
    if (r3 > dist + 1e-14) throw ConfigError("ThreeBallConfig: outer ball leaves the unit square");
    if (!(kappa > 0.0 && kappa < 1.0)) throw ConfigError("ThreeBallConfig: kappa must be in (0, 1)");
  }
};

/// Polar quadrature on a disc: Gauss-Legendre in the radius, uniform in the
/// angle (spectrally accurate for smooth periodic integrands).
struct PolarResolution {
  int radial = 32;
  int angular = 64;
};

/// L2 or H1 norm of u over the disc B(center, radius).
inline double ball_norm(const SmoothFunction& u, const Point& center, double radius,
                        BallNorm kind, const PolarResolution& res = {}) {
  const auto [rx, rw] = gauss_legendre(res.radial);
  const double dtheta = 2.0 * std::numbers::pi / res.angular;
  double sum = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double r = radius * rx[i];
    const double wr = rw[i] * radius * r * dtheta;
    for (int k = 0; k < res.angular; ++k) {
      const double th = (k + 0.5) * dtheta;
      const Point x = center + r * Point(std::cos(th), std::sin(th));
      const double v = u.value(x);
      double integrand = v * v;
      if (kind == BallNorm::h1) integrand += u.gradient(x).squaredNorm();
      sum += wr * integrand;
    }
  }
  return std::sqrt(sum);
}

/// ||u||_{B2} / (||u||_{B1}^kappa ||u||_{B3}^{1-kappa}).
inline double three_ball_ratio(const SmoothFunction& u, const ThreeBallConfig& cfg,
                               const PolarResolution& res = {}) {
  cfg.validate();
  const double n1 = ball_norm(u, cfg.center, cfg.r1, cfg.norm, res);
  const double n2 = ball_norm(u, cfg.center, cfg.r2, cfg.norm, res);
  const double n3 = ball_norm(u, cfg.center, cfg.r3, cfg.norm, res);
  if (!(n1 > 0.0) || !(n3 > 0.0)) {
    throw NumericalError("three_ball_ratio: degenerate, u vanishes on the inner ball");
  }
  return n2 / (std::pow(n1, cfg.kappa) * std::pow(n3, 1.0 - cfg.kappa));
}

/// Largest pointwise |-mu Lap(u) + beta . grad(u)| over random points in the
/// unit square, for spot-checking that u is a homogeneous solution.
inline double homogeneous_residual(const ExactSolution& u, double mu, const VectorField& beta,
                                   int points, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const Point x(static_cast<double>(gen() >> 11) * 0x1.0p-53,
                  static_cast<double>(gen() >> 11) * 0x1.0p-53);
    worst = std::max(worst, std::abs(-mu * u.laplacian(x) + beta(x).dot(u.gradient(x))));
  }
  return worst;
}

/// u_k = Re((x - x0) + i (y - y0))^k: harmonic, so -Lap u + 0 . grad u = 0.
inline ExactSolution harmonic_polynomial(int k, const Point& center) {
  if (k < 1) throw ConfigError("harmonic_polynomial: degree must be >= 1");
  const auto power = [k, center](const Point& p) {
    const std::complex<double> w(p.x() - center.x(), p.y() - center.y());
    return std::pow(w, k - 1);
  };
  return {
      [k, center](const Point& p) {
        const std::complex<double> w(p.x() - center.x(), p.y() - center.y());
        return std::pow(w, k).real();
      },
      [k, power](const Point& p) {
        // d/dx Re(w^k) = Re(k w^{k-1}), d/dy Re(w^k) = -Im(k w^{k-1})
        const std::complex<double> d = static_cast<double>(k) * power(p);
        return Point(d.real(), -d.imag());
      },
      [](const Point&) { return 0.0; },
  };
}

/// Smallest C3 for which the first family member has ratio <= target, by
/// bisection (the ratio decreases as C3 grows).
inline double calibrate_c3(const SmoothFunction& u, ThreeBallConfig cfg, double target = 1.0,
                           const PolarResolution& res = {}) {
  double lo = 1e-6;
  double hi = 1e6;
  const auto ratio_at = [&](double c3) {
    cfg.kappa = kappa_formula(cfg.r1, cfg.r2, cfg.r3, c3);
    return three_ball_ratio(u, cfg, res);
  };
  if (ratio_at(hi) > target) {
    throw NumericalError("calibrate_c3: target ratio unreachable");
  }
  if (ratio_at(lo) <= target) return lo;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    (ratio_at(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

struct FamilySweep {
  double c3 = 0.0;
  double kappa = 0.0;
  double calibrated_constant = 0.0;  // ratio of the first member
  std::vector<int> degrees;
  std::vector<double> ratios;
  double max_normalized = 0.0;  // max ratio / calibrated_constant
};

/// Harmonic-family sweep k = 1..max_degree: C3 is calibrated on k = 1 so its
/// ratio equals one, then every member's ratio is recorded.
inline FamilySweep harmonic_family_sweep(int max_degree, ThreeBallConfig cfg,
                                         const PolarResolution& res = {}) {
  FamilySweep sweep;
  const auto first = harmonic_polynomial(1, cfg.center).smooth();
  sweep.c3 = calibrate_c3(first, cfg, 1.0, res);
  cfg.kappa = kappa_formula(cfg.r1, cfg.r2, cfg.r3, sweep.c3);
  sweep.kappa = cfg.kappa;
  sweep.calibrated_constant = three_ball_ratio(first, cfg, res);
  for (int k = 1; k <= max_degree; ++k) {
    const double r = three_ball_ratio(harmonic_polynomial(k, cfg.center).smooth(), cfg, res);
    sweep.degrees.push_back(k);
    sweep.ratios.push_back(r);
    sweep.max_normalized = std::max(sweep.max_normalized, r / sweep.calibrated_constant);
  }
  return sweep;
}

struct ProbeTrace {
  std::vector<int> cells;
  std::vector<double> ratios;
  double exact_ratio = 0.0;
};

/// Three-ball ratio of the computed u_h along the case's mesh ladder, next to
/// the ratio of the exact solution.
inline ProbeTrace probe_fem_solution(const CaseDefinition& c, const ThreeBallConfig& cfg,
                                     const PolarResolution& res = {}) {
  cfg.validate();
  ProbeTrace trace;
  trace.exact_ratio = three_ball_ratio(c.exact.smooth(), cfg, res);
  for (int n : c.ladder) {
    const MeshRun run = run_mesh(c, n);
    trace.cells.push_back(n);
    trace.ratios.push_back(three_ball_ratio(run.solution.u.as_function(), cfg, res));
  }
  return trace;
}

}  // namespace ucfem

#endif  // UCFEM_STABILITY_PROBE_HPP
