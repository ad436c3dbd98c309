// Closed-form converse bounds: the second-order Fano-type inequality, its
// optimal smoothing time, per-rate second-order bounds for the degraded
// broadcast channel, the classical Fano comparison, and the exponential
// strong-converse exponent from the Lagrangian envelope.
//
// Everything is evaluated in nats; the CLI converts for display.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cqbl/common.hpp"
#include "cqbl/region.hpp"

namespace cqbl {

/// Default Lagrange multiplier grid: {0} plus a log sweep.
inline std::vector<double> default_mu_grid() {
  std::vector<double> grid{0.0};
  for (double m : logspace(1e-3, 1e3, 61)) grid.push_back(m);
  return grid;
}

/// Convex upper envelope data from the Lagrangian sweep. value_at(mu) is the
/// pointwise maximum over all witnesses, hence convex and non-decreasing.
struct Envelope {
  std::vector<LagrangePoint> points;
  double max_i_xb_u = 0.0;  // sup I(X;B|U) over witnesses
  double max_i_uc = 0.0;    // sup I(U;C) over witnesses
  bool certified_lower = false;

  double value_at(double mu) const {
    double best = 0.0;
    for (const auto& p : points) best = std::max(best, p.i_xb_u + mu * p.i_uc);
    return best;
  }
};

inline Envelope make_envelope(const RegionAnalyzer& analyzer,
                              const std::vector<double>& mu_grid = default_mu_grid()) {
  Envelope env;
  env.points = analyzer.lagrangian_boundary(mu_grid);
  env.certified_lower = analyzer.certified();
  for (const auto& p : env.points) {
    env.max_i_xb_u = std::max(env.max_i_xb_u, p.i_xb_u);
    env.max_i_uc = std::max(env.max_i_uc, p.i_uc);
  }
  env.max_i_xb_u = std::max(env.max_i_xb_u, analyzer.max_i_xb_u());
  env.max_i_uc = std::max(env.max_i_uc, analyzer.max_i_uc());
  return env;
}

/// ln|M| <= I(M;B^n) + 2 sqrt(n d ln(1/(1-eps))) + ln(1/(1-eps)); returns the
/// right-hand side given the mutual information (nats).
inline double fano_bound(long n, double eps, int d, double mutual_info_nats) {
  if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("fano_bound: eps outside (0,1)");
  if (n < 1 || d < 1) throw std::invalid_argument("fano_bound: need n >= 1, d >= 1");
  const double L = -std::log1p(-eps);  // ln(1/(1-eps))
  return mutual_info_nats + 2.0 * std::sqrt(static_cast<double>(n) * d * L) + L;
}

/// Smoothing time t* = sqrt(ln(1/(1-eps)) / (d n)) that optimizes the
/// pre-optimized bound; substituting it reproduces fano_bound exactly.
inline double optimal_t(double eps, int d, long n) {
  if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("optimal_t: eps outside (0,1)");
  return std::sqrt(-std::log1p(-eps) / (static_cast<double>(d) * n));
}

/// The correction terms d n t + (1 + 1/t) ln(1/(1-eps)) at arbitrary t > 0;
/// minimized at optimal_t.
inline double fano_correction_at(double t, double eps, int d, long n) {
  if (t <= 0.0) throw std::invalid_argument("fano_correction_at: t must be > 0");
  const double L = -std::log1p(-eps);
  return static_cast<double>(d) * n * t + (1.0 + 1.0 / t) * L;
}

/// Classical Fano route: ln|M| <= (I + h(eps)) / (1 - eps).
inline double classical_fano(double eps, long m_size, double mutual_info_nats) {
  if (eps < 0.0 || eps >= 1.0)
    throw std::invalid_argument("classical_fano: eps outside [0,1)");
  if (m_size < 1) throw std::invalid_argument("classical_fano: m_size must be >= 1");
  return (mutual_info_nats + binary_entropy(eps)) / (1.0 - eps);
}

struct ExponentParams {
  double mu_star = 0.0;
  double gamma = 0.0;  // rate-pair surplus rb + mu* rc - v(mu*)
  double eta = 0.0;    // gamma / (1 + mu*)
  double f = 0.0;      // strong-converse exponent
};

/// f(eta) = (sqrt((sqrt(d_B)+sqrt(d_C))^2 + eta) - sqrt(d_B) - sqrt(d_C))^2.
inline double exponent_from_eta(double eta, int d_b, int d_c) {
  const double root_sum = std::sqrt(static_cast<double>(d_b)) +
                          std::sqrt(static_cast<double>(d_c));
  const double shifted = std::sqrt(root_sum * root_sum + eta);
  return (shifted - root_sum) * (shifted - root_sum);
}

/// Maximizes gamma(mu) = rb + mu rc - v(mu) over the envelope's mu grid with
/// golden-section refinement. Returns nullopt when the rate pair is inside
/// the region (gamma <= 0).
inline std::optional<ExponentParams> strong_converse_exponent(double rb, double rc, int d_b,
                                                              int d_c, const Envelope& env) {
  if (env.points.empty())
    throw std::invalid_argument("strong_converse_exponent: empty envelope");
  double best_mu = 0.0, best_gamma = -std::numeric_limits<double>::infinity();
  for (const auto& p : env.points) {
    const double g = rb + p.mu * rc - env.value_at(p.mu);
    if (g > best_gamma) {
      best_gamma = g;
      best_mu = p.mu;
    }
  }
  // local golden-section refinement around the best grid multiplier
  {
    double lo = best_mu, hi = best_mu;
    for (const auto& p : env.points) {
      if (p.mu < best_mu) lo = std::max(lo == best_mu ? 0.0 : lo, p.mu);
      if (p.mu > best_mu && (hi == best_mu || p.mu < hi)) hi = p.mu;
    }
    if (hi == best_mu) hi = best_mu * 2.0 + 1.0;
    if (lo == best_mu) lo = std::max(0.0, best_mu * 0.5);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    auto g_of = [&](double mu) { return rb + mu * rc - env.value_at(mu); };
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double g1 = g_of(x1), g2 = g_of(x2);
    for (int it = 0; it < 80; ++it) {
      if (g1 < g2) {
        a = x1;
        x1 = x2;
        g1 = g2;
        x2 = a + phi * (b - a);
        g2 = g_of(x2);
      } else {
        b = x2;
        x2 = x1;
        g2 = g1;
        x1 = b - phi * (b - a);
        g1 = g_of(x1);
      }
    }
    const double mu_ref = 0.5 * (a + b);
    const double g_ref = g_of(mu_ref);
    if (g_ref > best_gamma) {
      best_gamma = g_ref;
      best_mu = mu_ref;
    }
  }
  if (best_gamma <= 0.0) return std::nullopt;  // inside (or on) the region
  ExponentParams out;
  out.mu_star = best_mu;
  out.gamma = best_gamma;
  out.eta = best_gamma / (1.0 + best_mu);
  out.f = exponent_from_eta(out.eta, d_b, d_c);
  return out;
}

/// Evaluated second-order bounds plus optional exponent parameters.
struct BoundReport {
  long n = 0;
  double eps = 0.0;
  int d_b = 0, d_c = 0;
  double single_letter_i_xb_u = 0.0;  // sup I(X;B|U) from the envelope
  double single_letter_i_uc = 0.0;    // sup I(U;C) from the envelope
  double rb_bound = 0.0, rc_bound = 0.0;  // nats per channel use
  bool certified_lower = false;           // provenance of the envelope values
  std::optional<double> rate_rb, rate_rc;  // the queried rate pair, if any
  std::optional<ExponentParams> exponent;  // set when the pair lies outside
};

/// Theorem-2 style per-rate bounds: single-letter value plus the second-order
/// correction 2 sqrt((d/n) L) + L/n with L = ln(1/(1-eps)).
inline BoundReport second_order_bounds(long n, double eps, const CqBroadcastChannel& ch,
                                       const Envelope& env) {
  if (eps <= 0.0 || eps >= 1.0)
    throw std::invalid_argument("second_order_bounds: eps outside (0,1)");
  BoundReport rep;
  rep.n = n;
  rep.eps = eps;
  rep.d_b = ch.d_b();
  rep.d_c = ch.d_c();
  rep.single_letter_i_xb_u = env.max_i_xb_u;
  rep.single_letter_i_uc = env.max_i_uc;
  rep.certified_lower = env.certified_lower;
  const double nd = static_cast<double>(n);
  rep.rb_bound = fano_bound(n, eps, ch.d_b(), nd * env.max_i_xb_u) / nd;
  rep.rc_bound = fano_bound(n, eps, ch.d_c(), nd * env.max_i_uc) / nd;
  return rep;
}

}  // namespace cqbl
