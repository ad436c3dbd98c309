// Entropic capacity-region boundary for a c-q degraded broadcast channel:
// F(t) = sup { I(X;B|U) : I(U;C) >= t } over block states with auxiliary U,
// its Lagrangian dual sweep, and the concavity audit.
//
// Witness search runs over classical (diagonal) U on a simplex grid with
// penalty-based local refinement; quantum U is an opt-in hill climb. Returned
// values are certified lower bounds (exact re-evaluations of the witness);
// global optimality of the sup is never claimed.
#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cqbl/channel.hpp"
#include "cqbl/common.hpp"
#include "cqbl/entropic.hpp"
#include "cqbl/random.hpp"

namespace cqbl {

struct RegionOptions {
  int grid_resolution = 64;     // simplex grid steps per coordinate (|X| = 2)
  long grid_budget = 500000;    // cap on grid points; resolution shrinks to fit
  int penalty_count = 8;        // log-spaced penalty weights for the constraint
  double penalty_min = 0.05, penalty_max = 200.0;
  double feas_tol = 1e-6;       // witness must have I(U;C) >= t - feas_tol
  bool quantum_u = false;       // opt-in quantum auxiliary search
  int quantum_starts = 6;
  int quantum_iters = 300;
  std::uint64_t seed = 17;
};

struct RegionPoint {
  double t = 0.0;
  double f_value = 0.0;
  double i_xb_u = 0.0, i_uc = 0.0;  // exact objectives of the witness
  bool certified_lower = false;     // exhaustive classical grid was used
  bool feasible = true;
  std::optional<JointState> witness;
};

struct LagrangePoint {
  double mu = 0.0;
  double value = 0.0;  // best I(X;B|U) + mu I(U;C) found
  double i_xb_u = 0.0, i_uc = 0.0;
  std::optional<JointState> witness;
};

struct ConcavityReport {
  bool pass = true;
  int checked = 0;
  double worst_deficit = 0.0;  // largest violation of midpoint concavity
  std::vector<int> violation_indices;
};

/// Midpoint-concavity check of consecutive (t, F) triples with an optimizer
/// noise allowance.
inline ConcavityReport concavity_audit(const std::vector<std::pair<double, double>>& pts,
                                       double tol_opt = tol::optimizer) {
  ConcavityReport rep;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const auto [t0, f0] = pts[i - 1];
    const auto [t1, f1] = pts[i];
    const auto [t2, f2] = pts[i + 1];
    if (t2 <= t0) throw std::invalid_argument("concavity_audit: t values must increase");
    const double lam = (t2 - t1) / (t2 - t0);
    const double chord = lam * f0 + (1.0 - lam) * f2;
    ++rep.checked;
    const double deficit = chord - f1;  // positive deficit = convex bump
    if (deficit > tol_opt) {
      rep.pass = false;
      rep.violation_indices.push_back(static_cast<int>(i));
    }
    rep.worst_deficit = std::max(rep.worst_deficit, deficit);
  }
  return rep;
}

namespace detail {

// classical witness: p_x plus a column-stochastic matrix u_given_x (d_u x nx)
struct ClassicalParams {
  RVector p_x;
  RMatrix u_given_x;
};

// flat layout: [p_x | columns of u_given_x]
inline ClassicalParams unflatten(const RVector& theta, int nx, int du) {
  ClassicalParams c;
  c.p_x = theta.segment(0, nx);
  c.u_given_x.resize(du, nx);
  for (int x = 0; x < nx; ++x) c.u_given_x.col(x) = theta.segment(nx + x * du, du);
  return c;
}

inline RVector flatten(const ClassicalParams& c) {
  const int nx = static_cast<int>(c.p_x.size());
  const int du = static_cast<int>(c.u_given_x.rows());
  RVector theta(nx + nx * du);
  theta.segment(0, nx) = c.p_x;
  for (int x = 0; x < nx; ++x) theta.segment(nx + x * du, du) = c.u_given_x.col(x);
  return theta;
}

inline void project_blocks(RVector& theta, int nx, int du) {
  RVector block = theta.segment(0, nx);
  project_simplex(block);
  theta.segment(0, nx) = block;
  for (int x = 0; x < nx; ++x) {
    RVector col = theta.segment(nx + x * du, du);
    project_simplex(col);
    theta.segment(nx + x * du, du) = col;
  }
}

// Cached channel data for fast classical evaluations.
struct ChannelTables {
  std::vector<Matrix> b_states, c_states;
  std::vector<double> s_b, s_c;  // per-symbol entropies
  int nx, d_b, d_c;

  explicit ChannelTables(const CqBroadcastChannel& ch)
      : nx(ch.input_count()), d_b(ch.d_b()), d_c(ch.d_c()) {
    for (int x = 0; x < nx; ++x) {
      b_states.push_back(ch.b_state(x));
      c_states.push_back(ch.c_state(x));
      s_b.push_back(vn_entropy_raw(b_states.back()));
      s_c.push_back(vn_entropy_raw(c_states.back()));
    }
  }

  // I(X;B|U) and I(U;C) for a classical (diagonal) auxiliary
  RegionObjectives evaluate(const ClassicalParams& c) const {
    const int du = static_cast<int>(c.u_given_x.rows());
    double i_xbu = 0.0;
    double s_c_avg = 0.0;
    Matrix c_bar = Matrix::Zero(d_c, d_c);
    double s_b_letters = 0.0;
    for (int x = 0; x < nx; ++x) {
      s_b_letters += c.p_x[x] * s_b[x];
      c_bar += c.p_x[x] * c_states[x];
    }
    for (int u = 0; u < du; ++u) {
      double pu = 0.0;
      Matrix rb = Matrix::Zero(d_b, d_b);
      Matrix rc = Matrix::Zero(d_c, d_c);
      for (int x = 0; x < nx; ++x) {
        const double w = c.p_x[x] * c.u_given_x(u, x);
        if (w <= 0.0) continue;
        pu += w;
        rb += w * b_states[x];
        rc += w * c_states[x];
      }
      if (pu <= 1e-15) continue;
      i_xbu += pu * vn_entropy_raw(Matrix(rb / pu));
      s_c_avg += pu * vn_entropy_raw(Matrix(rc / pu));
    }
    i_xbu -= s_b_letters;
    const double i_uc = vn_entropy_raw(c_bar) - s_c_avg;
    return {i_xbu, i_uc};
  }
};

}  // namespace detail

/// Region search engine. Builds one classical-U grid sweep per channel and
/// answers F(t) / Lagrangian queries from it with local refinement.
class RegionAnalyzer {
 public:
  explicit RegionAnalyzer(const CqBroadcastChannel& ch, RegionOptions opts = {})
      : ch_(ch), opts_(opts), tables_(ch) {
    nx_ = ch.input_count();
    du_ = nx_;  // achievability form: d_U = |X| with diagonal rho_U^x
    resolution_ = effective_resolution();
    sweep();
    refine_extremes();
  }

  const RegionOptions& options() const { return opts_; }
  int grid_resolution_used() const { return resolution_; }
  bool certified() const { return resolution_ >= 64 && !opts_.quantum_u; }

  /// Largest I(U;C) reachable (U = copy of X at the best input distribution).
  double max_i_uc() const { return max_i_uc_; }
  /// Largest I(X;B|U) reachable (trivial conditioning at the best input).
  double max_i_xb_u() const { return max_i_xb_u_; }

  RegionPoint f_of_t(double t) const {
    RegionPoint out;
    out.t = t;
    out.certified_lower = certified();
    if (t > max_i_uc_ + opts_.feas_tol) {
      out.feasible = false;
      return out;
    }
    // best feasible grid point
    double best_f = -std::numeric_limits<double>::infinity();
    RVector best_theta;
    for (std::size_t i = 0; i < grid_ixbu_.size(); ++i) {
      if (grid_iuc_[i] >= t - 1e-12 && grid_ixbu_[i] > best_f) {
        best_f = grid_ixbu_[i];
        best_theta = grid_theta(i);
      }
    }
    if (best_theta.size() == 0) best_theta = copy_theta_;  // t close to the max

    // penalty sweep with pattern-search refinement
    auto weights = logspace(opts_.penalty_min, opts_.penalty_max, opts_.penalty_count);
    RVector best_feas_theta = best_theta;
    double best_feas_value = -std::numeric_limits<double>::infinity();
    auto consider = [&](const RVector& theta) {
      RVector restored = restore_feasibility(theta, t);
      const auto obj = eval_theta(restored);
      if (obj.i_uc >= t - opts_.feas_tol && obj.i_xb_given_u > best_feas_value) {
        best_feas_value = obj.i_xb_given_u;
        best_feas_theta = restored;
      }
    };
    consider(best_theta);
    for (double w : weights) {
      auto penalized = [&](const RegionObjectives& o) {
        return o.i_xb_given_u + w * std::min(0.0, o.i_uc - t);
      };
      RVector theta = pattern_search(best_theta, penalized);
      consider(theta);
      RVector theta2 = pattern_search(best_feas_theta, penalized);
      consider(theta2);
    }

    auto cls = detail::unflatten(best_feas_theta, nx_, du_);
    out.witness = to_joint_state(cls);
    const auto exact = region_objectives(*out.witness);
    out.i_xb_u = exact.i_xb_given_u;
    out.i_uc = exact.i_uc;
    out.f_value = exact.i_xb_given_u;

    if (opts_.quantum_u) quantum_refine(out, t);
    return out;
  }

  std::vector<LagrangePoint> lagrangian_boundary(const std::vector<double>& mu_grid) const {
    // per-mu refinement collects witnesses; the final values use the best
    // witness across the whole sweep, so mu -> value is convex by design
    std::vector<RVector> witnesses{trivial_theta_, copy_theta_};
    for (double mu : mu_grid) {
      double best = -std::numeric_limits<double>::infinity();
      RVector best_theta;
      for (std::size_t i = 0; i < grid_ixbu_.size(); ++i) {
        const double v = grid_ixbu_[i] + mu * grid_iuc_[i];
        if (v > best) {
          best = v;
          best_theta = grid_theta(i);
        }
      }
      auto objective = [&](const RegionObjectives& o) {
        return o.i_xb_given_u + mu * o.i_uc;
      };
      witnesses.push_back(pattern_search(best_theta, objective));
    }
    std::vector<std::pair<RegionObjectives, RVector>> evaluated;
    for (const auto& th : witnesses) evaluated.push_back({eval_theta(th), th});

    std::vector<LagrangePoint> out;
    for (double mu : mu_grid) {
      LagrangePoint lp;
      lp.mu = mu;
      double best = -std::numeric_limits<double>::infinity();
      const std::pair<RegionObjectives, RVector>* arg = nullptr;
      for (const auto& e : evaluated) {
        const double v = e.first.i_xb_given_u + mu * e.first.i_uc;
        if (v > best) {
          best = v;
          arg = &e;
        }
      }
      lp.value = best;
      lp.i_xb_u = arg->first.i_xb_given_u;
      lp.i_uc = arg->first.i_uc;
      lp.witness = to_joint_state(detail::unflatten(arg->second, nx_, du_));
      out.push_back(std::move(lp));
    }
    return out;
  }

  JointState to_joint_state(const detail::ClassicalParams& c) const {
    std::vector<DensityMatrix> u_states;
    for (int x = 0; x < nx_; ++x) {
      Matrix d = Matrix::Zero(du_, du_);
      RVector col = c.u_given_x.col(x);
      double s = col.sum();
      if (s <= 0.0) {
        col.setConstant(1.0 / du_);
      } else {
        col /= s;
      }
      for (int u = 0; u < du_; ++u) d(u, u) = std::max(0.0, col[u]);
      d /= d.trace().real();
      u_states.push_back(DensityMatrix(std::move(d)));
    }
    RVector p = c.p_x;
    double s = p.sum();
    for (int x = 0; x < nx_; ++x) p[x] = std::max(0.0, p[x]);
    s = p.sum();
    p /= s;
    return JointState(p, u_states, ch_);
  }

 private:
  int effective_resolution() const {
    int r = opts_.grid_resolution;
    auto points = [&](int res) {
      double total = static_cast<double>(simplex_grid_size(nx_, res));
      for (int x = 0; x < nx_; ++x) total *= static_cast<double>(simplex_grid_size(du_, res));
      return total;
    };
    while (r > 2 && points(r) > static_cast<double>(opts_.grid_budget)) r /= 2;
    return r;
  }

  RegionObjectives eval_theta(const RVector& theta) const {
    return tables_.evaluate(detail::unflatten(theta, nx_, du_));
  }

  // enumeration order: outer = p_x grid index, inner = per-x conditional grids
  void sweep() {
    std::vector<RVector> px_pts, cond_pts;
    for_each_simplex_point(nx_, resolution_, [&](const RVector& v) { px_pts.push_back(v); });
    for_each_simplex_point(du_, resolution_, [&](const RVector& v) { cond_pts.push_back(v); });
    const long n_cond = static_cast<long>(cond_pts.size());
    long total = static_cast<long>(px_pts.size());
    for (int x = 0; x < nx_; ++x) total *= n_cond;
    grid_ixbu_.resize(total);
    grid_iuc_.resize(total);
    px_pts_ = std::move(px_pts);
    cond_pts_ = std::move(cond_pts);

    parallel_for(static_cast<std::size_t>(total), [&](std::size_t idx) {
      const auto c = params_at(static_cast<long>(idx));
      const auto obj = tables_.evaluate(c);
      grid_ixbu_[idx] = obj.i_xb_given_u;
      grid_iuc_[idx] = obj.i_uc;
    });
  }

  detail::ClassicalParams params_at(long idx) const {
    const long n_cond = static_cast<long>(cond_pts_.size());
    detail::ClassicalParams c;
    c.u_given_x.resize(du_, nx_);
    for (int x = nx_ - 1; x >= 0; --x) {
      c.u_given_x.col(x) = cond_pts_[idx % n_cond];
      idx /= n_cond;
    }
    c.p_x = px_pts_[idx];
    return c;
  }

  RVector grid_theta(std::size_t idx) const {
    return detail::flatten(params_at(static_cast<long>(idx)));
  }

  // refine the two extreme witnesses: max I(X;B|U) (trivial U) and
  // max I(U;C) (U = copy of X)
  void refine_extremes() {
    // trivial U: conditionals all equal -> I(X;B|U) = I(X;B)
    detail::ClassicalParams triv;
    triv.p_x = RVector::Constant(nx_, 1.0 / nx_);
    triv.u_given_x = RMatrix::Constant(du_, nx_, 1.0 / du_);
    RVector theta = detail::flatten(triv);
    theta = pattern_search(theta, [](const RegionObjectives& o) { return o.i_xb_given_u; });
    // also scan the grid for a better start
    std::size_t bi = 0, bc = 0;
    for (std::size_t i = 0; i < grid_ixbu_.size(); ++i) {
      if (grid_ixbu_[i] > grid_ixbu_[bi]) bi = i;
      if (grid_iuc_[i] > grid_iuc_[bc]) bc = i;
    }
    RVector theta_g = pattern_search(grid_theta(bi), [](const RegionObjectives& o) {
      return o.i_xb_given_u;
    });
    trivial_theta_ = eval_theta(theta_g).i_xb_given_u > eval_theta(theta).i_xb_given_u
                         ? theta_g
                         : theta;
    max_i_xb_u_ = eval_theta(trivial_theta_).i_xb_given_u;

    detail::ClassicalParams copy;
    copy.p_x = RVector::Constant(nx_, 1.0 / nx_);
    copy.u_given_x = RMatrix::Identity(du_, nx_);
    RVector ctheta = detail::flatten(copy);
    ctheta = pattern_search(ctheta, [](const RegionObjectives& o) { return o.i_uc; });
    RVector ctheta_g =
        pattern_search(grid_theta(bc), [](const RegionObjectives& o) { return o.i_uc; });
    copy_theta_ = eval_theta(ctheta_g).i_uc > eval_theta(ctheta).i_uc ? ctheta_g : ctheta;
    max_i_uc_ = eval_theta(copy_theta_).i_uc;
  }

  // derivative-free coordinate pattern search with simplex projection
  template <typename Obj>
  RVector pattern_search(RVector theta, Obj&& objective) const {
    detail::project_blocks(theta, nx_, du_);
    double best = objective(eval_theta(theta));
    double step = 1.0 / std::max(16, resolution_);
    const double min_step = 1e-7;
    int passes = 0;
    while (step > min_step && ++passes < 600) {
      bool improved = false;
      for (Eigen::Index k = 0; k < theta.size(); ++k) {
        for (double sgn : {1.0, -1.0}) {
          RVector cand = theta;
          cand[k] += sgn * step;
          detail::project_blocks(cand, nx_, du_);
          const double v = objective(eval_theta(cand));
          if (v > best + 1e-14) {
            best = v;
            theta = cand;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    return theta;
  }

  // blend toward the copy witness until I(U;C) >= t
  RVector restore_feasibility(const RVector& theta, double t) const {
    if (eval_theta(theta).i_uc >= t - 0.5 * opts_.feas_tol) return theta;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      RVector blended = (1.0 - mid) * theta + mid * copy_theta_;
      detail::project_blocks(blended, nx_, du_);
      if (eval_theta(blended).i_uc >= t)
        hi = mid;
      else
        lo = mid;
    }
    RVector blended = (1.0 - hi) * theta + hi * copy_theta_;
    detail::project_blocks(blended, nx_, du_);
    return blended;
  }

  // opt-in hill climb over quantum rho_U^x; keeps the classical witness when
  // it is not beaten
  void quantum_refine(RegionPoint& out, double t) const {
    const int d_u = std::min<long>(nx_, static_cast<long>(ch_.d_b()) * ch_.d_b() +
                                           static_cast<long>(ch_.d_c()) * ch_.d_c() - 1);
    Rng rng(opts_.seed);
    auto make_state = [&](const std::vector<Matrix>& factors,
                          const RVector& p) -> std::optional<JointState> {
      std::vector<DensityMatrix> us;
      for (const auto& f : factors) {
        Matrix rho = f * f.adjoint();
        const double tr = rho.trace().real();
        if (tr <= 0.0) return std::nullopt;
        us.push_back(DensityMatrix(Matrix(rho / tr)));
      }
      RVector q = p;
      project_simplex(q);
      return JointState(q, us, ch_);
    };
    for (int start = 0; start < opts_.quantum_starts; ++start) {
      Rng local = rng.fork(start);
      std::vector<Matrix> factors;
      for (int x = 0; x < nx_; ++x) {
        if (start == 0 && out.witness && out.witness->d_u() == d_u) {
          // seed from the classical witness diagonal
          factors.push_back(psd_power(out.witness->u_state(x).mat(), 0.5));
        } else {
          factors.push_back(random_ginibre(d_u, d_u, local));
        }
      }
      RVector p = out.witness ? out.witness->p_x() : RVector::Constant(nx_, 1.0 / nx_);
      auto cur = make_state(factors, p);
      if (!cur) continue;
      auto score = [&](const JointState& js) {
        const auto o = region_objectives(js);
        return std::pair<double, RegionObjectives>(
            o.i_xb_given_u + 50.0 * std::min(0.0, o.i_uc - t), o);
      };
      auto [best_v, best_o] = score(*cur);
      double scale = 0.3;
      for (int it = 0; it < opts_.quantum_iters; ++it) {
        std::vector<Matrix> cand = factors;
        const int x = local.uniform_int(nx_);
        Matrix pert = random_ginibre(d_u, d_u, local);
        cand[x] += scale * pert;
        RVector pq = p;
        for (int i = 0; i < nx_; ++i) pq[i] += scale * 0.1 * local.normal();
        auto js = make_state(cand, pq);
        if (!js) continue;
        auto [v, o] = score(*js);
        if (v > best_v) {
          best_v = v;
          best_o = o;
          factors = std::move(cand);
          p = pq;
          cur = js;
        } else {
          scale = std::max(0.01, scale * 0.995);
        }
      }
      if (cur) {
        const auto o = region_objectives(*cur);
        if (o.i_uc >= t - opts_.feas_tol && o.i_xb_given_u > out.f_value) {
          out.f_value = o.i_xb_given_u;
          out.i_xb_u = o.i_xb_given_u;
          out.i_uc = o.i_uc;
          out.witness = *cur;
          out.certified_lower = false;
        }
      }
    }
  }

  const CqBroadcastChannel& ch_;
  RegionOptions opts_;
  detail::ChannelTables tables_;
  int nx_ = 0, du_ = 0, resolution_ = 0;
  std::vector<RVector> px_pts_, cond_pts_;
  std::vector<double> grid_ixbu_, grid_iuc_;
  RVector trivial_theta_, copy_theta_;
  double max_i_uc_ = 0.0, max_i_xb_u_ = 0.0;
};

/// F(t) by witness search; see RegionAnalyzer for the strategy.
inline RegionPoint f_of_t(const CqBroadcastChannel& ch, double t,
                          const RegionOptions& opts = {}) {
  return RegionAnalyzer(ch, opts).f_of_t(t);
}

/// sup { I(X;B|U) + mu I(U;C) } per grid value; yields the dual upper
/// envelope F(t) <= inf_mu { value(mu) - mu t }.
inline std::vector<LagrangePoint> lagrangian_boundary(const CqBroadcastChannel& ch,
                                                      const std::vector<double>& mu_grid,
                                                      const RegionOptions& opts = {}) {
  return RegionAnalyzer(ch, opts).lagrangian_boundary(mu_grid);
}

}  // namespace cqbl
