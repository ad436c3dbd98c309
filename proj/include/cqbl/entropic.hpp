// Entropies and divergences: von Neumann entropy, Umegaki relative entropy,
// Renyi relative entropy of order alpha in (0,1), the projectively measured
// Renyi relative entropy (basis search + Givens refinement), its variational
// form over positive operators, and mutual / conditional information.
//
// All values are in nats.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cqbl/common.hpp"
#include "cqbl/linalg.hpp"
#include "cqbl/operator_core.hpp"
#include "cqbl/random.hpp"

namespace cqbl {

inline double entropy_of_eigenvalues(const RVector& w) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w[i] > tol::eig_clip) s -= w[i] * std::log(w[i]);
  return s;
}

inline double vn_entropy_raw(const Matrix& rho) {
  if (rho.rows() == 2) {
    // closed form for qubits; this sits on several hot paths
    const double tr = rho.trace().real();
    const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
    double disc = tr * tr - 4.0 * det;
    disc = disc > 0.0 ? std::sqrt(disc) : 0.0;
    RVector w(2);
    w << 0.5 * (tr - disc), 0.5 * (tr + disc);
    return entropy_of_eigenvalues(w);
  }
  return entropy_of_eigenvalues(eigh(rho).values);
}

/// S(rho) = -Tr[rho ln rho] >= 0.
inline double vn_entropy(const DensityMatrix& rho) { return vn_entropy_raw(rho.mat()); }

/// D(rho || sigma) in nats; +infinity when supp(rho) is not inside supp(sigma).
inline double rel_entropy_raw(const Matrix& rho, const Matrix& sigma) {
  auto [wr, vr] = eigh(rho);
  auto [ws, vs] = eigh(sigma);
  // support test: rho eigenvectors with weight > support_rho need sigma mass
  for (Eigen::Index i = 0; i < wr.size(); ++i) {
    if (wr[i] <= tol::support_rho) continue;
    const double sexp = (vr.col(i).adjoint() * sigma * vr.col(i))(0, 0).real();
    if (sexp <= tol::support_sigma) return std::numeric_limits<double>::infinity();
  }
  double term_rho = 0.0;
  for (Eigen::Index i = 0; i < wr.size(); ++i)
    if (wr[i] > tol::eig_clip) term_rho += wr[i] * std::log(wr[i]);
  double term_sigma = 0.0;
  for (Eigen::Index j = 0; j < ws.size(); ++j) {
    const double overlap = (vs.col(j).adjoint() * rho * vs.col(j))(0, 0).real();
    if (ws[j] > tol::eig_clip) {
      term_sigma += overlap * std::log(ws[j]);
    }
    // overlap on a null sigma eigenvector is below the support tolerance here
  }
  return term_rho - term_sigma;
}

inline double rel_entropy(const DensityMatrix& rho, const HermitianOperator& sigma) {
  return rel_entropy_raw(rho.mat(), sigma.mat());
}

/// D_alpha(rho || sigma) = ln Tr[rho^alpha sigma^(1-alpha)] / (alpha - 1).
inline double renyi_rel_entropy_raw(const Matrix& rho, const Matrix& sigma, double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("renyi_rel_entropy: alpha outside (0,1)");
  const Matrix ra = psd_power(rho, alpha);
  const Matrix sa = psd_power(sigma, 1.0 - alpha);
  const double q = (ra * sa).trace().real();
  if (q <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log(q) / (alpha - 1.0);
}

inline double renyi_rel_entropy(const DensityMatrix& rho, const HermitianOperator& sigma,
                                double alpha) {
  return renyi_rel_entropy_raw(rho.mat(), sigma.mat(), alpha);
}

// ---------------------------------------------------------------------------
// Projectively measured Renyi relative entropy
// ---------------------------------------------------------------------------

struct MeasuredRenyiOptions {
  int random_starts = 32;
  double refine_tol = 1e-9;  // stop a sweep pass once improvement drops below
  int max_sweeps = 60;
  bool variational_polish = true;  // re-seed from the variational optimum's basis
  std::uint64_t seed = 0x5eed;
};

struct MeasuredRenyiResult {
  double value = 0.0;    // D^P_alpha in nats
  double q_value = 1.0;  // the minimized sum
  std::vector<HermitianOperator> optimal_basis;  // rank-one projectors
  bool converged = false;
};

namespace detail {

// Q objective for a basis U (columns): sum_i p_i^alpha q_i^(1-alpha) with
// p = diag(U^dag rho U), q = diag(U^dag sigma U).
inline double measured_q_terms(double p, double q, double alpha) {
  if (p <= 0.0 && q <= 0.0) return 0.0;
  if (p <= 0.0 || q <= 0.0) return 0.0;  // 0^a * x^(1-a) = 0 for a in (0,1)
  return std::pow(p, alpha) * std::pow(q, 1.0 - alpha);
}

class MeasuredQState {
 public:
  MeasuredQState(const Matrix& rho, const Matrix& sigma, double alpha, Matrix basis)
      : alpha_(alpha), u_(std::move(basis)) {
    m_ = u_.adjoint() * rho * u_;
    n_ = u_.adjoint() * sigma * u_;
    d_ = static_cast<int>(m_.rows());
  }

  double objective() const {
    double q = 0.0;
    for (int i = 0; i < d_; ++i)
      q += measured_q_terms(m_(i, i).real(), n_(i, i).real(), alpha_);
    return q;
  }

  // objective delta restricted to the (i, j) plane under a Givens rotation
  double rotated_pair_value(int i, int j, double theta, double phi) const {
    const double c = std::cos(theta), s = std::sin(theta);
    const Complex e = std::polar(1.0, phi);
    const double pii = m_(i, i).real(), pjj = m_(j, j).real();
    const double qii = n_(i, i).real(), qjj = n_(j, j).real();
    const double pre = 2.0 * c * s * (e * m_(i, j)).real();
    const double qre = 2.0 * c * s * (e * n_(i, j)).real();
    const double pi2 = c * c * pii + s * s * pjj + pre;
    const double pj2 = s * s * pii + c * c * pjj - pre;
    const double qi2 = c * c * qii + s * s * qjj + qre;
    const double qj2 = s * s * qii + c * c * qjj - qre;
    return measured_q_terms(pi2, qi2, alpha_) + measured_q_terms(pj2, qj2, alpha_);
  }

  double pair_value(int i, int j) const {
    return measured_q_terms(m_(i, i).real(), n_(i, i).real(), alpha_) +
           measured_q_terms(m_(j, j).real(), n_(j, j).real(), alpha_);
  }

  void apply_rotation(int i, int j, double theta, double phi) {
    const double c = std::cos(theta), s = std::sin(theta);
    const Complex e = std::polar(1.0, phi);
    CVector ui = u_.col(i), uj = u_.col(j);
    u_.col(i) = c * ui + e * s * uj;
    u_.col(j) = -std::conj(e) * s * ui + c * uj;
    auto rotate = [&](Matrix& t) {
      CVector ci = t.col(i), cj = t.col(j);
      t.col(i) = c * ci + e * s * cj;
      t.col(j) = -std::conj(e) * s * ci + c * cj;
      CVector ri = t.row(i).transpose(), rj = t.row(j).transpose();
      t.row(i) = (c * ri + std::conj(e) * s * rj).transpose();
      t.row(j) = (-e * s * ri + c * rj).transpose();
    };
    rotate(m_);
    rotate(n_);
  }

  const Matrix& basis() const { return u_; }
  int dim() const { return d_; }

 private:
  double alpha_;
  Matrix u_, m_, n_;
  int d_ = 0;
};

// One full coordinate-descent pass over all Givens planes; returns the
// improvement achieved.
inline double givens_sweep(MeasuredQState& st, double alpha) {
  (void)alpha;
  double improved = 0.0;
  const int d = st.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double base = st.pair_value(i, j);
      double best = base, best_theta = 0.0, best_phi = 0.0;
      // coarse grid, then two local shrink rounds
      double t_lo = -kPi / 2, t_hi = kPi / 2;
      double p_lo = 0.0, p_hi = 2.0 * kPi;
      double ct = 0.0, cp = 0.0;
      for (int round = 0; round < 3; ++round) {
        const int tn = round == 0 ? 13 : 7;
        const int pn = round == 0 ? 8 : 5;
        for (int a = 0; a < tn; ++a) {
          const double theta = t_lo + (t_hi - t_lo) * a / (tn - 1);
          for (int b = 0; b < pn; ++b) {
            const double phi = p_lo + (p_hi - p_lo) * b / (round == 0 ? pn : pn - 1);
            const double v = st.rotated_pair_value(i, j, theta, phi);
            if (v < best) {
              best = v;
              best_theta = theta;
              best_phi = phi;
            }
          }
        }
        ct = best_theta;
        cp = best_phi;
        const double tw = (t_hi - t_lo) / (round == 0 ? 12 : 6);
        const double pw = (p_hi - p_lo) / (round == 0 ? 8 : 4);
        t_lo = ct - tw;
        t_hi = ct + tw;
        p_lo = cp - pw;
        p_hi = cp + pw;
      }
      if (best < base - 1e-15) {
        st.apply_rotation(i, j, best_theta, best_phi);
        improved += base - best;
      }
    }
  }
  return improved;
}

// gradient of Tr[A e^{cH}] with respect to Hermitian H
inline Matrix exp_trace_gradient(const Matrix& a, const Matrix& h, double c) {
  auto [w, v] = eigh(h);
  const Matrix at = v.adjoint() * a * v;
  const int d = static_cast<int>(w.size());
  Matrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double x = c * w[i], y = c * w[j];
      double phi;
      if (std::abs(x - y) < 1e-9) {
        phi = std::exp(0.5 * (x + y));
      } else {
        phi = (std::exp(x) - std::exp(y)) / (x - y);
      }
      g(i, j) = at(i, j) * (c * phi);
    }
  }
  return v * g * v.adjoint();
}

// Minimizes ln[(Tr r e^H)^p (Tr s e^{p_hat H})^{1-p}] over Hermitian H by
// gradient descent with backtracking; r, s must be strictly positive.
// Returns the final H; `log_value` receives the attained log objective.
inline Matrix variational_descent(const Matrix& r, const Matrix& s, double p, Matrix h,
                                  int max_iters, double grad_tol, double* log_value) {
  const double p_hat = 1.0 / (1.0 - 1.0 / p);
  auto log_objective = [&](const Matrix& hh) {
    const Matrix g1 = hermitian_apply(hh, [](double x) { return std::exp(x); });
    const Matrix g2 = hermitian_apply(hh, [&](double x) { return std::exp(p_hat * x); });
    return p * std::log((r * g1).trace().real()) +
           (1.0 - p) * std::log((s * g2).trace().real());
  };
  double f = log_objective(h);
  double step = 0.5;
  for (int it = 0; it < max_iters; ++it) {
    const Matrix g1 = hermitian_apply(h, [](double x) { return std::exp(x); });
    const Matrix g2 = hermitian_apply(h, [&](double x) { return std::exp(p_hat * x); });
    const double t1 = (r * g1).trace().real();
    const double t2 = (s * g2).trace().real();
    Matrix grad = (p / t1) * exp_trace_gradient(r, h, 1.0) +
                  ((1.0 - p) / t2) * exp_trace_gradient(s, h, p_hat);
    grad = hermitize(grad);
    if (grad.norm() < grad_tol) break;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      const Matrix h_new = h - step * grad;
      const double f_new = log_objective(h_new);
      if (f_new < f - 1e-15) {
        h = h_new;
        f = f_new;
        moved = true;
        step *= 1.25;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  if (log_value) *log_value = f;
  return h;
}

// Warm-start H = ln G from a measurement basis: G = sum_i (p_i/q_i)^{p-1} P_i
// with the classically optimal diagonal weights.
inline Matrix warm_start_from_basis(const Matrix& r, const Matrix& s, double p,
                                    const Matrix& basis) {
  const int d = static_cast<int>(r.rows());
  Matrix h = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double pi_r =
        std::max((basis.col(i).adjoint() * r * basis.col(i))(0, 0).real(), 1e-300);
    const double pi_s =
        std::max((basis.col(i).adjoint() * s * basis.col(i))(0, 0).real(), 1e-300);
    h += (p - 1.0) * (std::log(pi_r) - std::log(pi_s)) * projector(basis.col(i));
  }
  return h;
}

inline Matrix regularize_full_rank(const Matrix& a) {
  const int d = static_cast<int>(a.rows());
  if (min_eigenvalue(a) >= tol::eig_clip) return a;
  return (1.0 - tol::regularize) * a + tol::regularize / d * Matrix::Identity(d, d);
}

}  // namespace detail

/// D^P_alpha(rho || sigma): infimum over rank-one orthonormal projective
/// measurements of sum_i (Tr P_i rho)^alpha (Tr P_i sigma)^(1-alpha), mapped
/// through ln / (alpha - 1). Search runs over candidate bases (rho, sigma,
/// joint and geometric-mean eigenbases plus random unitaries), each refined
/// by Givens-rotation coordinate descent.
inline MeasuredRenyiResult measured_renyi(const DensityMatrix& rho,
                                          const DensityMatrix& sigma, double alpha,
                                          const MeasuredRenyiOptions& opts = {}) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("measured_renyi: alpha outside (0,1)");
  if (min_eigenvalue(sigma.mat()) <= tol::eig_clip)
    throw std::invalid_argument("measured_renyi: sigma must be strictly positive");
  const int d = rho.dim();
  const Matrix& r = rho.mat();
  const Matrix& s = sigma.mat();

  std::vector<Matrix> starts;
  starts.push_back(eigh(r).vectors);
  starts.push_back(eigh(s).vectors);
  starts.push_back(eigh(Matrix(r + std::sqrt(2.0) * s)).vectors);
  {
    // geometric-mean basis: eigenvectors of sigma # rho
    const Matrix s_half = psd_power(s, 0.5);
    const Matrix s_mhalf = psd_power(s, -0.5);
    const Matrix mid = psd_power(Matrix(s_mhalf * r * s_mhalf), 0.5);
    starts.push_back(eigh(Matrix(s_half * mid * s_half)).vectors);
  }
  Rng rng(opts.seed);
  for (int k = 0; k < opts.random_starts; ++k) starts.push_back(random_unitary(d, rng));

  double best_q = std::numeric_limits<double>::infinity();
  Matrix best_u;
  bool best_converged = false;
  auto descend = [&](const Matrix& u0) {
    detail::MeasuredQState st(r, s, alpha, u0);
    bool converged = false;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      if (detail::givens_sweep(st, alpha) < opts.refine_tol) {
        converged = true;
        break;
      }
    }
    const double q = st.objective();
    if (q < best_q) {
      best_q = q;
      best_u = st.basis();
      best_converged = converged;
    }
  };
  for (const auto& u0 : starts) descend(u0);

  if (opts.variational_polish) {
    // Givens descent can stall in shallow local minima; re-seed from the
    // eigenbasis of the variational optimum G and polish again.
    const Matrix rr = detail::regularize_full_rank(r);
    const Matrix ss = detail::regularize_full_rank(s);
    Matrix h0 = detail::warm_start_from_basis(rr, ss, alpha, best_u);
    const Matrix h =
        detail::variational_descent(rr, ss, alpha, std::move(h0), 400, 1e-10, nullptr);
    descend(eigh(h).vectors);
  }

  MeasuredRenyiResult out;
  out.q_value = best_q;
  out.value = best_q > 0.0 ? std::log(best_q) / (alpha - 1.0)
                           : std::numeric_limits<double>::infinity();
  out.converged = best_converged;
  out.optimal_basis.reserve(d);
  for (int i = 0; i < d; ++i)
    out.optimal_basis.push_back(HermitianOperator(projector(best_u.col(i))));
  return out;
}

// ---------------------------------------------------------------------------
// Variational form of Q^P_p
// ---------------------------------------------------------------------------

struct VariationalQOptions {
  int max_iters = 600;
  double grad_tol = 1e-11;
  MeasuredRenyiOptions warm_start{};  // basis search used for the initial G
};

/// inf over G > 0 of (Tr[rho G])^p (Tr[sigma G^{p_hat}])^{1-p}, the
/// variational expression for Q^P_p with p in (0, 1/2) and p_hat its Hoelder
/// conjugate (1 - 1/p)^{-1}. G is parameterized as exp(H) and minimized by
/// gradient descent with backtracking, warm-started from the measured-basis
/// classical optimum. Returns the best (smallest) product found.
inline double variational_q(const DensityMatrix& rho, const DensityMatrix& sigma, double p,
                            const VariationalQOptions& opts = {}) {
  if (p <= 0.0 || p >= 0.5)
    throw std::invalid_argument("variational_q: p outside (0, 1/2)");
  // optimizers need full rank; mix with the maximally mixed state if needed
  const Matrix r = detail::regularize_full_rank(rho.mat());
  const Matrix s = detail::regularize_full_rank(sigma.mat());

  auto meas = measured_renyi(DensityMatrix(hermitize(r) / r.trace().real()),
                             DensityMatrix(hermitize(s) / s.trace().real()), p,
                             opts.warm_start);
  const int d = rho.dim();
  Matrix basis(d, d);
  for (int i = 0; i < d; ++i) {
    auto [w, v] = eigh(meas.optimal_basis[i].mat());
    basis.col(i) = v.col(d - 1);  // the rank-one direction
  }
  Matrix h0 = detail::warm_start_from_basis(r, s, p, basis);
  double log_value = 0.0;
  detail::variational_descent(r, s, p, std::move(h0), opts.max_iters, opts.grad_tol,
                              &log_value);
  // the warm start itself is a feasible G; keep whichever is smaller
  return std::min(std::exp(log_value), meas.q_value);
}

// ---------------------------------------------------------------------------
// Mutual information and conditional entropy
// ---------------------------------------------------------------------------

/// I(A;B) = D(rho_AB || rho_A x rho_B) for a state on A x B (kron order A, B).
inline double mutual_info_raw(const Matrix& rho_ab, int dim_a, int dim_b) {
  if (rho_ab.rows() != static_cast<Eigen::Index>(dim_a) * dim_b)
    throw std::invalid_argument("mutual_info: dims do not match state");
  const Matrix rho_a = partial_trace(rho_ab, {dim_a, dim_b}, {0});
  const Matrix rho_b = partial_trace(rho_ab, {dim_a, dim_b}, {1});
  return vn_entropy_raw(rho_a) + vn_entropy_raw(rho_b) - vn_entropy_raw(rho_ab);
}

inline double mutual_info(const DensityMatrix& rho_ab, int dim_a, int dim_b) {
  return mutual_info_raw(rho_ab.mat(), dim_a, dim_b);
}

/// H(A|B) = -D(rho_AB || I_A x rho_B) = S(AB) - S(B).
inline double cond_entropy_raw(const Matrix& rho_ab, int dim_a, int dim_b) {
  if (rho_ab.rows() != static_cast<Eigen::Index>(dim_a) * dim_b)
    throw std::invalid_argument("cond_entropy: dims do not match state");
  const Matrix rho_b = partial_trace(rho_ab, {dim_a, dim_b}, {1});
  return vn_entropy_raw(rho_ab) - vn_entropy_raw(rho_b);
}

inline double cond_entropy(const DensityMatrix& rho_ab, int dim_a, int dim_b) {
  return cond_entropy_raw(rho_ab.mat(), dim_a, dim_b);
}

}  // namespace cqbl
