// Classical-quantum degraded broadcast channels: the channel object, block
// joint states over (U, X, B, C), their information objectives, and the
// numerical degradedness certificate (CPTP fit via Dykstra projections on
// Choi matrices).
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqbl/common.hpp"
#include "cqbl/entropic.hpp"
#include "cqbl/linalg.hpp"
#include "cqbl/operator_core.hpp"

namespace cqbl {

/// Map x -> rho_BC^x with declared output dims d_B, d_C (kron order B, C).
class CqBroadcastChannel {
 public:
  CqBroadcastChannel(std::vector<std::string> alphabet, std::vector<DensityMatrix> states,
                     int d_b, int d_c)
      : alphabet_(std::move(alphabet)), states_(std::move(states)), d_b_(d_b), d_c_(d_c) {
    if (states_.empty()) throw std::invalid_argument("CqBroadcastChannel: no states");
    if (alphabet_.empty()) alphabet_ = default_alphabet(states_.size());
    if (alphabet_.size() != states_.size())
      throw std::invalid_argument("CqBroadcastChannel: alphabet/states size mismatch");
    for (const auto& s : states_) {
      if (s.dim() != d_b_ * d_c_)
        throw std::invalid_argument("CqBroadcastChannel: state dim != d_B * d_C");
    }
    for (const auto& s : states_) {
      b_states_.push_back(partial_trace(s.mat(), {d_b_, d_c_}, {0}));
      c_states_.push_back(partial_trace(s.mat(), {d_b_, d_c_}, {1}));
    }
  }

  CqBroadcastChannel(std::vector<DensityMatrix> states, int d_b, int d_c)
      : CqBroadcastChannel({}, std::move(states), d_b, d_c) {}

  int input_count() const { return static_cast<int>(states_.size()); }
  int d_b() const { return d_b_; }
  int d_c() const { return d_c_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const DensityMatrix& joint_state(int x) const { return states_[x]; }
  const Matrix& b_state(int x) const { return b_states_[x]; }
  const Matrix& c_state(int x) const { return c_states_[x]; }

  static std::vector<std::string> default_alphabet(std::size_t n) {
    std::vector<std::string> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = std::to_string(i);
    return a;
  }

 private:
  std::vector<std::string> alphabet_;
  std::vector<DensityMatrix> states_;
  std::vector<Matrix> b_states_, c_states_;
  int d_b_, d_c_;
};

// ---------------------------------------------------------------------------
// Joint states omega_UXBC
// ---------------------------------------------------------------------------

/// omega_UXBC = sum_x p(x) rho_U^x (x) |x><x| (x) rho_BC^x, block diagonal in
/// the classical register X. Slots are ordered (U, X, B, C).
class JointState {
 public:
  JointState(RVector p_x, std::vector<DensityMatrix> u_states,
             const CqBroadcastChannel& ch)
      : p_x_(std::move(p_x)), u_states_(std::move(u_states)), d_b_(ch.d_b()), d_c_(ch.d_c()) {
    const int nx = ch.input_count();
    if (p_x_.size() != nx)
      throw std::invalid_argument("JointState: p_X size mismatch");
    if (static_cast<int>(u_states_.size()) != nx)
      throw std::invalid_argument("JointState: one rho_U^x per input symbol required");
    if (std::abs(p_x_.sum() - 1.0) > tol::trace_one)
      throw std::invalid_argument("JointState: p_X does not sum to 1");
    for (int x = 0; x < nx; ++x)
      if (p_x_[x] < -tol::trace_one)
        throw std::invalid_argument("JointState: negative probability");
    d_u_ = u_states_[0].dim();
    for (const auto& u : u_states_)
      if (u.dim() != d_u_) throw std::invalid_argument("JointState: mixed U dims");
    const int d_u_cap = std::min<long>(nx, static_cast<long>(d_b_) * d_b_ +
                                               static_cast<long>(d_c_) * d_c_ - 1);
    if (d_u_ > d_u_cap)
      throw std::invalid_argument("JointState: d_U exceeds min{|X|, d_B^2 + d_C^2 - 1}");
    for (int x = 0; x < nx; ++x) {
      b_states_.push_back(ch.b_state(x));
      c_states_.push_back(ch.c_state(x));
      bc_states_.push_back(ch.joint_state(x).mat());
    }
  }

  int d_u() const { return d_u_; }
  int d_x() const { return static_cast<int>(p_x_.size()); }
  int d_b() const { return d_b_; }
  int d_c() const { return d_c_; }
  const RVector& p_x() const { return p_x_; }
  const DensityMatrix& u_state(int x) const { return u_states_[x]; }

  /// omega_UXB (traces out C), kron order (U, X, B).
  Matrix omega_uxb() const {
    const int nx = d_x();
    Matrix out = Matrix::Zero(d_u_ * nx * d_b_, d_u_ * nx * d_b_);
    for (int x = 0; x < nx; ++x) {
      if (p_x_[x] <= 0.0) continue;
      Matrix xproj = Matrix::Zero(nx, nx);
      xproj(x, x) = 1.0;
      out += p_x_[x] * kron(kron(u_states_[x].mat(), xproj), b_states_[x]);
    }
    return out;
  }

  Matrix omega_ub() const {
    Matrix out = Matrix::Zero(d_u_ * d_b_, d_u_ * d_b_);
    for (int x = 0; x < d_x(); ++x)
      if (p_x_[x] > 0.0) out += p_x_[x] * kron(u_states_[x].mat(), b_states_[x]);
    return out;
  }

  Matrix omega_uc() const {
    Matrix out = Matrix::Zero(d_u_ * d_c_, d_u_ * d_c_);
    for (int x = 0; x < d_x(); ++x)
      if (p_x_[x] > 0.0) out += p_x_[x] * kron(u_states_[x].mat(), c_states_[x]);
    return out;
  }

  /// Full omega_UXBC; only sensible at desk scale.
  Matrix omega_uxbc() const {
    const int nx = d_x();
    const Eigen::Index d = static_cast<Eigen::Index>(d_u_) * nx * d_b_ * d_c_;
    Matrix out = Matrix::Zero(d, d);
    for (int x = 0; x < nx; ++x) {
      if (p_x_[x] <= 0.0) continue;
      Matrix xproj = Matrix::Zero(nx, nx);
      xproj(x, x) = 1.0;
      out += p_x_[x] * kron(kron(u_states_[x].mat(), xproj), bc_states_[x]);
    }
    return out;
  }

 private:
  RVector p_x_;
  std::vector<DensityMatrix> u_states_;
  std::vector<Matrix> b_states_, c_states_, bc_states_;
  int d_u_ = 0, d_b_, d_c_;
};

inline JointState build_joint_state(const RVector& p_x,
                                    const std::vector<DensityMatrix>& u_states,
                                    const CqBroadcastChannel& ch) {
  return JointState(p_x, u_states, ch);
}

struct RegionObjectives {
  double i_xb_given_u;  // I(X;B|U)
  double i_uc;          // I(U;C)
};

/// I(X;B|U) computed as I(XU;B) - I(U;B); I(U;C) from the UC reduction.
inline RegionObjectives region_objectives(const JointState& w) {
  const Matrix uxb = w.omega_uxb();
  const double i_xub = mutual_info_raw(uxb, w.d_u() * w.d_x(), w.d_b());
  const double i_ub = mutual_info_raw(w.omega_ub(), w.d_u(), w.d_b());
  const double i_uc = mutual_info_raw(w.omega_uc(), w.d_u(), w.d_c());
  return {i_xub - i_ub, i_uc};
}

enum class Conditioning { U, X };

/// Conditional mutual information on the block state: pivot U gives
/// I(X;B|U); pivot X gives I(U;B|X) (zero for these block states).
inline double cond_mutual_info_cq(const JointState& w, Conditioning pivot) {
  if (pivot == Conditioning::U) return region_objectives(w).i_xb_given_u;
  // I(U;B|X) = I(UX;B) - I(X;B); reorder (U,X,B) -> (X,U,B) for the XB trace
  const Matrix uxb = w.omega_uxb();
  const double i_uxb = mutual_info_raw(uxb, w.d_u() * w.d_x(), w.d_b());
  const Matrix xb = partial_trace(uxb, {w.d_u(), w.d_x(), w.d_b()}, {1, 2});
  const double i_xb = mutual_info_raw(xb, w.d_x(), w.d_b());
  return i_uxb - i_xb;
}

// ---------------------------------------------------------------------------
// Degradedness certificate
// ---------------------------------------------------------------------------

struct DegradednessResult {
  bool degraded = false;
  double residual = 0.0;  // max_x || N(rho_B^x) - rho_C^x ||_1
  double tol = 0.0;
  int iterations = 0;
  std::optional<QuantumChannel> channel;
};

namespace detail {

// N(rho) = Tr_B[(rho^T (x) I_C) J] for a Choi matrix J on B (x) C.
inline Matrix choi_apply(const Matrix& j, const Matrix& rho, int d_b, int d_c) {
  const Matrix lifted = kron(rho.transpose(), Matrix::Identity(d_c, d_c)) * j;
  return partial_trace(lifted, {d_b, d_c}, {1});
}

inline std::vector<Matrix> choi_kraus(const Matrix& j, int d_b, int d_c) {
  auto [w, v] = eigh(j);
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w[k] < tol::eig_clip) continue;
    Matrix op(d_c, d_b);
    for (int b = 0; b < d_b; ++b)
      for (int c = 0; c < d_c; ++c) op(c, b) = std::sqrt(w[k]) * v(b * d_c + c, k);
    kraus.push_back(std::move(op));
  }
  if (kraus.empty()) kraus.push_back(Matrix::Zero(d_c, d_b));
  return kraus;
}

// nearest Choi matrix with Tr_C J = I_B
inline Matrix project_tp(const Matrix& j, int d_b, int d_c) {
  const Matrix t = partial_trace(j, {d_b, d_c}, {0});
  return j + kron(Matrix(Matrix::Identity(d_b, d_b) - t),
                  Matrix(Matrix::Identity(d_c, d_c) / static_cast<double>(d_c)));
}

inline Matrix project_psd(const Matrix& j) {
  return hermitian_apply(j, [](double x) { return x > 0.0 ? x : 0.0; });
}

}  // namespace detail

/// Searches for a CPTP map N^{B->C} with N(rho_B^x) = rho_C^x for all x by
/// Dykstra-style alternating projections on the Choi matrix (PSD cone,
/// trace-preservation affine set, data-matching affine set). Infeasibility
/// is a report (smallest residual found), not an exception.
inline DegradednessResult check_degraded(const CqBroadcastChannel& ch, double tol_fit = 1e-6,
                                         int max_iters = 2000) {
  const int d_b = ch.d_b(), d_c = ch.d_c();
  const int nx = ch.input_count();

  // Gram matrix of the B marginals; pinv solves the data projection
  RMatrix gram(nx, nx);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < nx; ++y)
      gram(x, y) = (ch.b_state(x) * ch.b_state(y)).trace().real();
  Eigen::SelfAdjointEigenSolver<RMatrix> ges(gram);
  const RVector gw = ges.eigenvalues();
  const RMatrix gv = ges.eigenvectors();
  const double gcut = 1e-12 * std::max(1.0, gw.cwiseAbs().maxCoeff());

  auto project_data = [&](const Matrix& j) {
    std::vector<Matrix> resid(nx);
    for (int x = 0; x < nx; ++x)
      resid[x] = detail::choi_apply(j, ch.b_state(x), d_b, d_c) - ch.c_state(x);
    // c = G^+ r (blockwise over the matrix-valued residuals)
    std::vector<Matrix> coef(nx, Matrix::Zero(d_c, d_c));
    for (Eigen::Index k = 0; k < gw.size(); ++k) {
      if (gw[k] <= gcut) continue;
      Matrix proj = Matrix::Zero(d_c, d_c);
      for (int x = 0; x < nx; ++x) proj += gv(x, k) * resid[x];
      proj /= gw[k];
      for (int x = 0; x < nx; ++x) coef[x] += gv(x, k) * proj;
    }
    Matrix out = j;
    for (int x = 0; x < nx; ++x)
      out -= kron(Matrix(ch.b_state(x).transpose()), coef[x]);
    return out;
  };

  auto residual_of = [&](const QuantumChannel& n) {
    double worst = 0.0;
    for (int x = 0; x < nx; ++x) {
      const Matrix diff = apply_channel_raw(n, ch.b_state(x)) - ch.c_state(x);
      worst = std::max(worst, trace_norm_hermitian(diff));
    }
    return worst;
  };

  // exact CPTP snapshot of the current iterate with the given Choi rank;
  // truncating snaps onto nearby low-rank solutions (e.g. unitary channels)
  // that plain projections only approach sublinearly
  auto snapshot_rank = [&](const Matrix& j, int rank) {
    auto [w, v] = eigh(j);
    Matrix jp = Matrix::Zero(j.rows(), j.cols());
    for (int i = 0; i < rank; ++i) {
      const Eigen::Index idx = w.size() - 1 - i;
      if (idx < 0 || w[idx] <= tol::eig_clip) break;
      jp += w[idx] * projector(v.col(idx));
    }
    Matrix t = partial_trace(jp, {d_b, d_c}, {0});
    auto [tw, tv] = eigh(t);
    RVector inv_sqrt(tw.size());
    Matrix defect_dirs = Matrix::Zero(d_b, d_b);
    for (Eigen::Index i = 0; i < tw.size(); ++i) {
      if (tw[i] > 1e-10) {
        inv_sqrt[i] = 1.0 / std::sqrt(tw[i]);
      } else {
        inv_sqrt[i] = 0.0;
        defect_dirs += projector(tv.col(i));
      }
    }
    const Matrix t_iso = tv * inv_sqrt.asDiagonal() * tv.adjoint();
    Matrix fixed = kron(t_iso, Matrix::Identity(d_c, d_c)) * jp *
                   kron(t_iso, Matrix::Identity(d_c, d_c));
    if (defect_dirs.cwiseAbs().maxCoeff() > 0.5)
      fixed += kron(defect_dirs, Matrix(Matrix::Identity(d_c, d_c) / d_c));
    return QuantumChannel(detail::choi_kraus(hermitize(fixed), d_b, d_c));
  };

  const Eigen::Index dj = static_cast<Eigen::Index>(d_b) * d_c;
  Matrix j = Matrix::Identity(dj, dj) / static_cast<double>(d_c);
  Matrix corr = Matrix::Zero(dj, dj);  // Dykstra correction for the PSD cone

  DegradednessResult best;
  best.tol = tol_fit;
  best.residual = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= max_iters; ++it) {
    j = detail::project_tp(j, d_b, d_c);
    j = project_data(j);
    const Matrix y = j + corr;
    j = detail::project_psd(y);
    corr = y - j;

    if (it % 25 == 0 || it == max_iters) {
      for (int rank = 1; rank <= d_b * d_c; ++rank) {
        QuantumChannel cand = snapshot_rank(j, rank);
        const double res = residual_of(cand);
        if (res < best.residual) {
          best.residual = res;
          best.channel = std::move(cand);
          best.iterations = it;
        }
      }
      if (best.residual <= tol_fit * 0.5) break;
    }
  }
  if (!best.channel) {
    QuantumChannel cand = snapshot_rank(j, d_b * d_c);
    best.residual = residual_of(cand);
    best.channel = std::move(cand);
    best.iterations = max_iters;
  }
  best.degraded = best.residual <= tol_fit;
  return best;
}

/// Residual of a declared degrading map: max_x || N(rho_B^x) - rho_C^x ||_1.
inline double degrading_residual(const CqBroadcastChannel& ch, const QuantumChannel& n) {
  double worst = 0.0;
  for (int x = 0; x < ch.input_count(); ++x)
    worst = std::max(worst,
                     trace_norm_hermitian(Matrix(apply_channel_raw(n, ch.b_state(x)) -
                                                 ch.c_state(x))));
  return worst;
}

}  // namespace cqbl
