// Generalized quantum depolarizing semigroup in Heisenberg and Schroedinger
// pictures, weighted L_p (pseudo-)norms, tensor-product semigroups, and the
// reverse-hypercontractivity and positivity-gap certifications.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cqbl/common.hpp"
#include "cqbl/linalg.hpp"
#include "cqbl/operator_core.hpp"

namespace cqbl {

/// One-parameter family Phi_t(X) = e^{-t} X + (1 - e^{-t}) Tr[sigma X] I with
/// invariant state sigma (strictly positive so the weighted norms exist).
class Gqds {
 public:
  explicit Gqds(DensityMatrix sigma) : sigma_(std::move(sigma)) {
    if (min_eigenvalue(sigma_.mat()) <= tol::eig_clip)
      throw std::invalid_argument("Gqds: invariant state must be strictly positive");
  }

  const DensityMatrix& invariant_state() const { return sigma_; }
  int dim() const { return sigma_.dim(); }

 private:
  DensityMatrix sigma_;
};

inline Matrix heisenberg_apply_raw(const Matrix& sigma, double t, const Matrix& x) {
  if (t < 0.0) throw std::invalid_argument("heisenberg_apply: t must be >= 0");
  const double decay = std::exp(-t);
  const double mean = (sigma * x).trace().real();
  return decay * x + (1.0 - decay) * mean * Matrix::Identity(x.rows(), x.cols());
}

inline HermitianOperator heisenberg_apply(const Gqds& g, double t,
                                          const HermitianOperator& x) {
  if (x.dim() != g.dim()) throw std::invalid_argument("heisenberg_apply: dim mismatch");
  return HermitianOperator(heisenberg_apply_raw(g.invariant_state().mat(), t, x.mat()));
}

/// Phi*_t(rho) = e^{-t} rho + (1 - e^{-t}) sigma.
inline DensityMatrix schrodinger_apply(const Gqds& g, double t, const DensityMatrix& rho) {
  if (t < 0.0) throw std::invalid_argument("schrodinger_apply: t must be >= 0");
  if (rho.dim() != g.dim()) throw std::invalid_argument("schrodinger_apply: dim mismatch");
  const double decay = std::exp(-t);
  return DensityMatrix(Matrix(decay * rho.mat() + (1.0 - decay) * g.invariant_state().mat()));
}

/// || x ||_{p, sigma} = (Tr |sigma^{1/2p} x sigma^{1/2p}|^p)^{1/p}. A norm for
/// p >= 1, a pseudo-norm for p < 1; p < 0 requires strictly positive x and
/// full-rank sigma.
inline double weighted_lp_norm_raw(const Matrix& x, const Matrix& sigma, double p) {
  if (p == 0.0) throw std::invalid_argument("weighted_lp_norm: p must be nonzero");
  if (p < 0.0 && min_eigenvalue(x) <= tol::eig_clip)
    throw std::domain_error("weighted_lp_norm: p < 0 requires strictly positive x");
  const Matrix w = psd_power(sigma, 1.0 / (2.0 * p));
  const Matrix inner = w * x * w;
  const RVector ev = eigh(inner).values;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double a = std::abs(ev[i]);
    if (a > tol::eig_clip)
      sum += std::pow(a, p);
    else if (p < 0.0)
      throw std::domain_error("weighted_lp_norm: singular inner operator with p < 0");
  }
  return std::pow(sum, 1.0 / p);
}

inline double weighted_lp_norm(const HermitianOperator& x, const DensityMatrix& sigma,
                               double p) {
  if (x.dim() != sigma.dim())
    throw std::invalid_argument("weighted_lp_norm: dim mismatch");
  return weighted_lp_norm_raw(x.mat(), sigma.mat(), p);
}

/// Tensor product of per-slot depolarizing semigroups with slot-dependent
/// invariant states; the factor list fixes both dims and invariant states.
class ProductGqds {
 public:
  explicit ProductGqds(std::vector<Gqds> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("ProductGqds: no factors");
    for (const auto& f : factors_) dims_.push_back(f.dim());
  }

  int slots() const { return static_cast<int>(factors_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  const Gqds& factor(int i) const { return factors_[i]; }

  Eigen::Index total_dim() const {
    Eigen::Index d = 1;
    for (int x : dims_) d *= x;
    return d;
  }

  /// The product invariant state (tensor of the factor states).
  Matrix product_state() const {
    Matrix out = factors_[0].invariant_state().mat();
    for (std::size_t i = 1; i < factors_.size(); ++i)
      out = kron(out, factors_[i].invariant_state().mat());
    return out;
  }

 private:
  std::vector<Gqds> factors_;
  std::vector<int> dims_;
};

namespace detail {

// applies the single-slot map T -> e^{-t} T + (1-e^{-t}) embed(Tr_slot[W T])
// where W is either (sigma at slot) for a GQDS factor or identity for Psi_t.
inline Matrix apply_slot_map(const Matrix& x, const std::vector<int>& dims, int slot,
                             double t, const Matrix* sigma_slot) {
  const double decay = std::exp(-t);
  Matrix weighted = x;
  if (sigma_slot) weighted = embed_operator_at(*sigma_slot, dims, slot) * x;
  std::vector<int> keep;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (i != slot) keep.push_back(i);
  const Matrix reduced = partial_trace(weighted, dims, keep);
  return decay * x + (1.0 - decay) * embed_identity_at(reduced, dims, slot);
}

}  // namespace detail

/// Applies the tensor-product semigroup slot by slot (2-term formula per
/// slot); never materializes the superoperator matrix.
inline Matrix product_apply_raw(const ProductGqds& pg, double t, const Matrix& x) {
  if (t < 0.0) throw std::invalid_argument("product_apply: t must be >= 0");
  if (x.rows() != pg.total_dim())
    throw std::invalid_argument("product_apply: dim mismatch");
  Matrix out = x;
  for (int slot = 0; slot < pg.slots(); ++slot) {
    const Matrix& sigma = pg.factor(slot).invariant_state().mat();
    out = detail::apply_slot_map(out, pg.dims(), slot, t, &sigma);
  }
  return out;
}

inline HermitianOperator product_apply(const ProductGqds& pg, double t,
                                       const HermitianOperator& x) {
  return HermitianOperator(product_apply_raw(pg, t, x.mat()));
}

/// Psi_t(T) = e^{-t} T + (1 - e^{-t}) Tr[T] I applied to every slot. Psi is
/// kept distinct from Gqds: its fixed operator is the unnormalized identity.
inline Matrix psi_product_apply(double t, const Matrix& x, const std::vector<int>& dims) {
  if (t < 0.0) throw std::invalid_argument("psi_product_apply: t must be >= 0");
  Matrix out = x;
  for (int slot = 0; slot < static_cast<int>(dims.size()); ++slot)
    out = detail::apply_slot_map(out, dims, slot, t, nullptr);
  return out;
}

struct RhcCheckResult {
  double lhs;  // || Phi_{t,x^n}(g) ||_{p, rho^{x^n}}
  double rhs;  // || g ||_{q, rho^{x^n}}
  double margin;
};

/// Reverse hypercontractivity of the product semigroup: for p <= q < 1 and
/// t >= ln((p-1)/(q-1)), the p-norm after evolution dominates the q-norm.
inline RhcCheckResult rhc_check(const ProductGqds& pg, const HermitianOperator& g_n,
                                double p, double q, double t) {
  if (p >= 1.0 || q >= 1.0 || p > q || p == 0.0 || q == 0.0)
    throw std::invalid_argument("rhc_check: need p <= q < 1, both nonzero");
  const double threshold = std::log((p - 1.0) / (q - 1.0));
  if (t < threshold - 1e-12)
    throw std::invalid_argument("rhc_check: t below the contraction threshold");
  if (min_eigenvalue(g_n.mat()) <= tol::eig_clip)
    throw std::invalid_argument("rhc_check: g_n must be strictly positive");
  const Matrix ref = pg.product_state();
  const Matrix evolved = product_apply_raw(pg, t, g_n.mat());
  const double lhs = weighted_lp_norm_raw(evolved, ref, p);
  const double rhs = weighted_lp_norm_raw(g_n.mat(), ref, q);
  return {lhs, rhs, lhs - rhs};
}

/// Minimum eigenvalue of Psi_t^{(x) n}(x) - Phi_{t,x^n}(x); nonnegative for
/// PSD x because the difference superoperator is positivity preserving.
inline double positivity_gap_check(const ProductGqds& pg, double t,
                                   const HermitianOperator& x) {
  const Matrix psi = psi_product_apply(t, x.mat(), pg.dims());
  const Matrix phi = product_apply_raw(pg, t, x.mat());
  return min_eigenvalue(Matrix(psi - phi));
}

}  // namespace cqbl
