// Dense Hermitian linear algebra on raw Eigen matrices: Kronecker products,
// eigendecomposition-based matrix functions, partial traces over arbitrary
// factor lists, and subsystem reordering.
#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cqbl/common.hpp"

namespace cqbl {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline double herm_deviation(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

struct Eigh {
  RVector values;  // ascending
  Matrix vectors;  // columns
};

inline Eigh eigh(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(hermitian));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename F>
Matrix hermitian_apply(const Matrix& a, F&& f) {
  auto [w, v] = eigh(a);
  RVector fw(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) fw[i] = f(w[i]);
  return v * fw.asDiagonal() * v.adjoint();
}

/// a^r for PSD a. Eigenvalues below tol::eig_clip are treated as exactly 0,
/// which is only legal for r >= 0; negative powers require strict positivity.
inline Matrix psd_power(const Matrix& a, double r) {
  auto [w, v] = eigh(a);
  if (w.minCoeff() < -1e-9)
    throw std::invalid_argument("psd_power: operator is not PSD");
  RVector fw(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double lam = w[i];
    if (lam < tol::eig_clip) {
      if (r < 0.0)
        throw std::domain_error("psd_power: negative power of a singular operator");
      fw[i] = 0.0;  // 0^0 uses the support convention
    } else {
      fw[i] = std::pow(lam, r);
    }
  }
  return v * fw.asDiagonal() * v.adjoint();
}

inline double trace_norm_hermitian(const Matrix& a) {
  return eigh(a).values.cwiseAbs().sum();
}

/// S^{-1/2} on the support of S (eigenvalues below the clip count as null).
inline Matrix pinv_sqrt(const Matrix& s) {
  auto [w, v] = eigh(s);
  RVector fw(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    fw[i] = w[i] > tol::eig_clip ? 1.0 / std::sqrt(w[i]) : 0.0;
  return v * fw.asDiagonal() * v.adjoint();
}

inline double min_eigenvalue(const Matrix& a) { return eigh(a).values.minCoeff(); }

inline Matrix projector(const CVector& v) { return v * v.adjoint(); }

namespace detail {

inline std::vector<Eigen::Index> strides_of(const std::vector<int>& dims) {
  std::vector<Eigen::Index> s(dims.size());
  Eigen::Index acc = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= dims[i];
  }
  return s;
}

inline Eigen::Index total_dim(const std::vector<int>& dims) {
  Eigen::Index d = 1;
  for (int x : dims) d *= x;
  return d;
}

}  // namespace detail

/// Partial trace over the factors NOT listed in `keep`. `dims` lists the
/// tensor factors in kron order (slot 0 most significant); `keep` must be
/// strictly increasing. The kept factors stay in their original order.
inline Matrix partial_trace(const Matrix& op, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  const Eigen::Index total = detail::total_dim(dims);
  if (op.rows() != total || op.cols() != total)
    throw std::invalid_argument("partial_trace: dims do not match operator size");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= static_cast<int>(dims.size()))
      throw std::invalid_argument("partial_trace: keep index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace: keep must be strictly increasing");
  }
  std::vector<int> traced;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) traced.push_back(i);

  const auto strides = detail::strides_of(dims);
  Eigen::Index dk = 1, dt = 1;
  for (int i : keep) dk *= dims[i];
  for (int i : traced) dt *= dims[i];

  // base offsets of each kept / traced multi-index
  auto offsets = [&](const std::vector<int>& slots, Eigen::Index count) {
    std::vector<Eigen::Index> off(count, 0);
    Eigen::Index reps = 1;
    for (int s : slots) {
      const int d = dims[s];
      const Eigen::Index stride = strides[s];
      const Eigen::Index block = count / (reps * d);
      Eigen::Index idx = 0;
      for (Eigen::Index r = 0; r < reps; ++r)
        for (int v = 0; v < d; ++v)
          for (Eigen::Index b = 0; b < block; ++b) off[idx++] += v * stride;
      reps *= d;
    }
    return off;
  };
  const auto koff = offsets(keep, dk);
  const auto toff = offsets(traced, dt);

  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r)
    for (Eigen::Index c = 0; c < dk; ++c) {
      Complex acc(0, 0);
      for (Eigen::Index t = 0; t < dt; ++t)
        acc += op(koff[r] + toff[t], koff[c] + toff[t]);
      out(r, c) = acc;
    }
  return out;
}

/// Reorders tensor factors: new slot j carries old slot perm[j].
inline Matrix reorder_subsystems(const Matrix& op, const std::vector<int>& dims,
                                 const std::vector<int>& perm) {
  const Eigen::Index total = detail::total_dim(dims);
  if (op.rows() != total || op.cols() != total)
    throw std::invalid_argument("reorder_subsystems: dims mismatch");
  if (perm.size() != dims.size())
    throw std::invalid_argument("reorder_subsystems: perm size mismatch");
  const auto old_strides = detail::strides_of(dims);
  std::vector<int> new_dims(dims.size());
  for (std::size_t j = 0; j < perm.size(); ++j) new_dims[j] = dims[perm[j]];
  const auto new_strides = detail::strides_of(new_dims);

  // map each new global index to the old global index
  std::vector<Eigen::Index> map(total);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rem = idx, old_idx = 0;
    for (std::size_t j = 0; j < new_dims.size(); ++j) {
      Eigen::Index digit = rem / new_strides[j];
      rem %= new_strides[j];
      old_idx += digit * old_strides[perm[j]];
    }
    map[idx] = old_idx;
  }
  Matrix out(total, total);
  for (Eigen::Index r = 0; r < total; ++r)
    for (Eigen::Index c = 0; c < total; ++c) out(r, c) = op(map[r], map[c]);
  return out;
}

/// Embeds a single-slot operator into the full space (identity elsewhere).
inline Matrix embed_operator_at(const Matrix& op, const std::vector<int>& dims, int slot) {
  Eigen::Index before = 1, after = 1;
  for (int i = 0; i < slot; ++i) before *= dims[i];
  for (int i = slot + 1; i < static_cast<int>(dims.size()); ++i) after *= dims[i];
  return kron(kron(Matrix::Identity(before, before), op),
              Matrix::Identity(after, after));
}

/// Embeds an operator acting on all factors except `slot` back into the full
/// space, acting as identity on `slot`.
inline Matrix embed_identity_at(const Matrix& reduced, const std::vector<int>& dims,
                                int slot) {
  std::vector<int> rest_dims;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (i != slot) rest_dims.push_back(dims[i]);
  Matrix big = kron(reduced, Matrix::Identity(dims[slot], dims[slot]));
  // big lives on (rest..., slot); permute slot back into position
  std::vector<int> perm;
  int rest_count = static_cast<int>(rest_dims.size());
  for (int i = 0, r = 0; i < static_cast<int>(dims.size()); ++i) {
    if (i == slot)
      perm.push_back(rest_count);  // the slot factor sits last in `big`
    else
      perm.push_back(r++);
  }
  std::vector<int> big_dims = rest_dims;
  big_dims.push_back(dims[slot]);
  return reorder_subsystems(big, big_dims, perm);
}

}  // namespace cqbl
