// Seeded generators for random states, unitaries, PSD operators and channels.
// Used by the property-verification suites and the tests; all sampling is
// deterministic in the Rng stream.
#pragma once

#include <vector>

#include "cqbl/common.hpp"
#include "cqbl/linalg.hpp"
#include "cqbl/operator_core.hpp"

namespace cqbl {

inline Matrix random_ginibre(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.cnormal();
  return g;
}

/// Haar-distributed unitary via QR with phase fixing.
inline Matrix random_unitary(int d, Rng& rng) {
  Matrix g = random_ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    Complex phase = r(i, i) / std::abs(r(i, i));
    q.col(i) *= phase;
  }
  return q;
}

inline CVector random_pure_state(int d, Rng& rng) {
  CVector v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.cnormal();
  return v / v.norm();
}

/// Full-rank random density matrix (Ginibre ensemble).
inline DensityMatrix random_density(int d, Rng& rng) {
  Matrix g = random_ginibre(d, d, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho));
}

/// Random PSD operator with spectrum in (0, scale].
inline HermitianOperator random_psd(int d, Rng& rng, double scale = 1.0) {
  Matrix g = random_ginibre(d, d, rng);
  Matrix p = g * g.adjoint();
  p *= scale / p.trace().real() * d / 2.0;
  return HermitianOperator(std::move(p));
}

/// Random strictly positive operator: PSD plus a floor on the spectrum.
inline HermitianOperator random_positive(int d, Rng& rng, double floor = 0.05) {
  Matrix p = random_psd(d, rng).mat() + floor * Matrix::Identity(d, d);
  return HermitianOperator(std::move(p));
}

/// Random CPTP map with `kraus_count` operators, from a Haar isometry slice.
inline QuantumChannel random_channel(int d_in, int d_out, int kraus_count, Rng& rng) {
  // columns of a random isometry V: C^{d_in} -> C^{d_out * kraus_count}
  Matrix u = random_unitary(d_out * kraus_count, rng);
  std::vector<Matrix> kraus(kraus_count, Matrix(d_out, d_in));
  for (int k = 0; k < kraus_count; ++k)
    for (int r = 0; r < d_out; ++r)
      for (int c = 0; c < d_in; ++c) kraus[k](r, c) = u(k * d_out + r, c);
  return QuantumChannel(std::move(kraus));
}

/// Pair of commuting PSD/density operators (common random eigenbasis).
inline std::pair<DensityMatrix, DensityMatrix> random_commuting_pair(int d, Rng& rng,
                                                                     bool full_rank = true) {
  Matrix u = random_unitary(d, rng);
  RVector p(d), q(d);
  for (int i = 0; i < d; ++i) {
    p[i] = rng.uniform(full_rank ? 0.05 : 0.0, 1.0);
    q[i] = rng.uniform(0.05, 1.0);
  }
  p /= p.sum();
  q /= q.sum();
  Matrix a = u * p.cast<Complex>().asDiagonal() * u.adjoint();
  Matrix b = u * q.cast<Complex>().asDiagonal() * u.adjoint();
  return {DensityMatrix(std::move(a)), DensityMatrix(std::move(b))};
}

}  // namespace cqbl
