// Reference channels used by the verification suites, the CLI demos and the
// tests: noiseless bit, useless channel, classical BSC cascade embedding, and
// pure-state channels with a declared degrading map.
#pragma once

#include <cmath>
#include <vector>

#include "cqbl/channel.hpp"
#include "cqbl/operator_core.hpp"

namespace cqbl {

/// A c-q channel with a single receiver: x -> rho_B^x.
struct PointChannel {
  std::vector<DensityMatrix> states;
  int dim() const { return states.empty() ? 0 : states[0].dim(); }
  int input_count() const { return static_cast<int>(states.size()); }
};

/// Both receivers get a perfect copy of the classical bit.
inline CqBroadcastChannel noiseless_bit_channel() {
  std::vector<DensityMatrix> states;
  for (int x = 0; x < 2; ++x) {
    Matrix m = Matrix::Zero(4, 4);
    m(3 * x, 3 * x) = 1.0;  // |xx><xx|
    states.push_back(DensityMatrix(std::move(m)));
  }
  return CqBroadcastChannel(std::move(states), 2, 2);
}

/// Output independent of the input: every rate is zero.
inline CqBroadcastChannel useless_channel(int d_b = 2, int d_c = 2, int inputs = 2) {
  std::vector<DensityMatrix> states;
  const Matrix m = kron(Matrix::Identity(d_b, d_b) / d_b, Matrix::Identity(d_c, d_c) / d_c);
  for (int x = 0; x < inputs; ++x) states.push_back(DensityMatrix(m));
  return CqBroadcastChannel(std::move(states), d_b, d_c);
}

/// Diagonal embedding of the classical Markov chain X -> Y -> Z where
/// X -> Y is a BSC(p1) and Y -> Z a further BSC(p2_step) cascade.
inline CqBroadcastChannel bsc_degraded_channel(double p1, double p2_step) {
  auto flip = [](double p, int in, int out) { return in == out ? 1.0 - p : p; };
  std::vector<DensityMatrix> states;
  for (int x = 0; x < 2; ++x) {
    Matrix m = Matrix::Zero(4, 4);
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        m(y * 2 + z, y * 2 + z) = flip(p1, x, y) * flip(p2_step, y, z);
    states.push_back(DensityMatrix(std::move(m)));
  }
  return CqBroadcastChannel(std::move(states), 2, 2);
}

/// Two pure qubit states with the given overlap <psi_0|psi_1>.
inline PointChannel binary_pure_state_channel(double overlap) {
  const double s = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
  CVector psi0(2), psi1(2);
  psi0 << 1.0, 0.0;
  psi1 << overlap, s;
  return PointChannel{{DensityMatrix::pure(psi0), DensityMatrix::pure(psi1)}};
}

/// Qubit DBC with product outputs rho_BC^x = rho_B^x (x) N(rho_B^x); the
/// B side carries two pure states with the given overlap, C is the image
/// under depolarizing toward the maximally mixed state.
inline CqBroadcastChannel pure_state_dbc(double overlap, double depol_lambda) {
  auto pc = binary_pure_state_channel(overlap);
  auto n = QuantumChannel::depolarizing_to(DensityMatrix::maximally_mixed(2), depol_lambda);
  std::vector<DensityMatrix> states;
  for (const auto& b : pc.states)
    states.push_back(DensityMatrix(kron(b.mat(), apply_channel_raw(n, b.mat()))));
  return CqBroadcastChannel(std::move(states), 2, 2);
}

/// Product-output DBC from arbitrary B states and a degrading map.
inline CqBroadcastChannel product_dbc(const std::vector<DensityMatrix>& b_states,
                                      const QuantumChannel& n) {
  std::vector<DensityMatrix> states;
  for (const auto& b : b_states)
    states.push_back(DensityMatrix(kron(b.mat(), apply_channel_raw(n, b.mat()))));
  return CqBroadcastChannel(std::move(states), b_states[0].dim(), n.output_dim());
}

}  // namespace cqbl
