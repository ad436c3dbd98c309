// Operator algebra for finite-dimensional quantum systems: validated
// Hermitian operators, density matrices, POVMs, Kraus channels, tensor /
// partial-trace calculus, fractional powers, and the Araki-Lieb-Thirring
// comparison.
#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "cqbl/common.hpp"
#include "cqbl/linalg.hpp"

namespace cqbl {

class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix m) {
    if (m.rows() != m.cols())
      throw std::invalid_argument("HermitianOperator: matrix is not square");
    if (herm_deviation(m) > tol::herm)
      throw std::invalid_argument("HermitianOperator: matrix is not Hermitian");
    mat_ = hermitize(std::move(m));
  }

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& mat() const { return mat_; }
  double trace() const { return mat_.trace().real(); }

  static HermitianOperator identity(int d) {
    return HermitianOperator(Matrix::Identity(d, d));
  }

 private:
  Matrix mat_;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
    if (std::abs(op_.trace() - 1.0) > tol::trace_one)
      throw std::invalid_argument("DensityMatrix: trace is not 1");
    if (min_eigenvalue(op_.mat()) < tol::density_eig)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
  explicit DensityMatrix(Matrix m) : DensityMatrix(HermitianOperator(std::move(m))) {}

  int dim() const { return op_.dim(); }
  const Matrix& mat() const { return op_.mat(); }
  const HermitianOperator& op() const { return op_; }

  static DensityMatrix maximally_mixed(int d) {
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
  }
  static DensityMatrix pure(const CVector& psi) {
    CVector v = psi / psi.norm();
    return DensityMatrix(Matrix(v * v.adjoint()));
  }
  static DensityMatrix basis_state(int d, int k) {
    Matrix m = Matrix::Zero(d, d);
    m(k, k) = 1.0;
    return DensityMatrix(std::move(m));
  }

 private:
  HermitianOperator op_;
};

class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw std::invalid_argument("Povm: no elements");
    const int d = elements_[0].dim();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& e : elements_) {
      if (e.dim() != d) throw std::invalid_argument("Povm: mixed dimensions");
      if (min_eigenvalue(e.mat()) < tol::povm_psd)
        throw std::invalid_argument("Povm: element is not PSD");
      sum += e.mat();
    }
    if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol::povm_complete)
      throw std::invalid_argument("Povm: elements do not sum to identity");
  }

  int dim() const { return elements_[0].dim(); }
  std::size_t size() const { return elements_.size(); }
  const HermitianOperator& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<HermitianOperator>& elements() const { return elements_; }

 private:
  std::vector<HermitianOperator> elements_;
};

class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<Matrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw std::invalid_argument("QuantumChannel: no Kraus operators");
    d_in_ = static_cast<int>(kraus_[0].cols());
    d_out_ = static_cast<int>(kraus_[0].rows());
    Matrix sum = Matrix::Zero(d_in_, d_in_);
    for (const auto& k : kraus_) {
      if (k.cols() != d_in_ || k.rows() != d_out_)
        throw std::invalid_argument("QuantumChannel: inconsistent Kraus shapes");
      sum += k.adjoint() * k;
    }
    if ((sum - Matrix::Identity(d_in_, d_in_)).cwiseAbs().maxCoeff() > tol::kraus_tp)
      throw std::invalid_argument("QuantumChannel: Kraus set is not trace preserving");
  }

  int input_dim() const { return d_in_; }
  int output_dim() const { return d_out_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  static QuantumChannel identity(int d) {
    return QuantumChannel({Matrix::Identity(d, d)});
  }
  /// Traces out the input and prepares `target`.
  static QuantumChannel replacer(const DensityMatrix& target, int d_in) {
    auto [w, v] = eigh(target.mat());
    std::vector<Matrix> kraus;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w[i] < tol::eig_clip) continue;
      for (int j = 0; j < d_in; ++j) {
        Matrix k = Matrix::Zero(target.dim(), d_in);
        k.col(j) = std::sqrt(w[i]) * v.col(i);
        kraus.push_back(std::move(k));
      }
    }
    return QuantumChannel(std::move(kraus));
  }
  /// rho -> (1 - lambda) rho + lambda sigma.
  static QuantumChannel depolarizing_to(const DensityMatrix& sigma, double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
      throw std::invalid_argument("depolarizing_to: lambda outside [0,1]");
    const int d = sigma.dim();
    std::vector<Matrix> kraus;
    if (lambda < 1.0)
      kraus.push_back(std::sqrt(1.0 - lambda) * Matrix::Identity(d, d));
    if (lambda > 0.0) {
      const QuantumChannel rep = replacer(sigma, d);
      for (const auto& k : rep.kraus()) kraus.push_back(std::sqrt(lambda) * k);
    }
    return QuantumChannel(std::move(kraus));
  }

 private:
  std::vector<Matrix> kraus_;
  int d_in_ = 0, d_out_ = 0;
};

inline HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.mat(), b.mat()));
}

inline HermitianOperator partial_trace(const HermitianOperator& op,
                                       const std::vector<int>& dims,
                                       const std::vector<int>& keep) {
  return HermitianOperator(partial_trace(op.mat(), dims, keep));
}

inline HermitianOperator matrix_power(const HermitianOperator& a, double r) {
  return HermitianOperator(psd_power(a.mat(), r));
}

inline Matrix apply_channel_raw(const QuantumChannel& n, const Matrix& rho) {
  if (rho.rows() != n.input_dim())
    throw std::invalid_argument("apply_channel: dimension mismatch");
  Matrix out = Matrix::Zero(n.output_dim(), n.output_dim());
  for (const auto& k : n.kraus()) out += k * rho * k.adjoint();
  return out;
}

inline HermitianOperator apply_channel(const QuantumChannel& n, const HermitianOperator& rho) {
  return HermitianOperator(apply_channel_raw(n, rho.mat()));
}

inline DensityMatrix apply_channel(const QuantumChannel& n, const DensityMatrix& rho) {
  return DensityMatrix(apply_channel_raw(n, rho.mat()));
}

struct AltCheckResult {
  double lhs;  // Tr[b^{r/2} a^r b^{r/2}]
  double rhs;  // Tr[(b^{1/2} a b^{1/2})^r]
  double margin() const { return rhs - lhs; }
};

/// Araki-Lieb-Thirring comparison for PSD a, b and r in [0,1]; lhs <= rhs.
inline AltCheckResult alt_check(const HermitianOperator& a, const HermitianOperator& b,
                                double r) {
  if (r < 0.0 || r > 1.0) throw std::invalid_argument("alt_check: r outside [0,1]");
  if (a.dim() != b.dim()) throw std::invalid_argument("alt_check: dimension mismatch");
  const Matrix ar = psd_power(a.mat(), r);
  const Matrix br2 = psd_power(b.mat(), r / 2.0);
  const double lhs = (br2 * ar * br2).trace().real();
  const Matrix b12 = psd_power(b.mat(), 0.5);
  const double rhs = psd_power(Matrix(b12 * a.mat() * b12), r).trace().real();
  return {lhs, rhs};
}

}  // namespace cqbl
