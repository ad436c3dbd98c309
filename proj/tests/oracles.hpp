// Independent classical oracles for the test suite. Everything here works on
// plain probability vectors / pmfs and never touches the library's operator
// paths, so it can back-check them.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline double xlnx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Shannon entropy in nats.
inline double entropy(const Vec& p) {
  double s = 0.0;
  for (int i = 0; i < p.size(); ++i) s -= xlnx(p[i]);
  return s;
}

inline double binary_entropy(double x) { return -xlnx(x) - xlnx(1.0 - x); }

/// KL divergence in nats; +inf on support violation.
inline double kl(const Vec& p, const Vec& q) {
  double s = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

/// Renyi divergence of order alpha in (0,1), nats.
inline double renyi(const Vec& p, const Vec& q, double alpha) {
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i)
    acc += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
  return std::log(acc) / (alpha - 1.0);
}

/// sum_i p_i^a q_i^(1-a), the classical Q.
inline double q_product(const Vec& p, const Vec& q, double alpha) {
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i)
    acc += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
  return acc;
}

/// Mutual information of a joint pmf (rows = first variable), nats.
inline double mutual_information(const Mat& joint) {
  const Vec pa = joint.rowwise().sum();
  const Vec pb = joint.colwise().sum();
  double s = 0.0;
  for (int a = 0; a < joint.rows(); ++a)
    for (int b = 0; b < joint.cols(); ++b) {
      const double j = joint(a, b);
      if (j > 0.0) s += j * std::log(j / (pa[a] * pb[b]));
    }
  return s;
}

/// H(A|B) from a joint pmf, nats.
inline double conditional_entropy(const Mat& joint) {
  const Vec pb = joint.colwise().sum();
  double s = 0.0;
  for (int a = 0; a < joint.rows(); ++a)
    for (int b = 0; b < joint.cols(); ++b) {
      const double j = joint(a, b);
      if (j > 0.0) s += -j * std::log(j / pb[b]);
    }
  return s;
}

/// I(X;Y|U) from a pmf p(u, x, y) laid out as vector of matrices (index u).
inline double conditional_mutual_information(const std::vector<Mat>& p_uxy) {
  double s = 0.0;
  for (const auto& block : p_uxy) {
    const double pu = block.sum();
    if (pu <= 0.0) continue;
    s += pu * mutual_information(Mat(block / pu));
  }
  return s;
}

/// Binary convolution a * b = a(1-b) + (1-a)b.
inline double convolve(double a, double b) { return a * (1.0 - b) + (1.0 - a) * b; }

/// Boundary point of the classical BSC degraded broadcast channel with flip
/// probabilities p1 (X->Y) and end-to-end p2 (X->Z): for auxiliary BSC(beta),
/// returns { t = I(U;Z), F = I(X;Y|U) }.
struct BscBoundaryPoint {
  double t, f;
};
inline BscBoundaryPoint bsc_boundary(double beta, double p1, double p2) {
  return {std::log(2.0) - binary_entropy(convolve(beta, p2)),
          binary_entropy(convolve(beta, p1)) - binary_entropy(p1)};
}

/// Eigenvalues of a Kronecker product are all pairwise products.
inline std::vector<double> pairwise_products(const Vec& a, const Vec& b) {
  std::vector<double> out;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j) out.push_back(a[i] * b[j]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
