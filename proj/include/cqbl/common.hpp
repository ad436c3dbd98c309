// Shared numeric utilities: tolerances, a portable deterministic RNG,
// simplex helpers, grid generators, worker pool, and float formatting.
#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace cqbl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

namespace tol {
inline constexpr double herm = 1e-10;           // max-abs entrywise hermiticity
inline constexpr double density_eig = -1e-10;   // density eigenvalue floor
inline constexpr double trace_one = 1e-10;
inline constexpr double povm_psd = -1e-10;
inline constexpr double povm_complete = 1e-9;
inline constexpr double kraus_tp = 1e-8;
inline constexpr double eig_clip = 1e-12;       // eigenvalues below this count as 0
inline constexpr double support_rho = 1e-10;    // rho eigenvalue counts as support
inline constexpr double support_sigma = 1e-12;  // sigma expectation must exceed this
inline constexpr double optimizer = 2e-3;       // region optimizer allowance (nats)
inline constexpr double regularize = 1e-9;      // full-rank mixing weight for optimizers
}  // namespace tol

inline constexpr double kPi = 3.14159265358979323846;

/// Deterministic RNG (splitmix64 core, hand-rolled transforms) so that a
/// fixed seed reproduces bit-identical streams across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [0, n).
  int uniform_int(int n) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  /// Standard normal via Box-Muller (cached second deviate).
  double normal() {
    if (has_cache_) {
      has_cache_ = false;
      return cache_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * kPi * u2;
    cache_ = r * std::sin(theta);
    has_cache_ = true;
    return r * std::cos(theta);
  }

  Complex cnormal() { return Complex(normal(), normal()); }

  /// Independent child stream; deterministic in (parent seed, stream id).
  Rng fork(std::uint64_t stream) const {
    std::uint64_t z = state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 0x632be59bd9b4e019ULL));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    return Rng(z);
  }

 private:
  std::uint64_t state_;
  double cache_ = 0.0;
  bool has_cache_ = false;
};

/// Worker count: CQBL_THREADS if set (clamped to >= 1), else hardware.
inline int worker_count() {
  static const int n = [] {
    if (const char* env = std::getenv("CQBL_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return n;
}

/// Runs body(i) for i in [0, n). Results must go to preassigned slots so the
/// outcome is identical for any worker count.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
  const int workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  int spawn = std::min<std::size_t>(workers, n) - 1;
  pool.reserve(spawn);
  for (int w = 0; w < spawn; ++w) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

/// Locale-independent float formatting with `sig` significant digits.
inline std::string format_sig(double v, int sig = 12) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, sig);
  return std::string(buf, res.ptr);
}

inline double xlnx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Binary entropy in nats; h(0) = h(1) = 0.
inline double binary_entropy(double x) { return -xlnx(x) - xlnx(1.0 - x); }

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = a;
    return v;
  }
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

inline std::vector<double> logspace(double a, double b, int n) {
  auto e = linspace(std::log10(a), std::log10(b), n);
  for (auto& x : e) x = std::pow(10.0, x);
  return e;
}

/// Euclidean projection onto the probability simplex.
inline void project_simplex(RVector& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  int rho = 0;
  for (int i = 0; i < n; ++i) {
    css += u[i];
    double t = (css - 1.0) / (i + 1);
    if (u[i] - t > 0.0) {
      rho = i + 1;
      theta = t;
    }
  }
  (void)rho;
  for (int i = 0; i < n; ++i) v[i] = std::max(0.0, v[i] - theta);
  double s = v.sum();
  if (s <= 0.0) {
    v.setConstant(1.0 / n);
  } else {
    v /= s;
  }
}

/// Enumerates all probability vectors with k entries on the grid {0, 1/r, ..., 1}.
/// Calls fn(v) for each; enumeration order is deterministic.
template <typename F>
void for_each_simplex_point(int k, int resolution, F&& fn) {
  RVector v(k);
  std::function<void(int, int)> rec = [&](int slot, int remaining) {
    if (slot == k - 1) {
      v[slot] = static_cast<double>(remaining) / resolution;
      fn(const_cast<const RVector&>(v));
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      v[slot] = static_cast<double>(c) / resolution;
      rec(slot + 1, remaining - c);
    }
  };
  rec(0, resolution);
}

/// Number of points enumerated by for_each_simplex_point.
inline long simplex_grid_size(int k, int resolution) {
  // C(resolution + k - 1, k - 1)
  long r = 1;
  for (int i = 1; i <= k - 1; ++i) r = r * (resolution + i) / i;
  return r;
}

}  // namespace cqbl
