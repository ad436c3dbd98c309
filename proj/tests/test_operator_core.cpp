#include <catch2/catch_amalgamated.hpp>

#include "cqbl/operator_core.hpp"
#include "cqbl/random.hpp"
#include "oracles.hpp"

using namespace cqbl;

TEST_CASE("tensor: identities and diagonal case", "[operator-core]") {
  const auto i2 = HermitianOperator::identity(2);
  const auto t = tensor(i2, i2);
  REQUIRE(t.dim() == 4);
  REQUIRE((t.mat() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a.diagonal() << 1.0, 2.0;
  b.diagonal() << 3.0, 4.0;
  const auto ab = tensor(HermitianOperator(a), HermitianOperator(b));
  RVector expect(4);
  expect << 3.0, 4.0, 6.0, 8.0;
  for (int i = 0; i < 4; ++i) REQUIRE(ab.mat()(i, i).real() == Catch::Approx(expect[i]));
}

TEST_CASE("tensor: eigenvalues are pairwise products", "[operator-core]") {
  Rng rng(11);
  const auto rho = random_density(3, rng);
  const auto sig = random_density(2, rng);
  const auto prod = tensor(rho.op(), sig.op());
  const auto got = eigh(prod.mat()).values;
  const auto expect =
      oracle::pairwise_products(eigh(rho.mat()).values, eigh(sig.mat()).values);
  for (int i = 0; i < 6; ++i) REQUIRE(got[i] == Catch::Approx(expect[i]).margin(1e-12));
}

TEST_CASE("partial_trace: product states and trace preservation", "[operator-core]") {
  Rng rng(12);
  const auto rho = random_density(2, rng);
  const auto sig = random_density(3, rng);
  const auto joint = tensor(rho.op(), sig.op());

  const auto back_a = partial_trace(joint, {2, 3}, {0});
  REQUIRE((back_a.mat() - rho.mat()).cwiseAbs().maxCoeff() < 1e-12);
  const auto back_b = partial_trace(joint, {2, 3}, {1});
  REQUIRE((back_b.mat() - sig.mat()).cwiseAbs().maxCoeff() < 1e-12);

  // maximally entangled pair reduces to I/2
  CVector phi(4);
  phi << 1.0, 0.0, 0.0, 1.0;
  phi /= phi.norm();
  const auto ent = DensityMatrix::pure(phi);
  const auto red = partial_trace(ent.op(), {2, 2}, {0});
  REQUIRE((red.mat() - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  // random state: trace preserved
  const auto big = random_density(6, rng);
  const auto red2 = partial_trace(big.op(), {2, 3}, {1});
  REQUIRE(red2.trace() == Catch::Approx(1.0).margin(1e-12));

  REQUIRE_THROWS_AS(partial_trace(big.op(), {2, 2}, {0}), std::invalid_argument);
}

TEST_CASE("matrix_power", "[operator-core]") {
  const auto id = HermitianOperator::identity(3);
  for (double r : {-1.0, -0.5, 0.5, 2.0})
    REQUIRE((matrix_power(id, r).mat() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
            1e-14);

  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 4.0, 9.0;
  const auto root = matrix_power(HermitianOperator(d), 0.5);
  REQUIRE(root.mat()(0, 0).real() == Catch::Approx(2.0));
  REQUIRE(root.mat()(1, 1).real() == Catch::Approx(3.0));

  Rng rng(13);
  const auto a = random_psd(4, rng);
  const auto half = matrix_power(a, 0.5);
  REQUIRE((half.mat() * half.mat() - a.mat()).cwiseAbs().maxCoeff() < 1e-9);

  // negative power of a singular operator must fail
  Matrix sing = Matrix::Zero(2, 2);
  sing(0, 0) = 1.0;
  REQUIRE_THROWS_AS(matrix_power(HermitianOperator(sing), -0.5), std::domain_error);
}

TEST_CASE("apply_channel", "[operator-core]") {
  Rng rng(14);
  const auto rho = random_density(2, rng);

  const auto id = QuantumChannel::identity(2);
  REQUIRE((apply_channel(id, rho).mat() - rho.mat()).cwiseAbs().maxCoeff() < 1e-14);

  const auto sig = random_density(2, rng);
  const auto rep = QuantumChannel::replacer(sig, 2);
  REQUIRE((apply_channel(rep, rho).mat() - sig.mat()).cwiseAbs().maxCoeff() < 1e-12);

  // depolarizing-to-sigma equals the convex combination
  const double lam = 0.37;
  const auto dep = QuantumChannel::depolarizing_to(sig, lam);
  const Matrix expect = (1.0 - lam) * rho.mat() + lam * sig.mat();
  REQUIRE((apply_channel(dep, rho).mat() - expect).cwiseAbs().maxCoeff() < 1e-12);

  REQUIRE_THROWS_AS(apply_channel(id, random_density(3, rng)), std::invalid_argument);
}

TEST_CASE("apply_channel preserves trace and positivity", "[operator-core]") {
  Rng rng(15);
  for (int t = 0; t < 25; ++t) {
    Rng local = rng.fork(t);
    const auto rho = random_density(3, local);
    const auto n = random_channel(3, 2 + local.uniform_int(2), 2, local);
    const Matrix out = apply_channel_raw(n, rho.mat());
    REQUIRE(out.trace().real() == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(min_eigenvalue(out) > -1e-10);
    REQUIRE(herm_deviation(out) < 1e-9);
  }
}

TEST_CASE("alt_check: commuting equality and random ordering", "[operator-core]") {
  const auto i2 = HermitianOperator::identity(2);
  const auto eq = alt_check(i2, i2, 0.5);
  REQUIRE(eq.lhs == Catch::Approx(2.0));
  REQUIRE(eq.rhs == Catch::Approx(2.0));

  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a.diagonal() << 1.0, 2.0;
  b.diagonal() << 3.0, 4.0;
  const auto diag = alt_check(HermitianOperator(a), HermitianOperator(b), 0.5);
  REQUIRE(diag.lhs == Catch::Approx(diag.rhs).margin(1e-12));

  Rng rng(16);
  for (int t = 0; t < 50; ++t) {
    Rng local = rng.fork(t);
    const auto x = random_psd(3, local);
    const auto y = random_psd(3, local);
    const double r = 0.1 + 0.8 * local.uniform();
    const auto out = alt_check(x, y, r);
    REQUIRE(out.lhs <= out.rhs + 1e-9);
  }

  REQUIRE_THROWS_AS(alt_check(i2, i2, 1.5), std::invalid_argument);
}

TEST_CASE("hermiticity is preserved by the operator calculus", "[operator-core]") {
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    Rng local = rng.fork(t);
    const auto a = random_psd(2, local);
    const auto b = random_psd(3, local);
    REQUIRE(herm_deviation(tensor(a, b).mat()) < 1e-9);
    REQUIRE(herm_deviation(partial_trace(tensor(a, b), {2, 3}, {1}).mat()) < 1e-9);
    REQUIRE(herm_deviation(matrix_power(a, 0.7).mat()) < 1e-9);
  }
}

TEST_CASE("type invariants reject bad inputs", "[operator-core]") {
  Matrix nh(2, 2);
  nh << 1.0, Complex(0.5, 0.2), Complex(0.5, -0.1), 1.0;
  REQUIRE_THROWS_AS(HermitianOperator(nh), std::invalid_argument);

  Matrix neg = Matrix::Zero(2, 2);
  neg.diagonal() << 1.5, -0.5;
  REQUIRE_THROWS_AS(DensityMatrix(neg), std::invalid_argument);

  Matrix half = 0.5 * Matrix::Identity(2, 2);
  REQUIRE_THROWS_AS(DensityMatrix(half), std::invalid_argument);  // trace 1 violated

  // POVM completeness
  std::vector<HermitianOperator> bad{HermitianOperator(half)};
  REQUIRE_THROWS_AS(Povm(bad), std::invalid_argument);

  // Kraus trace preservation
  std::vector<Matrix> k{0.5 * Matrix::Identity(2, 2)};
  REQUIRE_THROWS_AS(QuantumChannel(k), std::invalid_argument);
}
