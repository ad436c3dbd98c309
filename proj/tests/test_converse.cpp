#include <catch2/catch_amalgamated.hpp>

#include "cqbl/converse.hpp"
#include "cqbl/standard_channels.hpp"
#include "oracles.hpp"

using namespace cqbl;

TEST_CASE("fano_bound", "[converse]") {
  // eps -> 0: corrections vanish
  REQUIRE(fano_bound(1000, 1e-12, 2, 1.5) == Catch::Approx(1.5).margin(1e-3));

  // frozen arithmetic: n=1, d=2, eps=0.5, I=0 -> 2 sqrt(2 ln 2) + ln 2
  const double frozen = 3.0479672255908947;
  REQUIRE(fano_bound(1, 0.5, 2, 0.0) == Catch::Approx(frozen).margin(1e-12));

  // monotone in n, d, eps
  double prev = 0.0;
  for (long n : {1L, 2L, 5L, 10L, 100L}) {
    const double v = fano_bound(n, 0.3, 2, 1.0);
    REQUIRE(v > prev);
    prev = v;
  }
  prev = 0.0;
  for (int d : {2, 3, 4, 8}) {
    const double v = fano_bound(5, 0.3, d, 1.0);
    REQUIRE(v > prev);
    prev = v;
  }
  prev = 0.0;
  for (double e : {0.1, 0.3, 0.6, 0.9, 0.99}) {
    const double v = fano_bound(5, e, 2, 1.0);
    REQUIRE(v > prev);
    prev = v;
  }

  REQUIRE_THROWS_AS(fano_bound(5, 0.0, 2, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(fano_bound(5, 1.0, 2, 1.0), std::invalid_argument);
}

TEST_CASE("optimal_t", "[converse]") {
  // -ln(1-eps) = 1 with d = n = 1 gives t* = 1
  const double eps1 = 1.0 - std::exp(-1.0);
  REQUIRE(optimal_t(eps1, 1, 1) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(optimal_t(eps1, 4, 4) == Catch::Approx(0.25).margin(1e-12));

  // substituting t* reproduces the closed-form corrections exactly
  Rng rng(51);
  for (int t = 0; t < 40; ++t) {
    Rng local = rng.fork(t);
    const double eps = 0.05 + 0.9 * local.uniform();
    const int d = 2 + local.uniform_int(5);
    const long n = 1 + local.uniform_int(30);
    const double ts = optimal_t(eps, d, n);
    REQUIRE(ts > 0.0);
    REQUIRE(fano_correction_at(ts, eps, d, n) ==
            Catch::Approx(fano_bound(n, eps, d, 0.0)).margin(1e-10));
    // t* is a minimizer: nearby times are no better
    REQUIRE(fano_correction_at(ts * 1.1, eps, d, n) >=
            fano_correction_at(ts, eps, d, n) - 1e-12);
    REQUIRE(fano_correction_at(ts * 0.9, eps, d, n) >=
            fano_correction_at(ts, eps, d, n) - 1e-12);
  }
}

TEST_CASE("classical_fano", "[converse]") {
  REQUIRE(classical_fano(0.0, 4, 1.23) == Catch::Approx(1.23).margin(1e-14));
  // frozen: eps = 0.5, I = 0 -> 2 ln 2
  REQUIRE(classical_fano(0.5, 4, 0.0) ==
          Catch::Approx(1.3862943611198906).margin(1e-12));

  // for large n the Fano-type route beats the 1/(1-eps) blowup
  const double eps = 0.4, i_rate = 0.5;
  int wins = 0;
  for (long n : {10L, 100L, 1000L, 10000L}) {
    const double fano_type = fano_bound(n, eps, 2, i_rate * n) / n;
    const double classical = classical_fano(eps, 1L << 20, i_rate * n) / n;
    if (fano_type < classical) ++wins;
  }
  REQUIRE(wins >= 3);
}

TEST_CASE("strong_converse_exponent", "[converse]") {
  // frozen: d_B = d_C = 2, eta = 1
  const double frozen = 0.029437251522859414;
  REQUIRE(exponent_from_eta(1.0, 2, 2) == Catch::Approx(frozen).margin(1e-15));

  // eta -> 0 collapses f
  REQUIRE(exponent_from_eta(0.0, 2, 2) == Catch::Approx(0.0).margin(1e-15));

  // strictly increasing in eta
  double prev = -1.0;
  for (double eta : linspace(0.0, 5.0, 50)) {
    const double f = exponent_from_eta(eta, 2, 2);
    REQUIRE(f > prev);
    prev = f;
  }

  const auto ch = pure_state_dbc(0.5, 0.5);
  RegionAnalyzer ra(ch);
  const auto env = make_envelope(ra);

  // inside pair
  REQUIRE_FALSE(strong_converse_exponent(0.1, 0.01, 2, 2, env).has_value());

  // outside pair: gamma and eta consistent with the envelope
  const double rb = std::log(2.0) + 0.3;
  const auto ex = strong_converse_exponent(rb, 0.0, 2, 2, env);
  REQUIRE(ex.has_value());
  REQUIRE(ex->gamma == Catch::Approx(rb - env.max_i_xb_u).margin(1e-9));
  REQUIRE(ex->mu_star == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(ex->eta == Catch::Approx(ex->gamma / (1.0 + ex->mu_star)).margin(1e-12));
  REQUIRE(ex->f == Catch::Approx(exponent_from_eta(ex->eta, 2, 2)).margin(1e-12));
  REQUIRE(ex->f > 0.0);

  // x_n consistency: the quadratic holds at equality when eps = 1 - e^{-nf}
  for (int n : {1, 3, 10}) {
    const double xn = std::sqrt(n * ex->f);
    const double lhs = (1.0 + ex->mu_star) * xn * xn +
                       2.0 * (1.0 + ex->mu_star) *
                           (std::sqrt(n * 2.0) + std::sqrt(n * 2.0)) * xn -
                       n * ex->gamma;
    // general-dims form with d_B = d_C = 2
    REQUIRE(lhs == Catch::Approx(0.0).margin(1e-9 * n));
  }
}

TEST_CASE("second_order_bounds", "[converse]") {
  const auto ch = pure_state_dbc(0.5, 0.5);
  RegionAnalyzer ra(ch);
  const auto env = make_envelope(ra);

  // asymptotic collapse to the single-letter values
  const auto big = second_order_bounds(1000000000L, 0.1, ch, env);
  REQUIRE(big.rb_bound == Catch::Approx(big.single_letter_i_xb_u).margin(1e-3));
  REQUIRE(big.rc_bound == Catch::Approx(big.single_letter_i_uc).margin(1e-3));
  REQUIRE(big.rb_bound >= big.single_letter_i_xb_u);
  REQUIRE(big.rc_bound >= big.single_letter_i_uc);

  // the shared formula: rb_bound equals fano_bound at blocklength scale
  const auto rep = second_order_bounds(100, 0.1, ch, env);
  REQUIRE(rep.rb_bound ==
          Catch::Approx(fano_bound(100, 0.1, 2, 100.0 * env.max_i_xb_u) / 100.0)
              .margin(1e-12));
  REQUIRE(rep.rc_bound ==
          Catch::Approx(fano_bound(100, 0.1, 2, 100.0 * env.max_i_uc) / 100.0)
              .margin(1e-12));

  // useless channel: only correction terms remain
  const auto uch = useless_channel();
  RegionAnalyzer ura(uch);
  const auto uenv = make_envelope(ura);
  const auto urep = second_order_bounds(100, 0.1, uch, uenv);
  REQUIRE(urep.single_letter_i_xb_u == Catch::Approx(0.0).margin(1e-8));
  REQUIRE(urep.rb_bound ==
          Catch::Approx(fano_bound(100, 0.1, 2, 0.0) / 100.0).margin(1e-7));

  REQUIRE_THROWS_AS(second_order_bounds(100, 1.5, ch, env), std::invalid_argument);

  // noiseless-bit: explicit correction arithmetic at n = 100, eps = 0.1
  const auto nch = noiseless_bit_channel();
  RegionAnalyzer nra(nch);
  const auto nenv = make_envelope(nra);
  const auto nrep = second_order_bounds(100, 0.1, nch, nenv);
  const double L = -std::log(0.9);
  REQUIRE(nrep.rb_bound ==
          Catch::Approx(nenv.max_i_xb_u + 2.0 * std::sqrt(0.02 * L) + 0.01 * L)
              .margin(1e-9));
}

TEST_CASE("envelope value is convex and monotone in mu", "[converse][property]") {
  const auto ch = bsc_degraded_channel(0.1, 0.1);
  RegionAnalyzer ra(ch);
  const auto env = make_envelope(ra);
  double prev = -1.0;
  std::vector<double> mus = logspace(1e-2, 1e2, 17);
  std::vector<double> vals;
  for (double mu : mus) {
    const double v = env.value_at(mu);
    REQUIRE(v >= prev - 1e-12);
    prev = v;
    vals.push_back(v);
  }
  for (std::size_t i = 1; i + 1 < vals.size(); ++i) {
    const double lam = (mus[i + 1] - mus[i]) / (mus[i + 1] - mus[i - 1]);
    REQUIRE(vals[i] <= lam * vals[i - 1] + (1.0 - lam) * vals[i + 1] + 1e-9);
  }
}
