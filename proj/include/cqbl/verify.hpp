// Randomized property-verification suites behind `cqbl verify`: each suite
// runs seeded trials of one family of inequalities and reports violation
// counts with the offending instances serialized for replay.
#pragma once

#include <string>
#include <vector>

#include "cqbl/channel_spec.hpp"
#include "cqbl/code_sim.hpp"
#include "cqbl/converse.hpp"
#include "cqbl/entropic.hpp"
#include "cqbl/operator_core.hpp"
#include "cqbl/random.hpp"
#include "cqbl/region.hpp"
#include "cqbl/semigroup.hpp"
#include "cqbl/standard_channels.hpp"

namespace cqbl {

struct SuiteResult {
  std::string name;
  long checks = 0;
  long violations = 0;
  Json failures = Json::array();  // serialized offending instances (capped)

  void record_failure(Json instance) {
    ++violations;
    if (failures.size() < 8) failures.push_back(std::move(instance));
  }

  Json to_json() const {
    Json j;
    j["suite"] = name;
    j["checks"] = checks;
    j["violations"] = violations;
    j["failures"] = failures;
    return j;
  }
};

/// Araki-Lieb-Thirring: lhs <= rhs on random PSD pairs, equality when they
/// commute.
inline SuiteResult run_alt_suite(std::uint64_t seed, long trials) {
  SuiteResult res;
  res.name = "alt";
  const int dims[] = {2, 3, 4, 6};
  Rng rng(seed);
  for (long t = 0; t < trials; ++t) {
    Rng local = rng.fork(t);
    const int d = dims[local.uniform_int(4)];
    const double r = 0.1 + 0.1 * local.uniform_int(9);
    const auto a = random_psd(d, local);
    const auto b = random_psd(d, local);
    const auto out = alt_check(a, b, r);
    ++res.checks;
    if (out.lhs > out.rhs + 1e-9) {
      Json inst;
      inst["trial"] = t;
      inst["r"] = r;
      inst["a"] = matrix_to_json(a.mat());
      inst["b"] = matrix_to_json(b.mat());
      inst["lhs"] = out.lhs;
      inst["rhs"] = out.rhs;
      res.record_failure(std::move(inst));
    }
  }
  // commuting instances: equality within 1e-9
  const long commuting = std::max<long>(trials / 10, 20);
  for (long t = 0; t < commuting; ++t) {
    Rng local = rng.fork(1000000 + t);
    const int d = dims[local.uniform_int(4)];
    const double r = 0.1 + 0.1 * local.uniform_int(9);
    auto [rho, sig] = random_commuting_pair(d, local);
    const auto out = alt_check(rho.op(), sig.op(), r);
    ++res.checks;
    if (std::abs(out.lhs - out.rhs) > 1e-9) {
      Json inst;
      inst["trial"] = t;
      inst["commuting"] = true;
      inst["r"] = r;
      inst["gap"] = out.rhs - out.lhs;
      res.record_failure(std::move(inst));
    }
  }
  return res;
}

inline const std::vector<std::pair<double, double>>& rhc_pq_pairs() {
  static const std::vector<std::pair<double, double>> pairs = {
      {-0.9, -0.5}, {-0.5, 0.5}, {0.2, 0.8}, {-0.9, 0.9}, {-0.7, -0.2}, {-0.3, 0.3},
      {0.1, 0.5},   {0.5, 0.9},  {-0.8, 0.4}, {-0.1, 0.8}, {0.3, 0.4},  {-0.6, 0.6}};
  return pairs;
}

/// Reverse hypercontractivity margins on random positive operators over
/// qubit/qutrit product semigroups at and above the threshold time.
inline SuiteResult run_rhc_suite(std::uint64_t seed, long trials) {
  SuiteResult res;
  res.name = "rhc";
  Rng rng(seed);
  const auto& pairs = rhc_pq_pairs();
  for (long t = 0; t < trials; ++t) {
    Rng local = rng.fork(t);
    const int n = 1 + local.uniform_int(3);
    const int d = 2 + local.uniform_int(2);
    const auto [p, q] = pairs[local.uniform_int(static_cast<int>(pairs.size()))];
    std::vector<Gqds> factors;
    for (int i = 0; i < n; ++i) factors.emplace_back(random_density(d, local));
    ProductGqds pg(std::move(factors));
    const auto g_n = random_positive(static_cast<int>(pg.total_dim()), local);
    const double threshold = std::log((p - 1.0) / (q - 1.0));
    for (double t_run : {threshold, threshold + 0.5}) {
      const auto out = rhc_check(pg, g_n, p, q, t_run);
      ++res.checks;
      if (out.margin < -1e-8) {
        Json inst;
        inst["trial"] = t;
        inst["n"] = n;
        inst["d"] = d;
        inst["p"] = p;
        inst["q"] = q;
        inst["t"] = t_run;
        inst["lhs"] = out.lhs;
        inst["rhs"] = out.rhs;
        inst["g"] = matrix_to_json(g_n.mat());
        res.record_failure(std::move(inst));
      }
    }
  }
  return res;
}

/// Data processing for D_alpha under random CPTP maps, plus measured <=
/// unmeasured on random pairs.
inline SuiteResult run_dpi_suite(std::uint64_t seed, long trials) {
  SuiteResult res;
  res.name = "dpi";
  Rng rng(seed);
  const double alphas[] = {0.3, 0.5, 0.7, 0.9};
  for (long t = 0; t < trials; ++t) {
    Rng local = rng.fork(t);
    const int d = 2 + local.uniform_int(2);
    const int d_out = 2 + local.uniform_int(2);
    const auto rho = random_density(d, local);
    const auto sig = random_density(d, local);
    const auto lam = random_channel(d, d_out, 2, local);
    const double alpha = alphas[local.uniform_int(4)];
    const double before = renyi_rel_entropy(rho, sig.op(), alpha);
    const double after = renyi_rel_entropy_raw(apply_channel_raw(lam, rho.mat()),
                                               apply_channel_raw(lam, sig.mat()), alpha);
    ++res.checks;
    if (after > before + 1e-8) {
      Json inst;
      inst["trial"] = t;
      inst["alpha"] = alpha;
      inst["before"] = before;
      inst["after"] = after;
      inst["rho"] = matrix_to_json(rho.mat());
      inst["sigma"] = matrix_to_json(sig.mat());
      res.record_failure(std::move(inst));
    }
  }
  // measured <= unmeasured spot checks (optimizer-backed, so fewer trials)
  const long meas_trials = std::max<long>(trials / 25, 8);
  for (long t = 0; t < meas_trials; ++t) {
    Rng local = rng.fork(5000000 + t);
    const int d = 2 + local.uniform_int(2);
    const auto rho = random_density(d, local);
    const auto sig = random_density(d, local);
    const double p = 0.05 + 0.4 * local.uniform();
    const double alpha = 1.0 - p;  // in (1/2, 1)
    const auto meas = measured_renyi(rho, sig, alpha);
    const double unmeas = renyi_rel_entropy(rho, sig.op(), alpha);
    ++res.checks;
    if (meas.value > unmeas + 1e-6) {
      Json inst;
      inst["trial"] = t;
      inst["alpha"] = alpha;
      inst["measured"] = meas.value;
      inst["unmeasured"] = unmeas;
      res.record_failure(std::move(inst));
    }
  }
  return res;
}

/// Exhaustive Fano-type audit on the binary pure-state channel.
inline SuiteResult run_fano_suite(std::uint64_t seed, long trials) {
  SuiteResult res;
  res.name = "fano";
  (void)trials;
  const auto pc = binary_pure_state_channel(0.5);
  for (int n : {1, 2}) {
    for (int m : {1, 2}) {
      for (int k : {1, 2}) {
        FanoAuditOptions opts;
        opts.seed = seed;
        auto rep = fano_audit(pc, n, m, k, DecoderStrategy::PgmAndLocalSearch, opts);
        res.checks += static_cast<long>(rep.records.size());
        if (rep.violations > 0) {
          Json inst;
          inst["n"] = n;
          inst["m_size"] = m;
          inst["k_size"] = k;
          inst["violations"] = rep.violations;
          inst["min_slack"] = rep.min_slack;
          res.record_failure(std::move(inst));
        }
      }
    }
  }
  return res;
}

/// Region invariants on the reference channels: boundary monotonicity,
/// degraded data processing I(U;C) <= I(U;B), witness reproduction, and
/// concavity.
inline SuiteResult run_region_suite(std::uint64_t seed, long trials) {
  SuiteResult res;
  res.name = "region";
  (void)seed;
  const int points = trials >= 200 ? 9 : 5;
  const auto channels = {noiseless_bit_channel(), bsc_degraded_channel(0.1, 0.1)};
  for (const auto& ch : channels) {
    RegionAnalyzer ra(ch);
    std::vector<std::pair<double, double>> curve;
    double prev_f = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
      const double t = ra.max_i_uc() * i / (points - 1);
      const auto rp = ra.f_of_t(t);
      curve.push_back({t, rp.f_value});
      ++res.checks;
      if (rp.f_value > prev_f + tol::optimizer) {
        Json inst;
        inst["check"] = "monotone";
        inst["t"] = t;
        inst["f"] = rp.f_value;
        inst["prev"] = prev_f;
        res.record_failure(std::move(inst));
      }
      prev_f = std::min(prev_f, rp.f_value);
      // witness reproduces its claimed objectives
      const auto obj = region_objectives(*rp.witness);
      ++res.checks;
      if (std::abs(obj.i_xb_given_u - rp.i_xb_u) > 1e-9 ||
          std::abs(obj.i_uc - rp.i_uc) > 1e-9) {
        Json inst;
        inst["check"] = "witness-reproduction";
        inst["t"] = t;
        res.record_failure(std::move(inst));
      }
      // degraded data processing through N^{B->C}
      const double i_ub = mutual_info_raw(rp.witness->omega_ub(), rp.witness->d_u(),
                                          rp.witness->d_b());
      ++res.checks;
      if (obj.i_uc > i_ub + 1e-9) {
        Json inst;
        inst["check"] = "degraded-dpi";
        inst["t"] = t;
        inst["i_uc"] = obj.i_uc;
        inst["i_ub"] = i_ub;
        res.record_failure(std::move(inst));
      }
    }
    const auto conc = concavity_audit(curve);
    ++res.checks;
    if (!conc.pass) {
      Json inst;
      inst["check"] = "concavity";
      inst["worst_deficit"] = conc.worst_deficit;
      res.record_failure(std::move(inst));
    }
  }
  return res;
}

/// Converse arithmetic identities and the criterion ordering on random codes.
inline SuiteResult run_converse_suite(std::uint64_t seed, long trials) {
  SuiteResult res;
  res.name = "converse";
  Rng rng(seed);
  // optimal t reproduces the closed-form correction
  for (long t = 0; t < std::max<long>(trials / 10, 25); ++t) {
    Rng local = rng.fork(t);
    const double eps = 0.05 + 0.9 * local.uniform();
    const int d = 2 + local.uniform_int(5);
    const long n = 1 + local.uniform_int(50);
    const double ts = optimal_t(eps, d, n);
    const double corr = fano_correction_at(ts, eps, d, n);
    const double bound_corr = fano_bound(n, eps, d, 0.0);
    ++res.checks;
    if (std::abs(corr - bound_corr) > 1e-9 * std::max(1.0, bound_corr)) {
      Json inst;
      inst["check"] = "optimal-t";
      inst["eps"] = eps;
      inst["d"] = d;
      inst["n"] = static_cast<long>(n);
      inst["difference"] = corr - bound_corr;
      res.record_failure(std::move(inst));
    }
  }
  // f monotone in eta
  {
    double prev = 0.0;
    for (double eta : linspace(0.0, 4.0, 50)) {
      const double f = exponent_from_eta(eta, 2, 2);
      ++res.checks;
      if (f + 1e-15 < prev) {
        Json inst;
        inst["check"] = "f-monotone";
        inst["eta"] = eta;
        res.record_failure(std::move(inst));
      }
      prev = f;
    }
  }
  // criterion ordering on random codes over the pure-state DBC
  const auto ch = pure_state_dbc(0.5, 0.5);
  const long code_trials = std::max<long>(trials / 20, 10);
  for (long t = 0; t < code_trials; ++t) {
    Rng local = rng.fork(900000 + t);
    const int n = 1 + local.uniform_int(2);
    const int m = 1 + local.uniform_int(2);
    const int k = 1 + local.uniform_int(2);
    std::vector<std::vector<int>> words(m * k, std::vector<int>(n));
    for (auto& w : words)
      for (int i = 0; i < n; ++i) w[i] = local.uniform_int(2);
    auto code = BroadcastCode::uniform(n, m, k, std::move(words));
    // PGM decoder pair
    std::vector<Matrix> b_letters, c_letters;
    for (int x = 0; x < 2; ++x) {
      b_letters.push_back(ch.b_state(x));
      c_letters.push_back(ch.c_state(x));
    }
    std::vector<DensityMatrix> msg_b, msg_c;
    for (int mm = 0; mm < m; ++mm) {
      Matrix blk = Matrix::Zero(detail::int_pow(2, n), detail::int_pow(2, n));
      for (int kk = 0; kk < k; ++kk)
        blk += detail::word_product_state(b_letters, code.word(mm, kk)) / k;
      msg_b.push_back(DensityMatrix(hermitize(blk)));
    }
    for (int kk = 0; kk < k; ++kk) {
      Matrix blk = Matrix::Zero(detail::int_pow(2, n), detail::int_pow(2, n));
      for (int mm = 0; mm < m; ++mm)
        blk += detail::word_product_state(c_letters, code.word(mm, kk)) / m;
      msg_c.push_back(DensityMatrix(hermitize(blk)));
    }
    DecoderPair dec{pgm_decoder(msg_b, RVector::Constant(m, 1.0 / m)),
                    pgm_decoder(msg_c, RVector::Constant(k, 1.0 / k))};
    const auto st = error_stats(ch, code, dec);
    ++res.checks;
    const bool ok = criterion_ordering_ok(st.side_b) && criterion_ordering_ok(st.side_c) &&
                    criterion_ordering_ok(st.joint) &&
                    st.joint.min_success <= st.side_b.min_success + 1e-12 &&
                    st.joint.min_success <= st.side_c.min_success + 1e-12;
    if (!ok) {
      Json inst;
      inst["check"] = "criterion-ordering";
      inst["trial"] = t;
      inst["min"] = st.joint.min_success;
      inst["geo"] = st.joint.geo_success;
      inst["avg"] = st.joint.avg_success;
      res.record_failure(std::move(inst));
    }
  }
  return res;
}

inline std::vector<std::string> verify_suite_names() {
  return {"alt", "rhc", "dpi", "fano", "region", "converse"};
}

inline SuiteResult run_suite(const std::string& name, std::uint64_t seed, long trials) {
  if (name == "alt") return run_alt_suite(seed, trials);
  if (name == "rhc") return run_rhc_suite(seed, trials);
  if (name == "dpi") return run_dpi_suite(seed, trials);
  if (name == "fano") return run_fano_suite(seed, trials);
  if (name == "region") return run_region_suite(seed, trials);
  if (name == "converse") return run_converse_suite(seed, trials);
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace cqbl
