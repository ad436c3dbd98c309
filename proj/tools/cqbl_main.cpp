// cqbl: analysis CLI for classical-quantum degraded broadcast channels.
//
// Subcommands:
//   check-degraded  fit a degrading map N^{B->C} and report the residual
//   region          sweep the entropic boundary F(t) to CSV
//   bound           second-order converse bounds and the strong-converse
//                   exponent for a rate pair
//   verify          run the property-verification suites
//   spec            parse, validate and re-serialize a channel spec
//
// All numeric output is in nats unless --bits is given. Exit codes: 0 on
// success, 1 on an infeasibility / violation, 2 on usage or parse errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cqbl/cqbl.hpp"

namespace {

using namespace cqbl;

constexpr double kLn2 = 0.6931471805599453;

struct Display {
  bool bits = false;
  double scale() const { return bits ? 1.0 / kLn2 : 1.0; }
  std::string unit() const { return bits ? "bits" : "nats"; }
};

std::string fmt(double v, const Display& d) { return format_sig(v * d.scale(), 12); }

int cmd_check_degraded(const std::string& path, double tolerance, const Display& disp) {
  (void)disp;
  const auto spec = load_channel_spec(path);
  const auto ch = to_channel(spec);
  const auto res = check_degraded(ch, tolerance);
  std::cout << "residual " << format_sig(res.residual, 12) << "\n";
  std::cout << "kraus_rank " << (res.channel ? res.channel->kraus().size() : 0) << "\n";
  std::cout << "iterations " << res.iterations << "\n";
  std::cout << (res.degraded ? "degraded" : "not-degraded") << " at tol "
            << format_sig(tolerance, 6) << "\n";
  return res.degraded ? 0 : 1;
}

int cmd_region(const std::string& path, int t_points, bool quantum_u,
               const std::string& out_path, std::uint64_t seed, const Display& disp) {
  const auto spec = load_channel_spec(path);
  const auto ch = to_channel(spec);
  const auto deg = check_degraded(ch);
  if (!deg.degraded) {
    std::cerr << "channel is not degraded (residual " << format_sig(deg.residual, 6)
              << ")\n";
    return 1;
  }
  RegionOptions opts;
  opts.quantum_u = quantum_u;
  opts.seed = seed;
  RegionAnalyzer ra(ch, opts);

  std::ostringstream csv;
  csv << "t,F_t,certified,i_xb_u,i_uc\n";
  std::vector<std::pair<double, double>> curve;
  const double t_max = ra.max_i_uc();
  for (int i = 0; i < t_points; ++i) {
    const double t = t_points == 1 ? 0.0 : t_max * i / (t_points - 1);
    const auto rp = ra.f_of_t(t);
    if (!rp.feasible) {
      std::cerr << "warning: t " << fmt(t, disp) << " infeasible, skipped\n";
      continue;
    }
    curve.push_back({t, rp.f_value});
    csv << fmt(t, disp) << "," << fmt(rp.f_value, disp) << ","
        << (rp.certified_lower ? 1 : 0) << "," << fmt(rp.i_xb_u, disp) << ","
        << fmt(rp.i_uc, disp) << "\n";
  }
  const auto conc = concavity_audit(curve);
  csv << "# concavity_audit," << (conc.pass ? "pass" : "fail") << ","
      << conc.violation_indices.size() << "," << format_sig(conc.worst_deficit, 6) << "\n";

  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << csv.str();
    std::cout << "wrote " << out_path << "\n";
  }
  return conc.pass ? 0 : 1;
}

int cmd_bound(const std::string& path, long n, double eps, std::optional<double> rb,
              std::optional<double> rc, const std::string& out_path,
              const std::string& csv_path, std::uint64_t seed, const Display& disp) {
  const auto spec = load_channel_spec(path);
  const auto ch = to_channel(spec);
  RegionOptions ropts;
  ropts.seed = seed;
  RegionAnalyzer ra(ch, ropts);
  const auto env = make_envelope(ra);
  auto rep = second_order_bounds(n, eps, ch, env);
  rep.rate_rb = rb;
  rep.rate_rc = rc;
  if (rb && rc) rep.exponent = strong_converse_exponent(*rb, *rc, ch.d_b(), ch.d_c(), env);

  const double s = disp.scale();
  Json j;
  j["n"] = rep.n;
  j["eps"] = rep.eps;
  j["d_b"] = rep.d_b;
  j["d_c"] = rep.d_c;
  j["unit"] = disp.unit();
  j["single_letter"] = {{"i_xb_u", rep.single_letter_i_xb_u * s},
                        {"i_uc", rep.single_letter_i_uc * s}};
  j["rb_bound"] = rep.rb_bound * s;
  j["rc_bound"] = rep.rc_bound * s;
  j["certified_lower"] = rep.certified_lower;
  if (rb) j["rate_rb"] = *rb * s;
  if (rc) j["rate_rc"] = *rc * s;
  if (rb && rc) {
    if (rep.exponent) {
      j["exponent"] = {{"mu_star", rep.exponent->mu_star},
                       {"gamma", rep.exponent->gamma * s},
                       {"eta", rep.exponent->eta * s},
                       {"f", rep.exponent->f},
                       {"error_floor", 1.0 - std::exp(-static_cast<double>(n) *
                                                      rep.exponent->f)}};
    } else {
      j["inside_region"] = true;
    }
  }

  std::ostringstream csv;
  csv << "n,eps,rb_bound,rc_bound,i_xb_u,i_uc,mu_star,gamma,eta,f\n"
      << rep.n << "," << format_sig(rep.eps, 12) << "," << fmt(rep.rb_bound, disp) << ","
      << fmt(rep.rc_bound, disp) << "," << fmt(rep.single_letter_i_xb_u, disp) << ","
      << fmt(rep.single_letter_i_uc, disp);
  if (rep.exponent) {
    csv << "," << format_sig(rep.exponent->mu_star, 12) << ","
        << fmt(rep.exponent->gamma, disp) << "," << fmt(rep.exponent->eta, disp) << ","
        << format_sig(rep.exponent->f, 12);
  } else {
    csv << ",,,,";
  }
  csv << "\n";

  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << j.dump(2) << "\n";
    std::cout << "wrote " << out_path << "\n";
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) {
      std::cerr << "cannot write " << csv_path << "\n";
      return 2;
    }
    out << csv.str();
  }
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, long trials,
               const std::string& out_path) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = verify_suite_names();
  } else {
    names = {suite};
  }
  Json summary = Json::array();
  long violations = 0;
  for (const auto& name : names) {
    const auto res = run_suite(name, seed, trials);
    violations += res.violations;
    summary.push_back(res.to_json());
    std::cout << name << ": " << res.checks << " checks, " << res.violations
              << " violations\n";
  }
  Json j;
  j["seed"] = seed;
  j["trials"] = trials;
  j["suites"] = std::move(summary);
  j["total_violations"] = violations;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << j.dump(2) << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return violations == 0 ? 0 : 1;
}

int cmd_spec(const std::string& path, const std::string& out_path) {
  const auto spec = load_channel_spec(path);
  const auto ch = to_channel(spec);  // full validation
  std::cout << "alphabet " << ch.input_count() << " symbols, d_B=" << ch.d_b()
            << ", d_C=" << ch.d_c()
            << (spec.degrading_map ? ", declared degrading map ok" : "") << "\n";
  if (!out_path.empty()) {
    save_channel_spec(spec, out_path);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropic region, converse bounds and inequality audits for "
               "classical-quantum degraded broadcast channels"};
  app.require_subcommand(1);
  Display disp;
  app.add_flag("--bits", disp.bits, "display entropic values in bits (default nats)");

  std::string spec_path, out_path, csv_path, suite = "all";
  double tolerance = 1e-6, eps = 0.05;
  long n = 1000;
  long trials = 200;
  std::uint64_t seed = 20240817;
  int t_points = 17;
  bool quantum_u = false;
  std::optional<double> rate_rb, rate_rc;

  auto* c_deg = app.add_subcommand("check-degraded", "fit a degrading map and report");
  c_deg->add_option("spec", spec_path, "channel spec JSON")->required();
  c_deg->add_option("--tol", tolerance, "acceptance residual (trace norm)");

  auto* c_region = app.add_subcommand("region", "entropic boundary F(t) sweep");
  c_region->add_option("spec", spec_path, "channel spec JSON")->required();
  c_region->add_option("--t-grid", t_points, "number of t grid points")
      ->check(CLI::PositiveNumber);
  c_region->add_flag("--quantum-u", quantum_u, "enable the quantum-U search");
  c_region->add_option("--out", out_path, "output CSV path (default stdout)");
  c_region->add_option("--seed", seed, "search seed");

  auto* c_bound = app.add_subcommand("bound", "second-order bounds / exponent");
  c_bound->add_option("spec", spec_path, "channel spec JSON")->required();
  c_bound->add_option("--n", n, "blocklength")->check(CLI::PositiveNumber);
  c_bound->add_option("--eps", eps, "max error level in (0,1)");
  double rb_val = 0.0, rc_val = 0.0;
  auto* rb_opt = c_bound->add_option("--rate-rb", rb_val, "queried R_B (nats/use)");
  auto* rc_opt = c_bound->add_option("--rate-rc", rc_val, "queried R_C (nats/use)");
  c_bound->add_option("--out", out_path, "BoundReport JSON path (default stdout)");
  c_bound->add_option("--csv", csv_path, "one-line CSV summary path");
  c_bound->add_option("--seed", seed, "search seed");

  auto* c_verify = app.add_subcommand("verify", "property-verification suites");
  c_verify->add_option("--suite", suite, "alt|rhc|dpi|fano|region|converse|all")
      ->check(CLI::IsMember({"alt", "rhc", "dpi", "fano", "region", "converse", "all"}));
  c_verify->add_option("--seed", seed, "suite seed");
  c_verify->add_option("--trials", trials, "trial count")->check(CLI::PositiveNumber);
  c_verify->add_option("--out", out_path, "JSON summary path (default stdout)");

  auto* c_spec = app.add_subcommand("spec", "validate / re-serialize a channel spec");
  c_spec->add_option("spec", spec_path, "channel spec JSON")->required();
  c_spec->add_option("--out", out_path, "re-serialized spec path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_deg) return cmd_check_degraded(spec_path, tolerance, disp);
    if (*c_region) return cmd_region(spec_path, t_points, quantum_u, out_path, seed, disp);
    if (*c_bound) {
      if (*rb_opt) rate_rb = rb_val;
      if (*rc_opt) rate_rc = rc_val;
      if (eps <= 0.0 || eps >= 1.0) {
        std::cerr << "--eps must lie in (0,1)\n";
        return 2;
      }
      return cmd_bound(spec_path, n, eps, rate_rb, rate_rc, out_path, csv_path, seed, disp);
    }
    if (*c_verify) return cmd_verify(suite, seed, trials, out_path);
    if (*c_spec) return cmd_spec(spec_path, out_path);
  } catch (const ChannelSpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
