// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
//
// stin simulate | sweep | convergence | reports

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "stin/channel.hpp"
#include "stin/decouple.hpp"
#include "stin/errors.hpp"
#include "stin/gpi.hpp"
#include "stin/harness.hpp"
#include "stin/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> set;  // key=value overrides
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "flat key/value config file");
  cmd->add_option("--seed", c.seed, "master seed (overrides the config)");
  cmd->add_option("--set", c.set, "override one config key, key=value");
}

stin::SystemConfig load(const Common& c) {
  stin::SystemConfig cfg = c.config.empty() ? stin::SystemConfig{} : stin::load_config(c.config);
  for (const auto& kv : c.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw stin::ConfigError(kv, "--set expects key=value");
    stin::set_config_field(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed) cfg.seed = *c.seed;
  stin::validate(cfg);
  return cfg;
}

std::optional<stin::ReportMechanism> mechanism_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return stin::parse_mechanism(s);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string p;
  while (std::getline(ss, p, sep))
    if (!p.empty()) out.push_back(p);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed rate-splitting precoder simulator"};
  app.require_subcommand(1);

  // simulate
  Common sim_c;
  std::string sim_method = "gpi-avg", sim_mech, sim_out = "stin", sim_reports;
  int sim_trials = 100, sim_workers = 1;
  std::optional<double> sim_snr;
  bool sim_trace = false;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo trials of one method at one point");
  add_common(sim, sim_c);
  sim->add_option("--method", sim_method, "gpi-ins|gpi-avg|gpi-zero|gpi|slnr|zf|zf-local");
  sim->add_option("--mechanism", sim_mech, "average|instantaneous|zero (for --method gpi)");
  sim->add_option("--trials", sim_trials)->check(CLI::PositiveNumber);
  sim->add_option("--snr", sim_snr, "SNR in dB (overrides the config)");
  sim->add_option("--workers", sim_workers)->check(CLI::PositiveNumber);
  sim->add_option("--reports", sim_reports, "precomputed report values for gpi-avg");
  sim->add_flag("--trace", sim_trace, "also write <out>_trace.csv for the first trial");
  sim->add_option("--out", sim_out, "output prefix");

  // sweep
  Common sw_c;
  std::string sw_axis = "snr", sw_values = "0:5:30", sw_methods = "gpi-avg,slnr,zf", sw_mech,
              sw_out = "stin", sw_reports;
  int sw_trials = 100, sw_workers = 1;
  bool sw_trace = false;
  auto* sw = app.add_subcommand("sweep", "Sweep one axis over several methods");
  add_common(sw, sw_c);
  sw->add_option("--axis", sw_axis, "snr|sat_antennas|kt_int");
  sw->add_option("--values", sw_values, "start:step:stop or a comma list");
  sw->add_option("--methods", sw_methods, "comma list of methods");
  sw->add_option("--mechanism", sw_mech, "mechanism for a plain 'gpi' entry");
  sw->add_option("--trials", sw_trials)->check(CLI::PositiveNumber);
  sw->add_option("--workers", sw_workers)->check(CLI::PositiveNumber);
  sw->add_option("--reports", sw_reports, "precomputed report values for gpi-avg");
  sw->add_flag("--trace", sw_trace, "also write <out>_trace.csv");
  sw->add_option("--out", sw_out, "output prefix");

  // convergence
  Common cv_c;
  std::string cv_method = "gpi-ins", cv_mech, cv_out = "stin";
  std::optional<double> cv_snr;
  auto* cv = app.add_subcommand("convergence", "Dump the GPI iteration trace of one trial");
  add_common(cv, cv_c);
  cv->add_option("--snr", cv_snr, "SNR in dB (overrides the config)");
  cv->add_option("--method", cv_method, "gpi-ins|gpi-avg|gpi-zero|gpi");
  cv->add_option("--mechanism", cv_mech);
  cv->add_option("--out", cv_out, "output prefix; writes <out>_trace.csv");

  // reports
  Common rp_c;
  std::string rp_out;
  int rp_trial = 0;
  auto* rp = app.add_subcommand("reports", "Average report values for one trial placement");
  add_common(rp, rp_c);
  rp->add_option("--trial", rp_trial, "trial index whose placement is used");
  rp->add_option("--out", rp_out, "output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sim) {
      stin::SweepSpec spec;
      spec.base = load(sim_c);
      if (sim_snr) spec.base.snr_db = *sim_snr;
      spec.axis = stin::SweepAxis::Snr;
      spec.values = {spec.base.snr_db};
      spec.trials = sim_trials;
      spec.workers = sim_workers;
      spec.methods = {stin::parse_method(sim_method, mechanism_opt(sim_mech))};
      spec.keep_trace = sim_trace;
      std::optional<stin::ReportValues> reps;
      if (!sim_reports.empty()) {
        reps = stin::load_reports(sim_reports);
        spec.reports = &*reps;
      }
      const auto res = stin::sweep(spec);
      stin::write_outputs(res, sim_out, sim_trace && res.has_trace);
      const auto& row = res.summary.front();
      std::cout << row.method << " mean_sum_rate=" << row.mean_sum_rate
                << " stderr=" << row.stderr_sum_rate << " n=" << row.n << "\n";
    } else if (*sw) {
      stin::SweepSpec spec;
      spec.base = load(sw_c);
      spec.axis = stin::parse_axis(sw_axis);
      spec.values = stin::parse_values(sw_values);
      spec.trials = sw_trials;
      spec.workers = sw_workers;
      for (const auto& m : split(sw_methods, ','))
        spec.methods.push_back(stin::parse_method(m, mechanism_opt(sw_mech)));
      if (spec.methods.empty()) throw stin::ConfigError("methods", "no methods given");
      spec.keep_trace = sw_trace;
      std::optional<stin::ReportValues> reps;
      if (!sw_reports.empty()) {
        reps = stin::load_reports(sw_reports);
        spec.reports = &*reps;
      }
      const auto res = stin::sweep(spec);
      stin::write_outputs(res, sw_out, sw_trace && res.has_trace);
      for (const auto& row : res.summary)
        std::cout << row.axis << "=" << row.axis_value << " " << row.method
                  << " mean_sum_rate=" << row.mean_sum_rate << " stderr=" << row.stderr_sum_rate
                  << "\n";
    } else if (*cv) {
      auto cfg = load(cv_c);
      if (cv_snr) cfg.snr_db = *cv_snr;
      const auto method = stin::parse_method(cv_method, mechanism_opt(cv_mech));
      if (method.method != stin::Method::Gpi)
        throw stin::ConfigError("method", "convergence traces need a gpi method");
      stin::GpiTrace trace;
      stin::TrialOptions opts;
      opts.trace = &trace;
      const auto tr = stin::run_trial(cfg, method, stin::trial_seed(cfg.seed, 0), opts);
      stin::write_trace_csv(cv_out + "_trace.csv", trace);
      std::cout << "iterations=" << tr.gpi_iterations << " converged=" << tr.converged
                << " res_sat=" << trace.res_sat << " res_bs=" << trace.res_bs
                << " sum_rate=" << tr.sum_rate << "\n";
    } else if (*rp) {
      const auto cfg = load(rp_c);
      const std::uint64_t seed = stin::trial_seed(cfg.seed, rp_trial);
      stin::Rng rng(stin::derive_seed(seed, {0}));
      const auto placement = stin::place_users(cfg, rng);
      const auto covs =
          stin::spatial_covariances(cfg, placement, stin::effective_gains(cfg, placement));
      const auto settings = stin::GpiSettings::from_config(cfg);
      const stin::BsDesigner design = [&](const stin::BsForms& f, const stin::CsitEstimate& c,
                                          int pass) {
        const stin::Vec v0 = stin::mrt_bs(c);
        return pass == 0 ? v0 : stin::run_bs_stage(f, v0, settings).x;
      };
      const auto reps = stin::average_reports(cfg, covs, design, cfg.report_samples,
                                              cfg.report_passes, stin::derive_seed(seed, {2}));
      const auto text = stin::format_reports(reps);
      if (rp_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(rp_out);
        if (!out) throw stin::IoError("cannot open " + rp_out + " for writing");
        out << text;
      }
    }
  } catch (const stin::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const stin::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
