// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#include "stin/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "stin/baselines.hpp"
#include "stin/channel.hpp"
#include "stin/csv.hpp"
#include "stin/errors.hpp"

namespace stin {

std::string MethodSpec::name() const {
  switch (method) {
    case Method::Gpi:
      switch (mechanism) {
        case ReportMechanism::Average: return "gpi-avg";
        case ReportMechanism::Instantaneous: return "gpi-ins";
        case ReportMechanism::Zero: return "gpi-zero";
      }
      break;
    case Method::Slnr: return "slnr";
    case Method::Zf: return "zf";
    case Method::ZfLocal: return "zf-local";
  }
  return "gpi";
}

std::string MethodSpec::mechanism_name() const {
  return method == Method::Gpi ? to_string(mechanism) : std::string();
}

MethodSpec parse_method(const std::string& name, std::optional<ReportMechanism> mechanism) {
  MethodSpec m;
  if (name == "gpi") {
    m.mechanism = mechanism.value_or(ReportMechanism::Average);
  } else if (name == "gpi-avg") {
    m.mechanism = ReportMechanism::Average;
  } else if (name == "gpi-ins") {
    m.mechanism = ReportMechanism::Instantaneous;
  } else if (name == "gpi-zero") {
    m.mechanism = ReportMechanism::Zero;
  } else if (name == "slnr") {
    m.method = Method::Slnr;
  } else if (name == "zf") {
    m.method = Method::Zf;
  } else if (name == "zf-local") {
    m.method = Method::ZfLocal;
  } else {
    throw ConfigError("method", "unknown method '" + name + "'");
  }
  if (m.method == Method::Gpi && name != "gpi" && mechanism && *mechanism != m.mechanism)
    throw ConfigError("mechanism", "conflicts with method '" + name + "'");
  return m;
}

std::uint64_t trial_seed(std::uint64_t master, int trial) {
  return derive_seed(master, {static_cast<std::uint64_t>(trial)});
}

namespace {

constexpr std::uint64_t kPlacementStream = 0;
constexpr std::uint64_t kBlockStream = 1;
constexpr std::uint64_t kReportStream = 2;

Mat reshape(const Vec& x, Eigen::Index rows) {
  return Eigen::Map<const Mat>(x.data(), rows, x.size() / rows);
}

}  // namespace

TrialResult run_trial(const SystemConfig& cfg, const MethodSpec& method, std::uint64_t seed,
                      const TrialOptions& opts) {
  Rng place_rng(derive_seed(seed, {kPlacementStream}));
  const auto placement = place_users(cfg, place_rng);
  const auto covs = spatial_covariances(cfg, placement, effective_gains(cfg, placement));
  Rng block_rng(derive_seed(seed, {kBlockStream}));
  const auto real = draw_channels(covs, block_rng);
  const auto csit = mmse_estimate(real, covs, cfg, block_rng);

  TrialResult out;
  out.method = method.name();
  out.mechanism = method.mechanism_name();
  out.snr_db = cfg.snr_db;
  out.seed = seed;

  if (method.method == Method::Gpi) {
    const auto settings = GpiSettings::from_config(cfg);
    const auto forms = build_quadratic_forms(csit, cfg);
    const auto init = mrt_init(csit);

    GpiTrace bs_trace, sat_trace;
    const StageResult bs = run_bs_stage(forms.bs, init.v, settings, opts.trace ? &bs_trace : nullptr);

    ReportValues reps;
    switch (method.mechanism) {
      case ReportMechanism::Instantaneous:
        reps = instantaneous_reports(forms.bs, bs.x);
        break;
      case ReportMechanism::Zero:
        reps = zero_reports(cfg.Kt);
        break;
      case ReportMechanism::Average:
        if (opts.reports) {
          reps = *opts.reports;
          if (static_cast<int>(reps.epsilon.size()) != cfg.Kt)
            throw ConfigError("reports", "epsilon must have Kt entries");
        } else {
          const BsDesigner design = [&](const BsForms& f, const CsitEstimate& c, int pass) {
            const Vec v0 = mrt_bs(c);
            return pass == 0 ? v0 : run_bs_stage(f, v0, settings).x;
          };
          reps = average_reports(cfg, covs, design, cfg.report_samples, cfg.report_passes,
                                 derive_seed(seed, {kReportStream}));
        }
        break;
    }

    const StageResult sat =
        run_sat_stage(forms.sat, reps, init.f, settings, opts.trace ? &sat_trace : nullptr);
    if (opts.trace) {
      *opts.trace = sat_trace;
      opts.trace->records.insert(opts.trace->records.end(), bs_trace.records.begin(),
                                 bs_trace.records.end());
      const auto res = kkt_residual(forms, reps, sat.x, bs.x, sat.mu);
      opts.trace->res_sat = res.sat;
      opts.trace->res_bs = res.bs;
    }
    out.gpi_iterations = sat.iterations + bs.iterations;
    out.converged = sat.converged && bs.converged;
    out.rates = true_instantaneous_rates(real, reshape(sat.x, cfg.M()), reshape(bs.x, cfg.N()),
                                         cfg, true);
  } else {
    BaselinePrecoders bp;
    switch (method.method) {
      case Method::Slnr: bp = slnr_max(csit, cfg); break;
      case Method::Zf: bp = zf_single_cell(csit, cfg); break;
      default: bp = zf_local(csit, cfg); break;
    }
    out.converged = !bp.regularized;
    out.rates = true_instantaneous_rates(real, bp.F, bp.V, cfg, false);
  }
  out.sum_rate = out.rates.sum;
  out.user_rates = per_user_rates(out.rates);
  return out;
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Snr: return "snr";
    case SweepAxis::SatAntennas: return "sat_antennas";
    case SweepAxis::KtInt: return "kt_int";
  }
  return "snr";
}

SweepAxis parse_axis(const std::string& s) {
  if (s == "snr") return SweepAxis::Snr;
  if (s == "sat_antennas") return SweepAxis::SatAntennas;
  if (s == "kt_int") return SweepAxis::KtInt;
  throw ConfigError("axis", "unknown sweep axis '" + s + "'");
}

std::vector<double> parse_values(const std::string& s) {
  auto num = [](const std::string& t) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("values", "bad number '" + t + "'");
    }
  };
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("values", "range must be start:step:stop");
    const double a = num(parts[0]), step = num(parts[1]), b = num(parts[2]);
    if (!(step > 0) || b < a) throw ConfigError("values", "range needs step > 0 and stop >= start");
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
  } else {
    std::stringstream ss(s);
    std::string p;
    while (std::getline(ss, p, ',')) out.push_back(num(p));
  }
  if (out.empty()) throw ConfigError("values", "no sweep values given");
  return out;
}

SystemConfig apply_axis(const SystemConfig& base, SweepAxis axis, double value) {
  SystemConfig c = base;
  switch (axis) {
    case SweepAxis::Snr:
      c.snr_db = value;
      break;
    case SweepAxis::SatAntennas: {
      const auto n = static_cast<int>(std::lround(std::sqrt(value)));
      if (n < 1 || n * n != static_cast<int>(std::lround(value)) || value != std::round(value))
        throw ConfigError("values", "sat_antennas values must be perfect squares");
      c.M1 = c.M2 = n;
      break;
    }
    case SweepAxis::KtInt:
      if (value != std::round(value)) throw ConfigError("values", "kt_int values must be integers");
      c.Kt_int = static_cast<int>(value);
      break;
  }
  validate(c);
  return c;
}

std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double n = static_cast<double>(xs.size());
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

SweepResult sweep(const SweepSpec& spec) {
  if (spec.values.empty() || spec.methods.empty() || spec.trials < 1)
    throw ConfigError("sweep", "needs values, methods and at least one trial");

  std::vector<SystemConfig> cfgs;
  for (double v : spec.values) cfgs.push_back(apply_axis(spec.base, spec.axis, v));

  const std::size_t n_methods = spec.methods.size();
  const std::size_t n_trials = static_cast<std::size_t>(spec.trials);
  const std::size_t n_jobs = cfgs.size() * n_methods * n_trials;

  // The traced job is the first GPI trial at the first axis value.
  std::size_t trace_job = n_jobs;
  if (spec.keep_trace) {
    for (std::size_t m = 0; m < n_methods; ++m)
      if (spec.methods[m].method == Method::Gpi) {
        trace_job = m * n_trials;
        break;
      }
  }

  SweepResult res;
  res.trials.resize(n_jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&]() {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= n_jobs) return;
      const std::size_t t = job % n_trials;
      const std::size_t m = (job / n_trials) % n_methods;
      const std::size_t a = job / (n_trials * n_methods);
      try {
        TrialOptions opts;
        opts.reports = spec.reports;
        if (job == trace_job) opts.trace = &res.trace;
        res.trials[job] = run_trial(cfgs[a], spec.methods[m],
                                    trial_seed(spec.base.seed, static_cast<int>(t)), opts);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(n_jobs);
      }
    }
  };

  const int n_workers = std::max(1, std::min<int>(spec.workers, static_cast<int>(n_jobs)));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  res.has_trace = trace_job < n_jobs;

  for (std::size_t a = 0; a < cfgs.size(); ++a) {
    for (std::size_t m = 0; m < n_methods; ++m) {
      std::vector<double> sums;
      for (std::size_t t = 0; t < n_trials; ++t) {
        const auto& tr = res.trials[(a * n_methods + m) * n_trials + t];
        sums.push_back(tr.sum_rate);
        for (double r : tr.user_rates) res.cdf.push_back({tr.method, r});
      }
      const auto [mean, se] = mean_stderr(sums);
      res.summary.push_back({to_string(spec.axis), spec.values[a], spec.methods[m].name(),
                             spec.methods[m].mechanism_name(), mean, se,
                             static_cast<int>(n_trials)});
    }
  }
  return res;
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
  CsvTable t;
  for (const auto& r : rows)
    t.push_back({r.axis, format_double(r.axis_value), r.method, r.mechanism,
                 format_double(r.mean_sum_rate), format_double(r.stderr_sum_rate),
                 std::to_string(r.n)});
  write_csv(path, {"axis", "axis_value", "method", "mechanism", "mean_sum_rate", "stderr", "n"},
            t);
}

void write_cdf_csv(const std::filesystem::path& path, const std::vector<CdfSample>& rows) {
  CsvTable t;
  for (const auto& r : rows) t.push_back({r.method, format_double(r.user_rate)});
  write_csv(path, {"method", "user_rate"}, t);
}

void write_trace_csv(const std::filesystem::path& path, const GpiTrace& trace) {
  CsvTable t;
  const std::string none = format_double(std::nan(""));
  for (const auto& r : trace.records) {
    const bool sat = r.stage == Stage::Satellite;
    t.push_back({sat ? "satellite" : "bs", std::to_string(r.iter), format_double(r.mu),
                 format_double(r.displacement), format_double(r.objective),
                 sat ? format_double(r.residual) : none, sat ? none : format_double(r.residual)});
  }
  write_csv(path, {"stage", "iter", "mu", "displacement", "objective", "res_sat", "res_bs"}, t);
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  if (table.empty()) throw IoError("missing header in " + path.string());
  std::vector<SummaryRow> rows;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& f = table[i];
    if (f.size() != 7) throw IoError("malformed row in " + path.string());
    rows.push_back({f[0], parse_double_exact(f[1]), f[2], f[3], parse_double_exact(f[4]),
                    parse_double_exact(f[5]), std::stoi(f[6])});
  }
  return rows;
}

void write_outputs(const SweepResult& result, const std::string& prefix, bool with_trace) {
  const std::filesystem::path base(prefix);
  if (base.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(base.parent_path(), ec);
    if (ec) throw IoError("cannot create " + base.parent_path().string() + ": " + ec.message());
  }
  write_summary_csv(prefix + "_summary.csv", result.summary);
  write_cdf_csv(prefix + "_cdf.csv", result.cdf);
  if (with_trace) write_trace_csv(prefix + "_trace.csv", result.trace);
}

}  // namespace stin
