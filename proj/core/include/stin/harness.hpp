// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stin/decouple.hpp"
#include "stin/gpi.hpp"
#include "stin/rates.hpp"
#include "stin/scenario.hpp"

namespace stin {

enum class Method { Gpi, Slnr, Zf, ZfLocal };

struct MethodSpec {
  Method method = Method::Gpi;
  ReportMechanism mechanism = ReportMechanism::Average;

  // gpi-ins, gpi-avg, gpi-zero, slnr, zf, zf-local
  std::string name() const;
  // Empty for the baselines, which take no reports.
  std::string mechanism_name() const;
};

// Accepts the names above, or plain "gpi" combined with `mechanism`.
MethodSpec parse_method(const std::string& name,
                        std::optional<ReportMechanism> mechanism = std::nullopt);

struct TrialResult {
  std::string method;
  std::string mechanism;
  double snr_db = 0.0;
  double sum_rate = 0.0;
  std::vector<double> user_rates;  // SUs first, then TUs
  RateReport rates;
  int gpi_iterations = 0;
  bool converged = true;
  std::uint64_t seed = 0;
};

struct TrialOptions {
  // Use these reports instead of computing them (gpi-avg only).
  const ReportValues* reports = nullptr;
  GpiTrace* trace = nullptr;
};

// place -> draw -> estimate -> reports -> optimize -> score on true channels.
TrialResult run_trial(const SystemConfig& cfg, const MethodSpec& method, std::uint64_t trial_seed,
                      const TrialOptions& opts = {});

// Trial seeds depend on (master seed, trial index) only, so every method and
// every axis value sees the same placements and channel draws.
std::uint64_t trial_seed(std::uint64_t master, int trial);

enum class SweepAxis { Snr, SatAntennas, KtInt };

std::string to_string(SweepAxis a);
SweepAxis parse_axis(const std::string& s);
// "a:step:b" (inclusive) or "a,b,c".
std::vector<double> parse_values(const std::string& s);

SystemConfig apply_axis(const SystemConfig& base, SweepAxis axis, double value);

struct SweepSpec {
  SweepAxis axis = SweepAxis::Snr;
  std::vector<double> values;
  int trials = 1;
  std::vector<MethodSpec> methods;
  SystemConfig base;
  int workers = 1;
  const ReportValues* reports = nullptr;
  bool keep_trace = false;
};

struct SummaryRow {
  std::string axis;
  double axis_value = 0.0;
  std::string method;
  std::string mechanism;
  double mean_sum_rate = 0.0;
  double stderr_sum_rate = 0.0;
  int n = 0;
};

struct CdfSample {
  std::string method;
  double user_rate = 0.0;
};

struct SweepResult {
  std::vector<SummaryRow> summary;
  std::vector<CdfSample> cdf;
  std::vector<TrialResult> trials;  // ordered by (axis value, method, trial)
  GpiTrace trace;                   // first GPI trial, when requested
  bool has_trace = false;
};

SweepResult sweep(const SweepSpec& spec);

// Mean and standard error of the mean (n - 1 in the variance).
std::pair<double, double> mean_stderr(const std::vector<double>& xs);

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);
void write_cdf_csv(const std::filesystem::path& path, const std::vector<CdfSample>& rows);
void write_trace_csv(const std::filesystem::path& path, const GpiTrace& trace);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

// <prefix>_summary.csv, <prefix>_cdf.csv and, with a trace, <prefix>_trace.csv.
void write_outputs(const SweepResult& result, const std::string& prefix, bool with_trace);

}  // namespace stin
