// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#pragma once

#include <vector>

#include "stin/decouple.hpp"
#include "stin/rates.hpp"

namespace stin {

struct MuSchedule {
  double factor = 2.0;  // mu <- mu * factor, clamped to [floor, ceiling]
  int trigger = 30;     // unconverged iterations at one mu before rescaling
  double floor = 1e-3;
  double ceiling = 10.0;
};

struct GpiSettings {
  double mu = 0.1;
  double zeta = 0.01;
  int inner_max = 100;  // iterations per pass
  int t_max = 1000;     // total iterations per stage
  MuSchedule schedule;

  static GpiSettings from_config(const SystemConfig& cfg);
};

enum class Stage { Satellite = 1, Bs = 2 };

struct GpiRecord {
  Stage stage = Stage::Satellite;
  int pass = 1;
  int iter = 0;
  double mu = 0.0;
  double displacement = 0.0;
  // objective and residual belong to the iterate the step started from
  double objective = 0.0;
  double residual = 0.0;
};

struct GpiTrace {
  std::vector<GpiRecord> records;
  double res_sat = 0.0;
  double res_bs = 0.0;
};

// -mu log((1/K) sum exp(-x_i / mu)), shifted by min(x) for stability.
double lse_soft_min(const std::vector<double>& x, double mu);
// d lse / d x_i; sums to one.
std::vector<double> soft_min_weights(const std::vector<double>& x, double mu);

double mu_schedule(double mu, const MuSchedule& s);

// Values entering the LSE: Gamma_c,k for interfered TUs, then the SU common
// bounds.
std::vector<double> common_stream_values(const SatelliteForms& forms, const ReportValues& rep,
                                         const Vec& f);

// LSE of common values plus sum of Gamma_p,u.
double sat_objective(const SatelliteForms& forms, const ReportValues& rep, const Vec& f,
                     double mu);
// Sum of Gamma_p,k.
double bs_objective(const BsForms& forms, const Vec& v);

struct Pencil {
  Mat A;
  Mat B;
};

// Positive prefactors are left out; B^{-1} A f is only used up to scale.
Pencil assemble_sat_matrices(const SatelliteForms& forms, const ReportValues& rep, const Vec& f,
                             double mu);
Pencil assemble_bs_matrices(const BsForms& forms, const Vec& v);

// Solve B y = A x with a Hermitian factorization of B.
Vec pencil_step(const Pencil& p, const Vec& x);
// ||y - (x^H y) x|| / ||y|| for y = B^{-1} A x, x unit.
double pencil_residual(const Pencil& p, const Vec& x);

struct KktResidual {
  double sat = 0.0;
  double bs = 0.0;
};

KktResidual kkt_residual(const QuadraticFormSet& forms, const ReportValues& rep, const Vec& f,
                         const Vec& v, double mu);

struct StageResult {
  Vec x;
  bool converged = false;
  int iterations = 0;
  double mu = 0.0;
  double objective = 0.0;
};

StageResult run_sat_stage(const SatelliteForms& forms, const ReportValues& rep, const Vec& init,
                          const GpiSettings& settings, GpiTrace* trace = nullptr);
StageResult run_bs_stage(const BsForms& forms, const Vec& init, const GpiSettings& settings,
                         GpiTrace* trace = nullptr);

struct GpiResult {
  StackedPrecoders p;
  GpiTrace trace;
  bool converged = false;
  int sat_iterations = 0;
  int bs_iterations = 0;
  double final_mu = 0.0;
};

// Both stages from `init`. The satellite stage sees only forms.sat and the
// reports; the BS stage sees only forms.bs.
GpiResult run_stin_gpi(const QuadraticFormSet& forms, const ReportValues& rep,
                       const GpiSettings& settings, const StackedPrecoders& init);

Vec mrt_satellite(const CsitEstimate& csit);
Vec mrt_bs(const CsitEstimate& csit);
StackedPrecoders mrt_init(const CsitEstimate& csit);

}  // namespace stin
