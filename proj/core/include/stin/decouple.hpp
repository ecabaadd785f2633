// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "stin/channel.hpp"
#include "stin/rates.hpp"

namespace stin {

enum class ReportMechanism { Average, Instantaneous, Zero };

std::string to_string(ReportMechanism m);
ReportMechanism parse_mechanism(const std::string& s);

// Scalars the BS hands to the satellite so that the satellite objective no
// longer depends on v.
struct ReportValues {
  ReportMechanism mechanism = ReportMechanism::Zero;
  std::vector<double> epsilon;  // per TU: v^H U_p,k v
  std::vector<double> omega;    // per TU: v^H U_c,k v, zero outside the footprint
  double epsilon_hat = 0.0;     // sum_k log2 epsilon_k
};

ReportValues zero_reports(int Kt);
ReportValues instantaneous_reports(const BsForms& forms, const Vec& v);

// Designs v for one sampled block. `pass` is 0 for the MRT bootstrap and >= 1
// for optimized designs.
using BsDesigner = std::function<Vec(const BsForms&, const CsitEstimate&, int pass)>;

// Monte-Carlo expectation over fresh blocks of the same placement. Sample s
// uses an rng seeded from (seed, s). Only the last pass is evaluated: the BS
// design never consumes reports, so earlier passes cannot change it.
ReportValues average_reports(const SystemConfig& cfg, const CovarianceSet& covs,
                             const BsDesigner& design, int samples, int passes,
                             std::uint64_t seed);

inline constexpr double kDenominatorFloor = 1e-30;

// (1/Ks) sum_j log2 f^H (C_p,j + eps_j I) f. Factors that vanish identically
// (TU outside the footprint and eps_j = 0) are left out.
double leakage_log2(const SatelliteForms& forms, const ReportValues& rep, const Vec& f);
bool leakage_factor_active(const SatelliteForms& forms, const ReportValues& rep, int j);

// None of these normalize their argument; callers pass unit vectors except
// when probing derivatives.
std::vector<double> gamma_private_su(const SatelliteForms& forms, const Vec& f,
                                     const ReportValues& rep);
std::vector<double> gamma_private_tu(const BsForms& forms, const Vec& v);
// One value per interfered TU, in forms.interfered order.
std::vector<double> gamma_common_tu(const SatelliteForms& forms, const Vec& f,
                                    const ReportValues& rep);

std::string format_reports(const ReportValues& rep);
ReportValues parse_reports(const std::string& text);
ReportValues load_reports(const std::filesystem::path& path);

}  // namespace stin
