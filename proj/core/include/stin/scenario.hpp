// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stin/random.hpp"

namespace stin {

inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kSpeedOfLight = 299792458.0;

// Field names match the config-file keys one to one.
struct SystemConfig {
  // satellite UPA
  int M1 = 5;
  int M2 = 5;
  // terrestrial BS UPA
  int N1 = 3;
  int N2 = 3;
  int Ks = 10;
  int Kt = 3;
  int Kt_int = 1;

  double fc = 20e9;
  double Bw = 800e6;
  double d0_sat = 1000e3;
  double sat_coverage_radius = 500e3;
  double bs_coverage_radius = 50e3;
  double bs_height = 30.0;
  double G_sat = 6.0;   // dBi
  double G_user = 0.0;  // dBi
  double G_bs = 6.0;    // dBi
  double kappa_s = 10.0;
  int Lt = 10;
  double rho = 4.0;
  double d1_sat = 1.0;
  double d2_sat = 1.0;
  double d1_bs = 0.5;
  double d2_bs = 0.5;

  double tau_p = 2.0;  // may be +inf (perfect CSIT)
  double snr_db = 30.0;
  double power_ratio = 1.0;  // P_s / P_t
  double noise_temp = 290.0;

  double mu0 = 0.1;
  double zeta = 0.01;
  int t_max = 1000;
  int inner_max = 100;
  double mu_factor = 2.0;
  int mu_trigger = 30;
  double mu_min = 1e-3;
  double mu_max = 10.0;

  // "normalized" sets every large-scale gain to 1 so snr_db is the receive SNR;
  // "physical" keeps the free-space link budget.
  std::string gain_mode = "normalized";
  int report_samples = 1000;
  int report_passes = 2;

  std::uint64_t seed = 1;

  int M() const { return M1 * M2; }
  int N() const { return N1 * N2; }
  double noise_var() const { return 1.0; }
  double Ps() const;
  double Pt() const { return Ps() / power_ratio; }
};

// Throws ConfigError naming the first violated field.
void validate(const SystemConfig& cfg);

// Flat key/value YAML. Unknown keys are rejected; missing keys keep defaults.
SystemConfig parse_config(const std::string& text);
SystemConfig load_config(const std::filesystem::path& path);
std::string dump_config(const SystemConfig& cfg);

// Set one field from its textual value (used for CLI overrides too).
void set_config_field(SystemConfig& cfg, const std::string& key, const std::string& value);

struct Aod {
  double theta = 0.0;  // vertical, [0, pi]
  double phi = 0.0;    // horizontal, [0, 2pi)
};

struct SatelliteLink {
  Aod aod;
  double slant = 0.0;
};

struct TerrestrialUser {
  double distance = 0.0;
  std::vector<Aod> paths;            // Lt NLoS directions
  std::optional<SatelliteLink> sat;  // only for interfered TUs
};

struct UserPlacement {
  std::vector<SatelliteLink> sus;
  std::vector<TerrestrialUser> tus;

  std::vector<int> interfered() const;
};

UserPlacement place_users(const SystemConfig& cfg, Rng& rng);

struct LinkBudget {
  std::vector<double> alpha_su;
  std::vector<double> alpha_tu;  // zero for non-interfered TUs
  std::vector<double> beta;
};

double db_to_linear(double db);

// Free-space budget as printed, independent of gain_mode.
LinkBudget link_budget(const SystemConfig& cfg, const UserPlacement& placement);

// What the channel model should actually use: link_budget() or all-ones.
LinkBudget effective_gains(const SystemConfig& cfg, const UserPlacement& placement);

}  // namespace stin
