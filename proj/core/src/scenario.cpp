// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#include "stin/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <variant>

#include "stin/errors.hpp"

namespace stin {

double SystemConfig::Ps() const { return std::pow(10.0, snr_db / 10.0) * noise_var(); }

namespace {

using Field = std::variant<int SystemConfig::*, double SystemConfig::*,
                           std::uint64_t SystemConfig::*, std::string SystemConfig::*>;

struct FieldEntry {
  const char* name;
  Field member;
};

const FieldEntry kFields[] = {
    {"M1", &SystemConfig::M1},
    {"M2", &SystemConfig::M2},
    {"N1", &SystemConfig::N1},
    {"N2", &SystemConfig::N2},
    {"Ks", &SystemConfig::Ks},
    {"Kt", &SystemConfig::Kt},
    {"Kt_int", &SystemConfig::Kt_int},
    {"fc", &SystemConfig::fc},
    {"Bw", &SystemConfig::Bw},
    {"d0_sat", &SystemConfig::d0_sat},
    {"sat_coverage_radius", &SystemConfig::sat_coverage_radius},
    {"bs_coverage_radius", &SystemConfig::bs_coverage_radius},
    {"bs_height", &SystemConfig::bs_height},
    {"G_sat", &SystemConfig::G_sat},
    {"G_user", &SystemConfig::G_user},
    {"G_bs", &SystemConfig::G_bs},
    {"kappa_s", &SystemConfig::kappa_s},
    {"Lt", &SystemConfig::Lt},
    {"rho", &SystemConfig::rho},
    {"d1_sat", &SystemConfig::d1_sat},
    {"d2_sat", &SystemConfig::d2_sat},
    {"d1_bs", &SystemConfig::d1_bs},
    {"d2_bs", &SystemConfig::d2_bs},
    {"tau_p", &SystemConfig::tau_p},
    {"snr_db", &SystemConfig::snr_db},
    {"power_ratio", &SystemConfig::power_ratio},
    {"noise_temp", &SystemConfig::noise_temp},
    {"mu0", &SystemConfig::mu0},
    {"zeta", &SystemConfig::zeta},
    {"t_max", &SystemConfig::t_max},
    {"inner_max", &SystemConfig::inner_max},
    {"mu_factor", &SystemConfig::mu_factor},
    {"mu_trigger", &SystemConfig::mu_trigger},
    {"mu_min", &SystemConfig::mu_min},
    {"mu_max", &SystemConfig::mu_max},
    {"gain_mode", &SystemConfig::gain_mode},
    {"report_samples", &SystemConfig::report_samples},
    {"report_passes", &SystemConfig::report_passes},
    {"seed", &SystemConfig::seed},
};

double parse_double(const std::string& key, std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "inf" || s == ".inf" || s == "+inf" || s == "infinity")
    return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError(key, "trailing characters in '" + s + "'");
  return v;
}

template <typename T>
T parse_integer(const std::string& key, const std::string& s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ConfigError(key, "expected an integer, got '" + s + "'");
  return v;
}

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ConfigError(field, what);
}

// Uniform point on a disc of radius r (area measure), returned as (x, y).
std::pair<double, double> disc_point(Rng& rng, double r) {
  const double rad = r * std::sqrt(uniform01(rng));
  const double ang = 2.0 * M_PI * uniform01(rng);
  return {rad * std::cos(ang), rad * std::sin(ang)};
}

double wrap_2pi(double a) {
  double w = std::fmod(a, 2.0 * M_PI);
  if (w < 0) w += 2.0 * M_PI;
  if (w >= 2.0 * M_PI) w = 0.0;
  return w;
}

// Direction seen from a satellite at nadir height d0 above the origin.
SatelliteLink satellite_link(double x, double y, double d0) {
  const double rho_h = std::hypot(x, y);
  SatelliteLink s;
  s.aod.theta = std::atan2(rho_h, d0);
  s.aod.phi = rho_h > 0 ? wrap_2pi(std::atan2(y, x)) : 0.0;
  s.slant = std::hypot(rho_h, d0);
  return s;
}

}  // namespace

void set_config_field(SystemConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : kFields) {
    if (key != f.name) continue;
    std::visit(
        [&](auto member) {
          using T = std::remove_cvref_t<decltype(cfg.*member)>;
          if constexpr (std::is_same_v<T, int>) {
            cfg.*member = parse_integer<int>(key, value);
          } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            cfg.*member = parse_integer<std::uint64_t>(key, value);
          } else if constexpr (std::is_same_v<T, double>) {
            cfg.*member = parse_double(key, value);
          } else {
            cfg.*member = value;
          }
        },
        f.member);
    return;
  }
  throw ConfigError(key, "unknown configuration key");
}

void validate(const SystemConfig& c) {
  require(c.M1 >= 1, "M1", "must be >= 1");
  require(c.M2 >= 1, "M2", "must be >= 1");
  require(c.N1 >= 1, "N1", "must be >= 1");
  require(c.N2 >= 1, "N2", "must be >= 1");
  require(c.Ks >= 1, "Ks", "must be >= 1");
  require(c.Kt >= 1, "Kt", "must be >= 1");
  require(c.Kt_int >= 0, "Kt_int", "must be >= 0");
  require(c.Kt_int <= c.Kt, "Kt_int", "must not exceed Kt");
  require(c.fc > 0, "fc", "must be positive");
  require(c.Bw > 0, "Bw", "must be positive");
  require(c.d0_sat > 0, "d0_sat", "must be positive");
  require(c.sat_coverage_radius >= 0, "sat_coverage_radius", "must be non-negative");
  require(c.bs_coverage_radius >= 0, "bs_coverage_radius", "must be non-negative");
  require(c.bs_height > 0, "bs_height", "must be positive");
  require(std::isfinite(c.G_sat), "G_sat", "must be finite");
  require(std::isfinite(c.G_user), "G_user", "must be finite");
  require(std::isfinite(c.G_bs), "G_bs", "must be finite");
  require(c.kappa_s >= 0, "kappa_s", "must be >= 0");
  require(c.Lt >= 1, "Lt", "must be >= 1");
  require(c.rho > 0, "rho", "must be positive");
  require(c.d1_sat > 0, "d1_sat", "must be positive");
  require(c.d2_sat > 0, "d2_sat", "must be positive");
  require(c.d1_bs > 0, "d1_bs", "must be positive");
  require(c.d2_bs > 0, "d2_bs", "must be positive");
  require(c.tau_p >= 0, "tau_p", "must be >= 0");
  require(std::isfinite(c.snr_db), "snr_db", "must be finite");
  require(c.power_ratio > 0 && std::isfinite(c.power_ratio), "power_ratio", "must be positive");
  require(c.noise_temp > 0, "noise_temp", "must be positive");
  require(c.mu0 > 0, "mu0", "must be positive");
  require(c.zeta > 0, "zeta", "must be positive");
  require(c.t_max >= 1, "t_max", "must be >= 1");
  require(c.inner_max >= 1, "inner_max", "must be >= 1");
  require(c.mu_factor > 0 && std::isfinite(c.mu_factor), "mu_factor", "must be positive");
  require(c.mu_trigger >= 1, "mu_trigger", "must be >= 1");
  require(c.mu_min > 0, "mu_min", "must be positive");
  require(c.mu_max >= c.mu_min, "mu_max", "must be >= mu_min");
  require(c.gain_mode == "normalized" || c.gain_mode == "physical", "gain_mode",
          "must be 'normalized' or 'physical'");
  require(c.report_samples >= 1, "report_samples", "must be >= 1");
  require(c.report_passes >= 1, "report_passes", "must be >= 1");
}

SystemConfig parse_config(const std::string& text) {
  SystemConfig cfg;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  if (root.IsNull()) {
    validate(cfg);
    return cfg;
  }
  if (!root.IsMap()) throw ConfigError("", "config must be a flat key/value map");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!kv.second.IsScalar()) throw ConfigError(key, "value must be a scalar");
    set_config_field(cfg, key, kv.second.Scalar());
  }
  validate(cfg);
  return cfg;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const SystemConfig& cfg) {
  std::string out;
  for (const auto& f : kFields) {
    out += f.name;
    out += ": ";
    std::visit(
        [&](auto member) {
          using T = std::remove_cvref_t<decltype(cfg.*member)>;
          if constexpr (std::is_same_v<T, double>) {
            out += fmt_double(cfg.*member);
          } else if constexpr (std::is_same_v<T, std::string>) {
            out += cfg.*member;
          } else {
            out += std::to_string(cfg.*member);
          }
        },
        f.member);
    out += '\n';
  }
  return out;
}

std::vector<int> UserPlacement::interfered() const {
  std::vector<int> idx;
  for (int k = 0; k < static_cast<int>(tus.size()); ++k)
    if (tus[k].sat) idx.push_back(k);
  return idx;
}

UserPlacement place_users(const SystemConfig& cfg, Rng& rng) {
  UserPlacement p;
  p.sus.reserve(cfg.Ks);
  for (int u = 0; u < cfg.Ks; ++u) {
    auto [x, y] = disc_point(rng, cfg.sat_coverage_radius);
    p.sus.push_back(satellite_link(x, y, cfg.d0_sat));
  }

  // BS disc sits inside the satellite footprint, touching its rim when it fits.
  const double bs_x = std::max(0.0, cfg.sat_coverage_radius - cfg.bs_coverage_radius);

  p.tus.reserve(cfg.Kt);
  for (int k = 0; k < cfg.Kt; ++k) {
    TerrestrialUser tu;
    auto [x, y] = disc_point(rng, cfg.bs_coverage_radius);
    tu.distance = std::sqrt(x * x + y * y + cfg.bs_height * cfg.bs_height);
    tu.paths.reserve(cfg.Lt);
    for (int l = 0; l < cfg.Lt; ++l) {
      Aod a;
      a.theta = M_PI * uniform01(rng);
      a.phi = 2.0 * M_PI * uniform01(rng);
      tu.paths.push_back(a);
    }
    if (k < cfg.Kt_int) tu.sat = satellite_link(bs_x + x, y, cfg.d0_sat);
    p.tus.push_back(std::move(tu));
  }
  return p;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

LinkBudget link_budget(const SystemConfig& cfg, const UserPlacement& placement) {
  const double lambda_term = kSpeedOfLight / (4.0 * M_PI * cfg.fc);
  const double noise = kBoltzmann * cfg.noise_temp * cfg.Bw;
  const double sat_gain = db_to_linear(cfg.G_sat) * db_to_linear(cfg.G_user) / noise;
  const double bs_gain = db_to_linear(cfg.G_bs) * db_to_linear(cfg.G_user) / noise;
  const double fspl_sat = std::pow(lambda_term / cfg.d0_sat, 2);

  LinkBudget lb;
  lb.alpha_su.assign(placement.sus.size(), sat_gain * fspl_sat);
  for (const auto& tu : placement.tus) {
    lb.alpha_tu.push_back(tu.sat ? sat_gain * fspl_sat : 0.0);
    lb.beta.push_back(bs_gain * lambda_term * lambda_term * std::pow(tu.distance, -cfg.rho));
  }
  return lb;
}

LinkBudget effective_gains(const SystemConfig& cfg, const UserPlacement& placement) {
  LinkBudget lb = link_budget(cfg, placement);
  if (cfg.gain_mode == "physical") return lb;
  for (auto& a : lb.alpha_su) a = 1.0;
  for (auto& a : lb.alpha_tu) a = a > 0 ? 1.0 : 0.0;
  for (auto& b : lb.beta) b = 1.0;
  return lb;
}

}  // namespace stin
