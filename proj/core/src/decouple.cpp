// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#include "stin/decouple.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stin/errors.hpp"

namespace stin {

namespace {

// Neumaier summation; keeps the average independent of accumulation noise.
struct CompensatedSum {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

double floored(double x) { return std::max(x, kDenominatorFloor); }

std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

std::string to_string(ReportMechanism m) {
  switch (m) {
    case ReportMechanism::Average: return "average";
    case ReportMechanism::Instantaneous: return "instantaneous";
    case ReportMechanism::Zero: return "zero";
  }
  return "zero";
}

ReportMechanism parse_mechanism(const std::string& s) {
  if (s == "average" || s == "avg") return ReportMechanism::Average;
  if (s == "instantaneous" || s == "ins") return ReportMechanism::Instantaneous;
  if (s == "zero") return ReportMechanism::Zero;
  throw ConfigError("mechanism", "unknown report mechanism '" + s + "'");
}

ReportValues zero_reports(int Kt) {
  ReportValues r;
  r.mechanism = ReportMechanism::Zero;
  r.epsilon.assign(Kt, 0.0);
  r.omega.assign(Kt, 0.0);
  return r;
}

ReportValues instantaneous_reports(const BsForms& forms, const Vec& v) {
  ReportValues r;
  r.mechanism = ReportMechanism::Instantaneous;
  r.epsilon.assign(forms.Kt, 0.0);
  r.omega.assign(forms.Kt, 0.0);
  for (int k = 0; k < forms.Kt; ++k) {
    r.epsilon[k] = qf(forms.U_p_bs[k], v);
    r.epsilon_hat += std::log2(r.epsilon[k]);
  }
  for (std::size_t i = 0; i < forms.interfered.size(); ++i)
    r.omega[forms.interfered[i]] = qf(forms.U_c_bs[i], v);
  return r;
}

ReportValues average_reports(const SystemConfig& cfg, const CovarianceSet& covs,
                             const BsDesigner& design, int samples, int passes,
                             std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("average reports need at least one sample");
  if (passes < 1) throw std::invalid_argument("average reports need at least one pass");
  const int Kt = covs.Kt;
  std::vector<CompensatedSum> eps(Kt), om(Kt);
  CompensatedSum eps_hat;

  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(s)}));
    const auto real = draw_channels(covs, rng);
    const auto csit = mmse_estimate(real, covs, cfg, rng);
    const auto forms = build_bs_forms(csit, cfg);
    const Vec v = design(forms, csit, passes - 1);
    const auto inst = instantaneous_reports(forms, v);
    for (int k = 0; k < Kt; ++k) {
      eps[k].add(inst.epsilon[k]);
      om[k].add(inst.omega[k]);
    }
    eps_hat.add(inst.epsilon_hat);
  }

  ReportValues r;
  r.mechanism = ReportMechanism::Average;
  for (int k = 0; k < Kt; ++k) {
    r.epsilon.push_back(eps[k].value() / samples);
    r.omega.push_back(om[k].value() / samples);
  }
  r.epsilon_hat = eps_hat.value() / samples;
  return r;
}

bool leakage_factor_active(const SatelliteForms& forms, const ReportValues& rep, int j) {
  const bool in_footprint =
      std::find(forms.interfered.begin(), forms.interfered.end(), j) != forms.interfered.end();
  return in_footprint || rep.epsilon[j] > 0.0;
}

double leakage_log2(const SatelliteForms& forms, const ReportValues& rep, const Vec& f) {
  const double ff = f.squaredNorm();
  double acc = 0.0;
  for (int j = 0; j < forms.Kt; ++j) {
    if (!leakage_factor_active(forms, rep, j)) continue;
    acc += std::log2(floored(qf(forms.C_p_bs[j], f) + rep.epsilon[j] * ff));
  }
  return acc / forms.Ks;
}

std::vector<double> gamma_private_su(const SatelliteForms& forms, const Vec& f,
                                     const ReportValues& rep) {
  const double log_l = leakage_log2(forms, rep, f);
  std::vector<double> out;
  for (int u = 0; u < forms.Ks; ++u) {
    const double up = qf(forms.U_p_sat[u], f);
    const double num = qf(forms.S_p_sat[u], f) + up;
    out.push_back(rep.epsilon_hat / forms.Ks + std::log2(num / floored(up)) - log_l);
  }
  return out;
}

std::vector<double> gamma_private_tu(const BsForms& forms, const Vec& v) {
  std::vector<double> out;
  for (int k = 0; k < forms.Kt; ++k)
    out.push_back(std::log2(floored(qf(forms.S_p_bs[k], v)) / floored(qf(forms.U_p_bs[k], v))));
  return out;
}

std::vector<double> gamma_common_tu(const SatelliteForms& forms, const Vec& f,
                                    const ReportValues& rep) {
  const double ff = f.squaredNorm();
  std::vector<double> out;
  for (std::size_t i = 0; i < forms.interfered.size(); ++i) {
    const double w = rep.omega[forms.interfered[i]] * ff;
    const double c = qf(forms.C_c_bs[i], f) + w;
    out.push_back(std::log2((qf(forms.S_c_bs[i], f) + c) / floored(c)));
  }
  return out;
}

std::string format_reports(const ReportValues& rep) {
  auto list = [](const std::vector<double>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
    return s + "]";
  };
  std::string out;
  out += "mechanism: " + to_string(rep.mechanism) + "\n";
  out += "epsilon_hat: " + fmt(rep.epsilon_hat) + "\n";
  out += "epsilon: " + list(rep.epsilon) + "\n";
  out += "omega: " + list(rep.omega) + "\n";
  return out;
}

ReportValues parse_reports(const std::string& text) {
  ReportValues r;
  try {
    const YAML::Node root = YAML::Load(text);
    if (!root.IsMap()) throw ConfigError("reports", "expected a key/value map");
    r.mechanism = parse_mechanism(root["mechanism"].as<std::string>("average"));
    r.epsilon_hat = root["epsilon_hat"].as<double>(0.0);
    r.epsilon = root["epsilon"].as<std::vector<double>>(std::vector<double>{});
    r.omega = root["omega"].as<std::vector<double>>(std::vector<double>{});
  } catch (const YAML::Exception& e) {
    throw ConfigError("reports", std::string("parse error: ") + e.what());
  }
  if (r.omega.size() != r.epsilon.size())
    throw ConfigError("omega", "must have one entry per TU, like epsilon");
  for (double x : r.epsilon)
    if (!(x >= 0)) throw ConfigError("epsilon", "entries must be non-negative");
  for (double x : r.omega)
    if (!(x >= 0)) throw ConfigError("omega", "entries must be non-negative");
  return r;
}

ReportValues load_reports(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reports file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_reports(ss.str());
}

}  // namespace stin
