#include <benchmark/benchmark.h>

#include "stin/baselines.hpp"
#include "stin/channel.hpp"
#include "stin/decouple.hpp"
#include "stin/gpi.hpp"
#include "stin/harness.hpp"
#include "stin/rates.hpp"

namespace {

struct Setup {
  stin::SystemConfig cfg;
  stin::CsitEstimate csit;
  stin::QuadraticFormSet forms;
  stin::StackedPrecoders init;
};

Setup make(int side) {
  Setup s;
  s.cfg.M1 = s.cfg.M2 = side;
  s.cfg.Ks = 4;
  s.cfg.Kt = 3;
  s.cfg.Kt_int = 1;
  stin::Rng rng(7);
  const auto placement = stin::place_users(s.cfg, rng);
  const auto covs = stin::spatial_covariances(s.cfg, placement, stin::effective_gains(s.cfg, placement));
  const auto real = stin::draw_channels(covs, rng);
  s.csit = stin::mmse_estimate(real, covs, s.cfg, rng);
  s.forms = stin::build_quadratic_forms(s.csit, s.cfg);
  s.init = stin::mrt_init(s.csit);
  return s;
}

void BM_BuildForms(benchmark::State& st) {
  const auto s = make(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(stin::build_quadratic_forms(s.csit, s.cfg));
}
BENCHMARK(BM_BuildForms)->Arg(2)->Arg(4)->Arg(6);

void BM_SatelliteStep(benchmark::State& st) {
  const auto s = make(static_cast<int>(st.range(0)));
  const auto rep = stin::instantaneous_reports(s.forms.bs, s.init.v);
  for (auto _ : st) {
    const auto p = stin::assemble_sat_matrices(s.forms.sat, rep, s.init.f, s.cfg.mu0);
    benchmark::DoNotOptimize(stin::pencil_step(p, s.init.f));
  }
}
BENCHMARK(BM_SatelliteStep)->Arg(2)->Arg(4)->Arg(6);

void BM_BsStage(benchmark::State& st) {
  const auto s = make(4);
  const auto settings = stin::GpiSettings::from_config(s.cfg);
  for (auto _ : st) benchmark::DoNotOptimize(stin::run_bs_stage(s.forms.bs, s.init.v, settings));
}
BENCHMARK(BM_BsStage);

void BM_Trial(benchmark::State& st) {
  stin::SystemConfig cfg;
  cfg.M1 = cfg.M2 = 4;
  cfg.Ks = 4;
  cfg.Kt = 3;
  cfg.Kt_int = 1;
  const auto m = stin::parse_method("gpi-ins");
  std::uint64_t t = 0;
  for (auto _ : st) benchmark::DoNotOptimize(stin::run_trial(cfg, m, stin::trial_seed(cfg.seed, t++), {}));
}
BENCHMARK(BM_Trial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
