#include "sktspec/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <thread>

namespace skt {

const std::vector<NamedIC>& canonical_ics() {
  static const std::vector<NamedIC> ics = {
      {"A", CosineIC{0.5, {{1, 1, 0.3}}}},
      {"B", CosineIC{0.5, {{2, 0, 0.3}}}},
      {"C", GaussianIC{std::numbers::pi / 2, std::numbers::pi / 2, 0.5, 0.5, 0.2}},
  };
  return ics;
}

int default_sweep_threads() {
  if (const char* env = std::getenv("SKTSPEC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min(v, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double sup_deviation(const SpectralState& state, const std::optional<Densities>& reference) {
  const auto [u, v] = synthesize(state, 4 * (state.order() + 1));
  const double ru = reference ? reference->u : u.mean();
  const double rv = reference ? reference->v : v.mean();
  return std::max((u.array() - ru).abs().maxCoeff(), (v.array() - rv).abs().maxCoeff());
}

SweepResult sweep(const ModelParams& params, const RunConfig& config, int threads) {
  SweepResult out;
  out.equilibrium = coexistence_steady_state(params);
  const auto& ics = canonical_ics();
  for (const NamedIC& u : ics) {
    for (const NamedIC& v : ics) out.entries.push_back({u.name, v.name, std::nullopt, 0.0, {}});
  }

  const auto work = [&](std::size_t index) {
    SweepEntry& e = out.entries[index];
    const auto& u0 = ics[index / ics.size()].descriptor;
    const auto& v0 = ics[index % ics.size()].descriptor;
    try {
      RunConfig cfg = config;
      cfg.seed = config.seed + index;
      e.result = run(params, cfg, u0, v0);
      e.final_deviation = sup_deviation(e.result->final_state, out.equilibrium);
    } catch (const std::exception& ex) {
      e.error = ex.what();
      e.final_deviation = std::numeric_limits<double>::quiet_NaN();
    }
  };

  const std::size_t total = out.entries.size();
  const std::size_t workers = std::min<std::size_t>(total, threads > 0 ? threads : default_sweep_threads());
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < total; i = next++) work(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace skt
