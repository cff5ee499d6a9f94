#pragma once

#include "sktspec/galerkin.hpp"
#include "sktspec/integrate.hpp"
#include "sktspec/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace skt {

struct NamedIC {
  std::string name;
  InitialDescriptor descriptor;
};

/// The three built-in initial shapes:
///   A  0.5 + 0.3 cos x cos y
///   B  0.5 + 0.3 cos 2x
///   C  0.2 + 0.5 exp(-|x - (pi/2, pi/2)|^2 / (2 * 0.5^2))
const std::vector<NamedIC>& canonical_ics();

struct SweepEntry {
  std::string u_ic;
  std::string v_ic;
  std::optional<RunResult> result;  ///< absent when the run threw
  double final_deviation = 0.0;     ///< sup over the diagnostic grid, both species
  std::string error;
};

struct SweepResult {
  /// Deviation reference; when absent each run is compared to its own spatial mean.
  std::optional<Densities> equilibrium;
  std::vector<SweepEntry> entries;  ///< u-major: (A,A), (A,B), ..., (C,C)
};

/// Parallelism for sweep(): SKTSPEC_THREADS when set to a positive integer,
/// otherwise the number of hardware threads.
int default_sweep_threads();

/// Sup-norm of the synthesized fields minus the reference densities on a
/// 4(n+1) grid; with no reference, minus the field means.
double sup_deviation(const SpectralState& state, const std::optional<Densities>& reference);

/// Runs all nine (u, v) pairs of canonical_ics(). Results do not depend on
/// the thread count.
SweepResult sweep(const ModelParams& params, const RunConfig& config, int threads = 0);

}  // namespace skt
