#pragma once

#include "sktspec/conditions.hpp"
#include "sktspec/galerkin.hpp"
#include "sktspec/lyapunov.hpp"
#include "sktspec/spectral.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace skt {

struct RunConfig {
  int n = 8;
  double t_max = 200.0;
  double rtol = 1e-7;
  double atol = 1e-10;
  double snapshot_dt = 1.0;
  double steady_tol = 1e-8;
  double blowup_threshold = 1e6;
  std::size_t max_steps = 2'000'000;
  std::uint64_t seed = 0;
};

/// One message per violated constraint; empty when the config is usable.
std::vector<std::string> validate(const RunConfig& cfg);

/// Thrown by the stepper when the step size collapses below 1e-14 of the
/// time scale; the driver reports it as blow-up.
class StepUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepperOptions {
  double rtol = 1e-7;
  double atol = 1e-10;
  double dt_max = std::numeric_limits<double>::infinity();
};

/// Dormand-Prince 5(4) with PI step-size control on the coefficient ODEs.
/// The error test uses the weighted max-norm
///   max_i |err_i| / (atol + rtol max(|y_i|, |y_new_i|)) <= 1.
class DormandPrince {
 public:
  DormandPrince(const RhsAssembler& assembler, StepperOptions options);

  struct Step {
    double dt_used = 0.0;
    double dt_next = 0.0;
    double err_est = 0.0;  ///< normalized error of the accepted step (<= 1)
    int rejected = 0;
  };

  /// Advances (y, t) by one accepted step starting from dt_suggest.
  Step step(Eigen::VectorXd& y, double& t, double dt_suggest);

  /// One step of the fifth-order solution with fixed dt and no error control.
  void step_fixed(Eigen::VectorXd& y, double& t, double dt);

  /// Drops the cached first stage; call after modifying y externally.
  void reset() { fsal_valid_ = false; }

 private:
  void stages(const Eigen::VectorXd& y, double dt);

  const RhsAssembler& assembler_;
  StepperOptions opt_;
  std::array<Eigen::VectorXd, 7> k_;
  Eigen::VectorXd tmp_, y5_, err_;
  bool fsal_valid_ = false;
  double err_old_ = 1e-4;
};

struct AdaptiveStep {
  SpectralState state;
  double dt_used = 0.0;
  double dt_next = 0.0;
  double err_est = 0.0;
};

/// Single accepted step from `state`; stateless convenience over DormandPrince.
AdaptiveStep step_adaptive(const RhsAssembler& assembler, const SpectralState& state,
                           double dt_suggest, double rtol, double atol);

struct Diagnostics {
  double t = 0.0;
  double mass_u = 0.0;
  double mass_v = 0.0;
  double min_u = 0.0;
  double max_u = 0.0;
  double min_v = 0.0;
  double max_v = 0.0;
  double max_H = 0.0;    ///< 0 when no certificate is supplied
  double L_value = 0.0;  ///< 0 when no certificate is supplied
  double rhs_norm = 0.0;
};

/// Synthesizes on a grid x grid midpoint mesh. Masses are mode (0,0) times pi.
Diagnostics diagnostics(const RhsAssembler& assembler, const SpectralState& state,
                        const std::optional<LyapunovCert>& cert, double level, int grid);

enum class Outcome { steady_state, t_max_reached, blow_up, step_budget_exhausted };

std::string_view to_string(Outcome outcome);

struct RunResult {
  Outcome outcome = Outcome::t_max_reached;
  SpectralState final_state;
  std::vector<Diagnostics> timeseries;
  std::vector<SpectralState> snapshots;  ///< parallel to timeseries
  ConditionReport conditions;
  CertificateSearch certificate;
  double level = 0.0;  ///< the C used for L(t): sup of H over the initial fields
  double initial_min_u = 0.0;
  double initial_min_v = 0.0;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  std::string message;
};

/// Integrates the projected initial data until t_max, a sustained steady
/// state, blow-up or the step budget, recording diagnostics every snapshot_dt.
/// Throws std::invalid_argument for an invalid config or negative data.
RunResult run(const ModelParams& params, const RunConfig& config, const InitialDescriptor& u0,
              const InitialDescriptor& v0);

/// Same, from an already projected state (its order must equal config.n).
RunResult run(const ModelParams& params, const RunConfig& config, const InitialProjection& initial);

}  // namespace skt
