#include "sktspec/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace skt {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
// Difference between the fifth- and fourth-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// PI controller constants (Hairer-Wanner).
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;   // largest shrink per step is 1/5
constexpr double kFacMax = 10.0;  // largest growth per step

double max_abs(const Eigen::VectorXd& y) { return y.size() ? y.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> errors;
  if (c.n < 0) errors.emplace_back("n must be >= 0");
  if (!(c.t_max > 0.0) || !std::isfinite(c.t_max)) errors.emplace_back("t_max must be > 0");
  if (!(c.rtol > 0.0)) errors.emplace_back("rtol must be > 0");
  if (!(c.atol > 0.0)) errors.emplace_back("atol must be > 0");
  if (!(c.snapshot_dt > 0.0)) errors.emplace_back("snapshot_dt must be > 0");
  if (c.snapshot_dt > c.t_max) errors.emplace_back("snapshot_dt must be <= t_max");
  if (!(c.steady_tol > 0.0)) errors.emplace_back("steady_tol must be > 0");
  if (!(c.blowup_threshold > 0.0)) errors.emplace_back("blowup_threshold must be > 0");
  if (c.max_steps == 0) errors.emplace_back("max_steps must be > 0");
  return errors;
}

DormandPrince::DormandPrince(const RhsAssembler& assembler, StepperOptions options)
    : assembler_(assembler), opt_(options) {
  if (!(opt_.rtol > 0.0) || !(opt_.atol > 0.0)) throw std::invalid_argument("tolerances must be > 0");
  const Eigen::Index size = 2 * assembler_.modes();
  for (auto& k : k_) k.resize(size);
  tmp_.resize(size);
  y5_.resize(size);
  err_.resize(size);
}

void DormandPrince::stages(const Eigen::VectorXd& y, double dt) {
  const auto f = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) { assembler_.rhs(in.data(), out.data()); };
  if (!fsal_valid_) f(y, k_[0]);
  tmp_ = y + dt * a21 * k_[0];
  f(tmp_, k_[1]);
  tmp_ = y + dt * (a31 * k_[0] + a32 * k_[1]);
  f(tmp_, k_[2]);
  tmp_ = y + dt * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
  f(tmp_, k_[3]);
  tmp_ = y + dt * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
  f(tmp_, k_[4]);
  tmp_ = y + dt * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] + a65 * k_[4]);
  f(tmp_, k_[5]);
  y5_ = y + dt * (a71 * k_[0] + a73 * k_[2] + a74 * k_[3] + a75 * k_[4] + a76 * k_[5]);
  f(y5_, k_[6]);
  err_ = dt * (e1 * k_[0] + e3 * k_[2] + e4 * k_[3] + e5 * k_[4] + e6 * k_[5] + e7 * k_[6]);
  fsal_valid_ = true;  // k_[0] still refers to y until the step is accepted
}

DormandPrince::Step DormandPrince::step(Eigen::VectorXd& y, double& t, double dt_suggest) {
  Step out;
  double dt = std::min(dt_suggest, opt_.dt_max);
  for (;;) {
    if (!(dt >= 1e-14 * std::max(1.0, std::abs(t)))) {
      throw StepUnderflow("step size underflow at t = " + std::to_string(t));
    }
    stages(y, dt);

    double err = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double scale = opt_.atol + opt_.rtol * std::max(std::abs(y[i]), std::abs(y5_[i]));
      err = std::max(err, std::abs(err_[i]) / scale);
    }
    if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();

    const double fac11 = std::pow(err, kExpo);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(err_old_, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
      double dt_next = std::min(dt / fac, opt_.dt_max);
      if (out.rejected > 0) dt_next = std::min(dt_next, dt);
      err_old_ = std::max(err, 1e-4);

      y.swap(y5_);
      std::swap(k_[0], k_[6]);  // first-same-as-last
      t += dt;
      out.dt_used = dt;
      out.dt_next = dt_next;
      out.err_est = err;
      return out;
    }
    ++out.rejected;
    fsal_valid_ = true;  // y unchanged, k_[0] still valid
    const double shrink = std::isfinite(fac11) ? std::min(1.0 / kFacMin, fac11 / kSafety) : 1.0 / kFacMin;
    dt /= shrink;
  }
}

void DormandPrince::step_fixed(Eigen::VectorXd& y, double& t, double dt) {
  stages(y, dt);
  y.swap(y5_);
  std::swap(k_[0], k_[6]);
  t += dt;
}

AdaptiveStep step_adaptive(const RhsAssembler& assembler, const SpectralState& state, double dt_suggest,
                           double rtol, double atol) {
  DormandPrince dp(assembler, {rtol, atol});
  Eigen::VectorXd y = to_flat(state);
  double t = state.t;
  const auto s = dp.step(y, t, dt_suggest);
  return {from_flat(y, assembler.order(), t), s.dt_used, s.dt_next, s.err_est};
}

Diagnostics diagnostics(const RhsAssembler& assembler, const SpectralState& state,
                        const std::optional<LyapunovCert>& cert, double level, int grid) {
  Diagnostics d;
  d.t = state.t;
  const double pi = std::numbers::pi;
  d.mass_u = state.mu1(0, 0) * pi;
  d.mass_v = state.mu2(0, 0) * pi;

  const auto [u, v] = synthesize(state, grid);
  d.min_u = u.minCoeff();
  d.max_u = u.maxCoeff();
  d.min_v = v.minCoeff();
  d.max_v = v.maxCoeff();
  if (cert) {
    double max_h = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      for (Eigen::Index i = 0; i < u.rows(); ++i) max_h = std::max(max_h, eval_H(*cert, u(i, j), v(i, j)).H);
    }
    d.max_H = max_h;
    const double h = pi / grid;
    d.L_value = eval_L(*cert, u, v, level, h * h);
  }

  const Eigen::VectorXd y = to_flat(state);
  Eigen::VectorXd dy(y.size());
  assembler.rhs(y.data(), dy.data());
  d.rhs_norm = max_abs(dy);
  return d;
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::steady_state: return "steady_state";
    case Outcome::t_max_reached: return "t_max_reached";
    case Outcome::blow_up: return "blow_up";
    case Outcome::step_budget_exhausted: return "step_budget_exhausted";
  }
  return "unknown";
}

RunResult run(const ModelParams& params, const RunConfig& config, const InitialDescriptor& u0,
              const InitialDescriptor& v0) {
  if (const auto errors = validate(config); !errors.empty()) throw std::invalid_argument("invalid run config: " + errors.front());
  return run(params, config, project_initial(u0, v0, config.n));
}

RunResult run(const ModelParams& params, const RunConfig& config, const InitialProjection& initial) {
  if (const auto errors = validate(config); !errors.empty()) throw std::invalid_argument("invalid run config: " + errors.front());
  if (initial.state.order() != config.n) throw std::invalid_argument("initial state order differs from config.n");

  RunResult result;
  result.conditions = check_conditions(params);
  result.certificate = find_certificate(params);
  result.initial_min_u = initial.min_u;
  result.initial_min_v = initial.min_v;

  const int grid = 4 * (config.n + 1);
  const RhsAssembler assembler(params, config.n);
  const std::optional<LyapunovCert> cert = result.certificate.cert;

  SpectralState state = initial.state;
  state.t = 0.0;
  if (cert) {
    const auto [u, v] = synthesize(state, grid);
    double h0 = 0.0;
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      for (Eigen::Index i = 0; i < u.rows(); ++i) h0 = std::max(h0, eval_H(*cert, u(i, j), v(i, j)).H);
    }
    result.level = h0;
  }

  const auto record = [&](const SpectralState& s) {
    result.timeseries.push_back(diagnostics(assembler, s, cert, result.level, grid));
    result.snapshots.push_back(s);
  };
  record(state);

  DormandPrince stepper(assembler, {config.rtol, config.atol, config.snapshot_dt});
  Eigen::VectorXd y = to_flat(state);
  double t = 0.0;
  double dt = std::min(config.snapshot_dt, 1e-3);
  const double sup_bound_factor = 2.0 / std::numbers::pi;  // max |phi_jk|
  int steady_hits = 0;
  result.outcome = Outcome::t_max_reached;

  const auto finish = [&](Outcome o, std::string message) {
    result.outcome = o;
    result.message = std::move(message);
  };

  bool stopped = false;
  for (long k = 1; !stopped; ++k) {
    const double t_snap = std::min(config.t_max, k * config.snapshot_dt);
    while (t < t_snap) {
      if (result.steps >= config.max_steps) {
        finish(Outcome::step_budget_exhausted, "step budget exhausted at t = " + std::to_string(t));
        stopped = true;
        break;
      }
      const Eigen::VectorXd y_prev = y;
      const double t_prev = t;
      const double remaining = t_snap - t;
      const bool clipped = dt >= remaining;
      try {
        const auto s = stepper.step(y, t, clipped ? remaining : dt);
        ++result.steps;
        result.rejected_steps += s.rejected;
        if (!clipped || s.dt_used < remaining) dt = s.dt_next;
        if (clipped && s.dt_used >= remaining) t = t_snap;  // absorb rounding
      } catch (const StepUnderflow& e) {
        y = y_prev;
        t = t_prev;
        finish(Outcome::blow_up, e.what());
        stopped = true;
        break;
      }
      if (!y.allFinite()) {
        y = y_prev;
        t = t_prev;
        finish(Outcome::blow_up, "non-finite state");
        stopped = true;
        break;
      }
      const int M = assembler.modes();
      const double bound = sup_bound_factor * std::max(y.head(M).cwiseAbs().sum(), y.tail(M).cwiseAbs().sum());
      if (bound > config.blowup_threshold) {
        const auto [u, v] = synthesize(from_flat(y, config.n, t), grid);
        const double sup = std::max(u.cwiseAbs().maxCoeff(), v.cwiseAbs().maxCoeff());
        if (sup > config.blowup_threshold) {
          finish(Outcome::blow_up, "sup-norm " + std::to_string(sup) + " exceeded threshold");
          stopped = true;
          break;
        }
      }
    }

    state = from_flat(y, config.n, t);
    if (stopped) {
      if (t > result.timeseries.back().t) record(state);
      break;
    }

    record(state);
    const double scale = 1.0 + max_abs(y);
    steady_hits = result.timeseries.back().rhs_norm < config.steady_tol * scale ? steady_hits + 1 : 0;
    if (steady_hits >= 2) {
      finish(Outcome::steady_state, "");
      break;
    }
    if (t_snap >= config.t_max) break;
  }

  result.final_state = state;
  return result;
}

}  // namespace skt
