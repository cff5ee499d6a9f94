#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skt {

/// Scalar coefficients of the cross-diffusion predator-prey system
///
///   u_t = div(P^u grad u + P^v grad v) + u (a1 - b1 u + c1 v)
///   v_t = div(Q^u grad u + Q^v grad v) + v (a2 + b2 u - c2 v)
///
/// with P^u = d1 + alpha11 u + alpha12 v, P^v = b11 u,
///      Q^u = b22 v,                      Q^v = d2 + alpha21 u + alpha22 v
/// and zero-flux boundaries on [0, pi]^2.
///
/// The struct itself does not enforce the physical invariants; parameters
/// entering from a file or preset go through validate().
struct ModelParams {
  double d1 = 0.0;
  double d2 = 0.0;
  double a1 = 0.0;
  double b1 = 0.0;
  double c1 = 0.0;
  double a2 = 0.0;
  double b2 = 0.0;
  double c2 = 0.0;
  double alpha11 = 0.0;
  double alpha12 = 0.0;
  double alpha21 = 0.0;
  double alpha22 = 0.0;
  double b11 = 0.0;
  double b22 = 0.0;

  /// Copy with every reaction coefficient set to zero (f = g = 0).
  [[nodiscard]] ModelParams without_reactions() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Parameter names in canonical order, matching the JSON file keys.
const std::vector<std::string>& param_names();

/// Pointer-to-member lookup by canonical name; nullptr for unknown names.
double ModelParams::*param_member(std::string_view name);

/// Returns one message per violated invariant (empty when valid):
/// d1, d2 > 0; b1, c2 > 0; alpha_ij >= 0; b11, b22 >= 0; all finite.
/// With `reactions_required == false` the b1, c2 > 0 requirement is waived,
/// which is what reaction-free diagnostic runs need.
std::vector<std::string> validate(const ModelParams& p, bool reactions_required = true);

/// Named parameter sets from the published simulation table ("case1", "case2").
std::optional<ModelParams> preset(std::string_view name);
const std::vector<std::string>& preset_names();

struct FluxCoeffs {
  double Pu;
  double Pv;
  double Qu;
  double Qv;
};

FluxCoeffs flux_coeffs(const ModelParams& p, double u, double v);

struct Reactions {
  double f;
  double g;
};

Reactions reactions(const ModelParams& p, double u, double v);

struct Densities {
  double u;
  double v;
};

/// Positive root of a1 - b1 u + c1 v = 0, a2 + b2 u - c2 v = 0.
/// Absent when the system is singular or the root is not strictly positive.
std::optional<Densities> coexistence_steady_state(const ModelParams& p);

}  // namespace skt
