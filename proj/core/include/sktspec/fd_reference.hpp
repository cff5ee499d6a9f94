#pragma once

#include "sktspec/model.hpp"
#include "sktspec/spectral.hpp"

#include <stdexcept>
#include <utility>

namespace skt {

/// Largest explicit step the finite-volume reference accepts: 0.2 h^2 / max(P^u, Q^v).
double fd_stable_dt(const ModelParams& params, const Field& u, const Field& v);

/// Thrown when the explicit stability bound is violated, up front or mid-run.
class StabilityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Second-order finite-volume discretization in flux form on the N x N
/// midpoint grid (N >= 16) with zero-flux boundary faces, classical RK4 in time.
/// Face coefficients are arithmetic means of the adjacent cell values.
std::pair<Field, Field> fd_reference(const ModelParams& params, const Field& u0, const Field& v0,
                                     double t_end, double dt);

}  // namespace skt
