#include "sktspec/fd_reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace skt {

namespace {

struct Rates {
  Field du;
  Field dv;
};

double max_diffusivity(const ModelParams& p, const Field& u, const Field& v) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const FluxCoeffs c = flux_coeffs(p, u(i, j), v(i, j));
      m = std::max({m, c.Pu, c.Qv});
    }
  }
  return m;
}

// Divergence of the face fluxes plus reactions; faces on the boundary carry zero flux.
Rates evaluate(const ModelParams& p, const Field& u, const Field& v, double h) {
  const Eigen::Index N = u.rows();
  Rates r{Field::Zero(N, N), Field::Zero(N, N)};
  const double inv_h2 = 1.0 / (h * h);

  const auto face = [&](Eigen::Index i0, Eigen::Index j0, Eigen::Index i1, Eigen::Index j1) {
    const FluxCoeffs a = flux_coeffs(p, u(i0, j0), v(i0, j0));
    const FluxCoeffs b = flux_coeffs(p, u(i1, j1), v(i1, j1));
    const double gu = u(i1, j1) - u(i0, j0);
    const double gv = v(i1, j1) - v(i0, j0);
    const double fu = 0.5 * (a.Pu + b.Pu) * gu + 0.5 * (a.Pv + b.Pv) * gv;
    const double fv = 0.5 * (a.Qu + b.Qu) * gu + 0.5 * (a.Qv + b.Qv) * gv;
    r.du(i0, j0) += fu * inv_h2;
    r.du(i1, j1) -= fu * inv_h2;
    r.dv(i0, j0) += fv * inv_h2;
    r.dv(i1, j1) -= fv * inv_h2;
  };

  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index i = 0; i + 1 < N; ++i) face(i, j, i + 1, j);
  }
  for (Eigen::Index j = 0; j + 1 < N; ++j) {
    for (Eigen::Index i = 0; i < N; ++i) face(i, j, i, j + 1);
  }
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index i = 0; i < N; ++i) {
      const Reactions f = reactions(p, u(i, j), v(i, j));
      r.du(i, j) += f.f;
      r.dv(i, j) += f.g;
    }
  }
  return r;
}

}  // namespace

double fd_stable_dt(const ModelParams& params, const Field& u, const Field& v) {
  const double h = std::numbers::pi / static_cast<double>(u.rows());
  const double d = max_diffusivity(params, u, v);
  return d > 0.0 ? 0.2 * h * h / d : std::numeric_limits<double>::infinity();
}

std::pair<Field, Field> fd_reference(const ModelParams& params, const Field& u0, const Field& v0,
                                     double t_end, double dt) {
  const Eigen::Index N = u0.rows();
  if (u0.cols() != N || v0.rows() != N || v0.cols() != N) {
    throw std::invalid_argument("fd_reference: fields must be square and of equal shape");
  }
  if (N < 16) throw std::invalid_argument("fd_reference: grid must have N >= 16");
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw std::invalid_argument("fd_reference: need dt > 0 and t_end >= 0");

  const double h = std::numbers::pi / static_cast<double>(N);
  const auto check = [&](const Field& u, const Field& v, double t) {
    const double limit = fd_stable_dt(params, u, v);
    if (!(dt <= limit)) {
      throw StabilityViolation("fd_reference: dt = " + std::to_string(dt) + " exceeds stability bound " +
                               std::to_string(limit) + " at t = " + std::to_string(t));
    }
  };

  Field u = u0, v = v0;
  check(u, v, 0.0);
  const long steps = std::max(1L, std::lround(std::ceil(t_end / dt - 1e-9)));
  const double step = t_end / static_cast<double>(steps);
  if (t_end == 0.0) return {u, v};

  for (long s = 0; s < steps; ++s) {
    const Rates k1 = evaluate(params, u, v, h);
    const Rates k2 = evaluate(params, u + 0.5 * step * k1.du, v + 0.5 * step * k1.dv, h);
    const Rates k3 = evaluate(params, u + 0.5 * step * k2.du, v + 0.5 * step * k2.dv, h);
    const Rates k4 = evaluate(params, u + step * k3.du, v + step * k3.dv, h);
    u += (step / 6.0) * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
    v += (step / 6.0) * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
    if (!u.allFinite() || !v.allFinite()) {
      throw StabilityViolation("fd_reference: non-finite values at step " + std::to_string(s + 1));
    }
    check(u, v, (s + 1) * step);
  }
  return {u, v};
}

}  // namespace skt
