#include "sktspec/lyapunov.hpp"

#include "uniform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace skt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

// Open interval of admissible values for one weight from the two-sided
// discriminant condition |b w - gap| < 2 sqrt(prod * excess).
struct Interval {
  double lo;
  double hi;
  [[nodiscard]] bool empty() const { return !(lo < hi); }
};

Interval discriminant_window(double gap, double prod, double b, double excess) {
  const double r = 2.0 * std::sqrt(prod * excess);
  if (b > 0.0) {
    return {std::max(0.0, (gap - r) / b), (gap + r) / b};
  }
  // b == 0: the condition no longer involves the weight.
  if (gap * gap < 4.0 * prod * excess) return {0.0, kInf};
  return {0.0, 0.0};
}

// Picks a weight strictly inside (lo, hi), balanced in log scale.
double place_inside(double lo, double hi, double K) {
  const bool lo_open = !(lo > 0.0);
  const bool hi_open = std::isinf(hi);
  if (!lo_open && !hi_open) return std::sqrt(lo * hi);
  if (lo_open && hi_open) return K;
  if (lo_open) return std::min(K, 0.5 * hi);
  return std::max(K, 2.0 * lo);
}

std::optional<LyapunovCert> strict_placement(const ModelParams& p, double excess) {
  const double K2 = 1.0 + excess;
  const double K = std::sqrt(K2);
  const Interval wl = discriminant_window(p.alpha11 - p.alpha21, p.alpha11 * p.alpha21, p.b11, excess);
  const Interval wm = discriminant_window(p.alpha22 - p.alpha12, p.alpha12 * p.alpha22, p.b22, excess);
  if (wl.empty() || wm.empty()) return std::nullopt;

  // lambda = K^2 / mu maps the mu interval onto a lambda interval.
  const double lo = std::max(wl.lo, std::isinf(wm.hi) ? 0.0 : K2 / wm.hi);
  const double hi = std::min(wl.hi, wm.lo > 0.0 ? K2 / wm.lo : kInf);
  if (!(lo < hi)) return std::nullopt;

  const double lambda = place_inside(lo, hi, K);
  LyapunovCert cert = make_certificate(p, lambda, K2 / lambda, excess);
  if (!cert.feasible || !cert.discriminants_negative) return std::nullopt;
  return cert;
}

LyapunovCert balanced_placement(const ModelParams& p, double excess) {
  const double K2 = 1.0 + excess;
  const double K = std::sqrt(K2);
  const Windows w = windows(p, excess);
  double lambda = K;
  if (std::isfinite(w.lambda_hi) && std::isfinite(w.mu_hi)) {
    lambda = K * std::sqrt(w.lambda_hi / w.mu_hi);
  } else if (std::isfinite(w.lambda_hi)) {
    lambda = std::min(K, 0.9 * w.lambda_hi);
  } else if (std::isfinite(w.mu_hi)) {
    lambda = std::max(K, K2 / (0.9 * w.mu_hi));
  }
  return make_certificate(p, lambda, K2 / lambda, excess);
}

bool windows_feasible(const ModelParams& p, double excess) {
  const Windows w = windows(p, excess);
  if (std::isinf(w.lambda_hi) || std::isinf(w.mu_hi)) return w.lambda_hi > 0.0 && w.mu_hi > 0.0;
  return w.lambda_hi > 0.0 && w.mu_hi > 0.0 && w.lambda_hi * w.mu_hi > 1.0 + excess;
}

}  // namespace

LyapunovCert make_certificate(const ModelParams& p, double lambda, double mu,
                              std::optional<double> k_excess) {
  LyapunovCert c;
  c.lambda = lambda;
  c.mu = mu;
  c.k_excess = k_excess.value_or(lambda * mu - 1.0);
  c.K = std::sqrt(1.0 + c.k_excess);
  const Discriminants d = discriminants(p, lambda, mu, c.k_excess);
  c.delta_u = d.delta_u;
  c.delta_v = d.delta_v;
  c.delta_d = d.delta_d;
  const Windows w = windows(p, std::max(0.0, c.k_excess));
  c.window_lambda_hi = w.lambda_hi;
  c.window_mu_hi = w.mu_hi;
  c.feasible = c.k_excess > 0.0 && c.K > 1.0 && lambda > 0.0 && mu > 0.0 &&
               lambda < w.lambda_hi && mu < w.mu_hi;
  c.discriminants_negative = c.delta_u < 0.0 && c.delta_v < 0.0;
  return c;
}

HValues eval_H(const LyapunovCert& cert, double u, double v) {
  const double l = cert.lambda, m = cert.mu;
  return {0.5 * l * u * u + u * v + 0.5 * m * v * v, l * u + v, u + m * v, l, 1.0, m};
}

Discriminants discriminants(const ModelParams& p, double lambda, double mu, double k_excess) {
  const double su = p.b11 * lambda - p.alpha11 + p.alpha21;
  const double sv = mu * p.b22 - p.alpha22 + p.alpha12;
  const double sd = p.d1 + p.d2;
  return {su * su - 4.0 * p.alpha11 * p.alpha21 * k_excess,
          sv * sv - 4.0 * p.alpha12 * p.alpha22 * k_excess,
          sd * sd - 4.0 * (1.0 + k_excess) * p.d1 * p.d2};
}

Discriminants discriminants(const ModelParams& p, const LyapunovCert& cert) {
  return discriminants(p, cert.lambda, cert.mu, cert.k_excess);
}

Windows windows(const ModelParams& p, double k_excess) {
  const double ru = (p.alpha11 - p.alpha21) + 2.0 * std::sqrt(p.alpha21 * p.alpha11 * k_excess);
  const double rv = (p.alpha22 - p.alpha12) + 2.0 * std::sqrt(p.alpha12 * p.alpha22 * k_excess);
  return {p.b11 > 0.0 ? ru / p.b11 : kInf, p.b22 > 0.0 ? rv / p.b22 : kInf};
}

CertificateSearch find_certificate(const ModelParams& p, const CertificateSearchConfig& cfg) {
  CertificateSearch out;
  auto violated = [&](std::string what) {
    out.status = CertificateStatus::precondition_violated;
    out.detail = std::move(what);
    return out;
  };
  if (!(p.alpha11 > p.alpha21)) return violated("alpha11 > alpha21 required");
  if (!(p.alpha22 > p.alpha12)) return violated("alpha22 > alpha12 required");
  if (p.alpha21 < 0.0 || p.alpha12 < 0.0) return violated("alpha_ij >= 0 required");
  if (p.b11 < 0.0 || p.b22 < 0.0) return violated("b11, b22 >= 0 required");
  if (!(cfg.k_max > 1.0) || !std::isfinite(cfg.k_max)) return violated("k_max > 1 required");
  if (cfg.levels < 1) return violated("at least one grid level required");

  // Increasing K^2 - 1, skipping points indistinguishable from K = 1.
  std::vector<double> grid;
  const double span = cfg.k_max * cfg.k_max - 1.0;
  for (int k = cfg.levels - 1; k >= 0; --k) {
    const double e = span * std::pow(10.0, -k);
    if (1.0 + e > 1.0 && std::sqrt(1.0 + e) > 1.0) grid.push_back(e);
  }
  if (grid.empty()) return violated("search grid has no point with K > 1");

  if (!windows_feasible(p, grid.front())) {
    const Windows w = windows(p, grid.front());
    out.status = CertificateStatus::infeasible;
    out.detail = "lambda/mu windows are not jointly satisfiable near K = 1 (window product " +
                 std::to_string(w.lambda_hi * w.mu_hi) + " <= K^2)";
    return out;
  }

  std::size_t run_end = 1;
  while (run_end < grid.size() && windows_feasible(p, grid[run_end])) ++run_end;

  for (std::size_t i = run_end; i-- > 0;) {
    if (auto cert = strict_placement(p, grid[i])) {
      out.status = CertificateStatus::found;
      out.cert = *cert;
      return out;
    }
  }

  out.status = CertificateStatus::found;
  out.cert = balanced_placement(p, grid.front());
  out.detail = "no grid point with strictly negative discriminants; windows satisfied only";
  return out;
}

double QuadraticForm::operator()(const Vec2& gu, const Vec2& gv) const {
  return A * dot(gu, gu) + B * dot(gu, gv) + C * dot(gv, gv);
}

PsiCoefficients psi_coefficients(const ModelParams& p, const LyapunovCert& cert) {
  const double Huu = cert.lambda, Huv = 1.0, Hvv = cert.mu;
  PsiCoefficients c;
  c.u = {p.alpha11 * Huu, p.b11 * Huu + (p.alpha11 + p.alpha21) * Huv, p.b11 * Huv + p.alpha21 * Hvv};
  c.v = {p.alpha12 * Huu + p.b22 * Huv, (p.alpha12 + p.alpha22) * Huv + p.b22 * Hvv, p.alpha22 * Hvv};
  c.d = {p.d1 * Huu, (p.d1 + p.d2) * Huv, p.d2 * Hvv};
  return c;
}

PsiForms eval_psi_forms(const ModelParams& p, const LyapunovCert& cert, double u, double v,
                        const Vec2& gu, const Vec2& gv) {
  const PsiCoefficients c = psi_coefficients(p, cert);
  PsiForms out{c.u(gu, gv), c.v(gu, gv), c.d(gu, gv), 0.0};

  const FluxCoeffs fl = flux_coeffs(p, u, v);
  const double Huu = cert.lambda, Huv = 1.0, Hvv = cert.mu;
  Vec2 P, Q, gHu, gHv;
  for (int i = 0; i < 2; ++i) {
    P[i] = fl.Pu * gu[i] + fl.Pv * gv[i];
    Q[i] = fl.Qu * gu[i] + fl.Qv * gv[i];
    gHu[i] = Huu * gu[i] + Huv * gv[i];
    gHv[i] = Huv * gu[i] + Hvv * gv[i];
  }
  out.psi = dot(P, gHu) + dot(Q, gHv);
  return out;
}

std::array<double, 4> phi_coefficients(const ModelParams& p, const LyapunovCert& cert) {
  return {cert.lambda * p.b1, -cert.lambda * p.c1 + p.b1 - p.b2, -p.c1 + p.c2 - cert.mu * p.b2,
          cert.mu * p.c2};
}

double reaction_sign_value(const ModelParams& p, const LyapunovCert& cert, double u, double v) {
  const auto c = phi_coefficients(p, cert);
  const double phi = c[0] * u * u * u + c[1] * u * u * v + c[2] * u * v * v + c[3] * v * v * v;
  return p.a1 * u * (cert.lambda * u + v) + p.a2 * v * (u + cert.mu * v) - phi;
}

std::optional<double> reaction_sign_at(const ModelParams& p, const LyapunovCert& cert, double level,
                                       double u, double v) {
  if (!(eval_H(cert, u, v).H > level)) return std::nullopt;
  return reaction_sign_value(p, cert, u, v);
}

SignReport check_reaction_sign(const ModelParams& p, const LyapunovCert& cert, double level,
                               std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("check_reaction_sign: samples must be >= 1");
  SignReport r;
  r.phi_coeffs = phi_coefficients(p, cert);
  r.level = level;
  r.samples = samples;
  detail::Uniform01 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const double u = std::pow(10.0, rng(-3.0, 3.0));
    const double v = std::pow(10.0, rng(-3.0, 3.0));
    const auto value = reaction_sign_at(p, cert, level, u, v);
    if (!value) continue;
    ++r.in_region;
    if (*value > 0.0) {
      ++r.violations;
      r.max_violation = std::max(r.max_violation, *value);
    }
  }
  r.violation_fraction =
      r.in_region > 0 ? static_cast<double>(r.violations) / static_cast<double>(r.in_region) : 0.0;
  return r;
}

FluxQuotient min_flux_quotient(const ModelParams& p, const LyapunovCert& cert, double level,
                               std::size_t samples, std::uint64_t seed) {
  FluxQuotient q;
  q.min_quotient = kInf;
  q.min_scaled = kInf;
  detail::Uniform01 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const double u = std::pow(10.0, rng(-3.0, 3.0));
    const double v = std::pow(10.0, rng(-3.0, 3.0));
    const Vec2 gu{rng(-1.0, 1.0), rng(-1.0, 1.0)};
    const Vec2 gv{rng(-1.0, 1.0), rng(-1.0, 1.0)};
    const HValues h = eval_H(cert, u, v);
    if (!(h.H > level)) continue;
    const FluxCoeffs f = flux_coeffs(p, u, v);
    Vec2 flux, gradH;
    for (int i = 0; i < 2; ++i) {
      flux[i] = (h.Hu * f.Pu + h.Hv * f.Qu) * gu[i] + (h.Hu * f.Pv + h.Hv * f.Qv) * gv[i];
      gradH[i] = h.Hu * gu[i] + h.Hv * gv[i];
    }
    const double norm2 = dot(gradH, gradH);
    if (!(norm2 > 0.0)) continue;
    const double quotient = dot(flux, gradH) / norm2;
    q.min_quotient = std::min(q.min_quotient, quotient);
    q.min_scaled = std::min(q.min_scaled, quotient / (1.0 + u + v));
    ++q.samples;
  }
  if (q.samples == 0) q.min_quotient = q.min_scaled = 0.0;
  return q;
}

double eval_L(const LyapunovCert& cert, const Eigen::MatrixXd& field_u, const Eigen::MatrixXd& field_v,
              double level, double cell_area) {
  if (field_u.rows() != field_v.rows() || field_u.cols() != field_v.cols()) {
    throw std::invalid_argument("eval_L: field shapes differ");
  }
  if (!(cell_area > 0.0)) throw std::invalid_argument("eval_L: cell_area must be > 0");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < field_u.cols(); ++j) {
    for (Eigen::Index i = 0; i < field_u.rows(); ++i) {
      const double excess = eval_H(cert, field_u(i, j), field_v(i, j)).H - level;
      if (excess > 0.0) sum += excess * excess;
    }
  }
  return 0.5 * sum * cell_area;
}

}  // namespace skt
