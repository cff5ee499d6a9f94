#pragma once

#include "sktspec/model.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace skt {

/// Weights of the quadratic form H(u,v) = lambda u^2 / 2 + u v + mu v^2 / 2
/// with lambda mu = K^2, K > 1, together with the quantities that decide
/// whether the form certifies boundedness for a given parameter set.
struct LyapunovCert {
  double lambda = 1.0;
  double mu = 1.0;
  double K = 1.0;
  double k_excess = 0.0;  ///< K^2 - 1, kept separately to avoid cancellation near K = 1
  double delta_u = 0.0;
  double delta_v = 0.0;
  double delta_d = 0.0;
  double window_lambda_hi = 0.0;  ///< +inf when b11 == 0
  double window_mu_hi = 0.0;      ///< +inf when b22 == 0
  /// K > 1, 0 < lambda < window_lambda_hi and 0 < mu < window_mu_hi.
  bool feasible = false;
  /// delta_u < 0 and delta_v < 0, i.e. Psi_u and Psi_v are positive definite.
  bool discriminants_negative = false;
};

/// Evaluates every derived field of a certificate for the given weights.
/// `k_excess` defaults to lambda * mu - 1.
LyapunovCert make_certificate(const ModelParams& p, double lambda, double mu,
                              std::optional<double> k_excess = std::nullopt);

struct HValues {
  double H, Hu, Hv, Huu, Huv, Hvv;
};

HValues eval_H(const LyapunovCert& cert, double u, double v);

struct Discriminants {
  double delta_u, delta_v, delta_d;
};

/// Raw form, usable at K = 1 (k_excess = 0) where no certificate exists.
Discriminants discriminants(const ModelParams& p, double lambda, double mu, double k_excess);
Discriminants discriminants(const ModelParams& p, const LyapunovCert& cert);

struct Windows {
  double lambda_hi;
  double mu_hi;
};

/// Upper ends of the admissible lambda and mu ranges at a given K^2 - 1.
Windows windows(const ModelParams& p, double k_excess);

struct CertificateSearchConfig {
  double k_max = 2.0;
  int levels = 41;  ///< K^2 - 1 = 10^-k (k_max^2 - 1), k = 0 .. levels-1
};

enum class CertificateStatus { found, infeasible, precondition_violated };

struct CertificateSearch {
  CertificateStatus status = CertificateStatus::infeasible;
  std::optional<LyapunovCert> cert;
  std::string detail;
};

/// Searches for (lambda, mu, K) in the neighborhood of K = 1.
///
/// Succeeds exactly when the lambda/mu windows are jointly satisfiable at the
/// grid point closest to K = 1; under alpha11 > alpha21 and alpha22 > alpha12
/// this is (alpha11-alpha21)(alpha22-alpha12) > b11 b22. Within the run of
/// feasible grid points touching K = 1 the placement prefers the largest K at
/// which both discriminants are strictly negative.
CertificateSearch find_certificate(const ModelParams& p, const CertificateSearchConfig& cfg = {});

using Vec2 = std::array<double, 2>;

/// Coefficients of A |gu|^2 + B gu.gv + C |gv|^2.
struct QuadraticForm {
  double A, B, C;

  [[nodiscard]] double operator()(const Vec2& gu, const Vec2& gv) const;
  [[nodiscard]] double discriminant() const { return B * B - 4.0 * A * C; }
};

struct PsiCoefficients {
  QuadraticForm u, v, d;
};

PsiCoefficients psi_coefficients(const ModelParams& p, const LyapunovCert& cert);

struct PsiForms {
  double psi_u, psi_v, psi_d;
  double psi;  ///< P . grad H_u + Q . grad H_v, evaluated from the fluxes directly
};

PsiForms eval_psi_forms(const ModelParams& p, const LyapunovCert& cert, double u, double v,
                        const Vec2& gu, const Vec2& gv);

/// Phi(u,v) = c0 u^3 + c1 u^2 v + c2 u v^2 + c3 v^3.
std::array<double, 4> phi_coefficients(const ModelParams& p, const LyapunovCert& cert);

/// H_u f + H_v g through a1 u(lambda u + v) + a2 v(u + mu v) - Phi(u,v).
double reaction_sign_value(const ModelParams& p, const LyapunovCert& cert, double u, double v);

/// reaction_sign_value when (u,v) lies in {H > level}, nothing otherwise.
std::optional<double> reaction_sign_at(const ModelParams& p, const LyapunovCert& cert,
                                       double level, double u, double v);

struct SignReport {
  std::array<double, 4> phi_coeffs{};
  double level = 0.0;
  std::size_t samples = 0;
  std::size_t in_region = 0;
  std::size_t violations = 0;
  double violation_fraction = 0.0;  ///< violations / in_region
  double max_violation = 0.0;       ///< largest positive H_u f + H_v g seen, else 0
};

/// Log-uniform draws of (u,v) over [1e-3, 1e3]^2 filtered by H > level.
SignReport check_reaction_sign(const ModelParams& p, const LyapunovCert& cert, double level,
                               std::size_t samples, std::uint64_t seed);

/// Empirical stand-in for the constant lambda_1: minimum over samples of
/// (H_u P + H_v Q) . grad H / |grad H|^2, raw and divided by (1 + u + v).
struct FluxQuotient {
  double min_quotient = 0.0;
  double min_scaled = 0.0;
  std::size_t samples = 0;
};

FluxQuotient min_flux_quotient(const ModelParams& p, const LyapunovCert& cert, double level,
                               std::size_t samples, std::uint64_t seed);

/// Midpoint quadrature of 1/2 [(H - C)_+]^2; fields must share a shape.
double eval_L(const LyapunovCert& cert, const Eigen::MatrixXd& field_u,
              const Eigen::MatrixXd& field_v, double level, double cell_area);

}  // namespace skt
