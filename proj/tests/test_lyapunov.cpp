#include "sktspec/lyapunov.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace skt;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams case1() { return *preset("case1"); }
ModelParams case2() { return *preset("case2"); }

ModelParams random_cross(std::mt19937& rng) {
  std::uniform_real_distribution<double> a(0.0, 2.0), b(0.01, 2.0);
  ModelParams p = case1();
  p.alpha11 = a(rng);
  p.alpha12 = a(rng);
  p.alpha21 = a(rng);
  p.alpha22 = a(rng);
  p.b11 = b(rng);
  p.b22 = b(rng);
  return p;
}

ModelParams sign_regime() {
  ModelParams p = case1();
  p.a1 = 1.0;
  p.a2 = 1.0;
  p.b1 = 1.0;
  p.c2 = 1.0;
  p.c1 = -0.1;
  p.b2 = -0.1;
  return p;
}

}  // namespace

TEST(EvalH, Origin) {
  const LyapunovCert c = make_certificate(case1(), 3.0, 0.7);
  const HValues h = eval_H(c, 0.0, 0.0);
  EXPECT_EQ(h.H, 0.0);
  EXPECT_EQ(h.Hu, 0.0);
  EXPECT_EQ(h.Hv, 0.0);
}

TEST(EvalH, DirectSubstitution) {
  const LyapunovCert c = make_certificate(case1(), 2.0, 1.0);
  const HValues h = eval_H(c, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(h.H, 2.5);
  EXPECT_DOUBLE_EQ(h.Hu, 3.0);
  EXPECT_DOUBLE_EQ(h.Hv, 2.0);
  EXPECT_EQ(h.Huu, 2.0);
  EXPECT_EQ(h.Huv, 1.0);
  EXPECT_EQ(h.Hvv, 1.0);
}

TEST(EvalH, PositiveDefiniteWhenKAboveOne) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> w(0.05, 20.0), z(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double lambda = w(rng);
    const double mu = (1.0 + 1e-3 + w(rng)) / lambda;
    const LyapunovCert c = make_certificate(case1(), lambda, mu);
    ASSERT_GT(c.K, 1.0);
    const double u = z(rng), v = z(rng);
    if (u == 0.0 && v == 0.0) continue;
    EXPECT_GT(eval_H(c, u, v).H, 0.0);
  }
}

TEST(Certificate, MakeCertificateFields) {
  const LyapunovCert c = make_certificate(case1(), 0.5, 8.0);
  EXPECT_DOUBLE_EQ(c.K, 2.0);
  EXPECT_DOUBLE_EQ(c.k_excess, 3.0);
  const Discriminants d = discriminants(case1(), c);
  EXPECT_EQ(c.delta_u, d.delta_u);
  EXPECT_EQ(c.delta_v, d.delta_v);
  EXPECT_EQ(c.delta_d, d.delta_d);
}

TEST(Discriminants, EqualDiffusionAtKOne) {
  ModelParams p = case1();
  p.d1 = 0.3;
  p.d2 = 0.3;
  EXPECT_NEAR(discriminants(p, 1.0, 1.0, 0.0).delta_d, 0.0, 1e-15);
}

TEST(Discriminants, Case1WindowMidpointZeroesDeltaU) {
  const ModelParams p = case1();
  const double lambda = (p.alpha11 - p.alpha21) / p.b11;
  EXPECT_NEAR(discriminants(p, lambda, 1.0 / lambda, 0.0).delta_u, 0.0, 1e-15);
}

TEST(Discriminants, Case1DirectSubstitution) {
  EXPECT_NEAR(discriminants(case1(), 1.0, 1.0, 0.0).delta_u, 0.0064, 1e-15);
}

TEST(Discriminants, ClosedForms) {
  const ModelParams p = case2();
  const double lambda = 0.7, mu = 3.1, ke = lambda * mu - 1.0;
  const Discriminants d = discriminants(p, lambda, mu, ke);
  const double du = std::pow(p.b11 * lambda - p.alpha11 + p.alpha21, 2) - 4 * p.alpha11 * p.alpha21 * ke;
  const double dv = std::pow(mu * p.b22 - p.alpha22 + p.alpha12, 2) - 4 * p.alpha12 * p.alpha22 * ke;
  const double dd = std::pow(p.d1 + p.d2, 2) - 4 * (1 + ke) * p.d1 * p.d2;
  EXPECT_NEAR(d.delta_u, du, 1e-14);
  EXPECT_NEAR(d.delta_v, dv, 1e-14);
  EXPECT_NEAR(d.delta_d, dd, 1e-14);
}

TEST(Windows, UnboundedWithoutGradientCrossDiffusion) {
  ModelParams p = case1();
  p.b11 = 0.0;
  const Windows w = windows(p, 0.5);
  EXPECT_TRUE(std::isinf(w.lambda_hi));
  EXPECT_TRUE(std::isfinite(w.mu_hi));
}

TEST(FindCertificate, Case1) {
  const CertificateSearch s = find_certificate(case1());
  ASSERT_EQ(s.status, CertificateStatus::found);
  ASSERT_TRUE(s.cert);
  const LyapunovCert& c = *s.cert;
  EXPECT_TRUE(c.feasible);
  EXPECT_LT(c.delta_u, 0.0);
  EXPECT_LT(c.delta_v, 0.0);
  EXPECT_GT(c.K, 1.0);
  EXPECT_NEAR(c.lambda * c.mu, c.K * c.K, 1e-12 * c.K * c.K);
  EXPECT_LT(c.lambda, c.window_lambda_hi);
  EXPECT_LT(c.mu, c.window_mu_hi);
  // K -> 1 limit of the window product: (0.04 / 0.12)(0.68 / 0.06) = 34/9, about 3.78 > 1
  const Windows w = windows(case1(), 0.0);
  EXPECT_NEAR(w.lambda_hi * w.mu_hi, 34.0 / 9.0, 1e-12);
  EXPECT_NEAR(w.lambda_hi * w.mu_hi, 3.78, 5e-3);
}

TEST(FindCertificate, Case2) {
  const CertificateSearch s = find_certificate(case2());
  ASSERT_EQ(s.status, CertificateStatus::found);
  EXPECT_TRUE(s.cert->feasible);
  EXPECT_LT(s.cert->delta_u, 0.0);
  EXPECT_LT(s.cert->delta_v, 0.0);
}

TEST(FindCertificate, InfeasibleWhenProductTooSmall) {
  ModelParams p = case1();
  p.alpha11 = 0.51;
  p.alpha21 = 0.5;
  p.alpha22 = 0.51;
  p.alpha12 = 0.5;
  p.b11 = 1.0;
  p.b22 = 1.0;
  const CertificateSearch s = find_certificate(p);
  EXPECT_EQ(s.status, CertificateStatus::infeasible);
  EXPECT_FALSE(s.cert);
}

TEST(FindCertificate, PreconditionViolationIsDistinct) {
  ModelParams p = case1();
  p.alpha21 = 0.2;  // alpha11 < alpha21
  const CertificateSearch s = find_certificate(p);
  EXPECT_EQ(s.status, CertificateStatus::precondition_violated);
  EXPECT_FALSE(s.cert);
  EXPECT_NE(s.detail.find("alpha11"), std::string::npos);
}

TEST(FindCertificate, UnboundedWindowsNearKOne) {
  ModelParams p = case1();
  p.b11 = 0.0;
  p.b22 = 0.0;
  const CertificateSearch s = find_certificate(p);
  ASSERT_EQ(s.status, CertificateStatus::found);
  EXPECT_TRUE(s.cert->feasible);
  EXPECT_NEAR(s.cert->lambda * s.cert->mu, s.cert->K * s.cert->K, 1e-12);
}

TEST(FindCertificateProperty, SucceedsExactlyUnderPositiveCrossMargin) {
  std::mt19937 rng(2024);
  int checked = 0, feasible = 0;
  while (checked < 1000) {
    const ModelParams p = random_cross(rng);
    const double du = p.alpha11 - p.alpha21, dv = p.alpha22 - p.alpha12;
    const double lhs = du * dv, rhs = p.b11 * p.b22;
    if (std::abs(lhs - rhs) < 1e-6) continue;
    ++checked;
    const bool expected = du > 0 && dv > 0 && lhs > rhs;
    const CertificateSearch s = find_certificate(p);
    ASSERT_EQ(s.status == CertificateStatus::found, expected)
        << "alpha=" << p.alpha11 << "," << p.alpha12 << "," << p.alpha21 << "," << p.alpha22 << " b=" << p.b11
        << "," << p.b22 << " detail=" << s.detail;
    if (!expected) continue;
    ++feasible;
    const LyapunovCert& c = *s.cert;
    EXPECT_TRUE(c.feasible);
    EXPECT_GT(c.K, 1.0);
    EXPECT_GT(c.lambda, 0.0);
    EXPECT_GT(c.mu, 0.0);
    EXPECT_LT(c.lambda, c.window_lambda_hi);
    EXPECT_LT(c.mu, c.window_mu_hi);
  }
  EXPECT_GT(feasible, 50);
}

TEST(FindCertificateProperty, FoundCertificatesMostlyHaveNegativeDiscriminants) {
  std::mt19937 rng(77);
  int found = 0, strict = 0;
  for (int i = 0; i < 3000; ++i) {
    const ModelParams p = random_cross(rng);
    const CertificateSearch s = find_certificate(p);
    if (!s.cert) continue;
    ++found;
    const Discriminants d = discriminants(p, *s.cert);
    EXPECT_EQ(s.cert->discriminants_negative, d.delta_u < 0 && d.delta_v < 0);
    strict += s.cert->discriminants_negative;
  }
  ASSERT_GT(found, 100);
  EXPECT_GE(static_cast<double>(strict) / found, 0.99);
}

TEST(PsiForms, VanishAtZeroGradient) {
  const LyapunovCert c = *find_certificate(case1()).cert;
  const PsiForms f = eval_psi_forms(case1(), c, 0.4, 2.0, {0, 0}, {0, 0});
  EXPECT_EQ(f.psi_u, 0.0);
  EXPECT_EQ(f.psi_v, 0.0);
  EXPECT_EQ(f.psi_d, 0.0);
  EXPECT_EQ(f.psi, 0.0);
}

TEST(PsiForms, RandomDiffusionPartAlongU) {
  const ModelParams p = case1();
  const LyapunovCert c = *find_certificate(p).cert;
  const PsiForms f = eval_psi_forms(p, c, 1.0, 1.0, {1, 0}, {0, 0});
  EXPECT_NEAR(f.psi_d, p.d1 * c.lambda, 1e-15);
}

TEST(PsiForms, DecompositionIdentity) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> z(-3.0, 3.0), pos(0.0, 10.0);
  for (const ModelParams& p : {case1(), case2()}) {
    const LyapunovCert c = *find_certificate(p).cert;
    for (int i = 0; i < 1000; ++i) {
      const double u = pos(rng), v = pos(rng);
      const Vec2 gu{z(rng), z(rng)}, gv{z(rng), z(rng)};
      const PsiForms f = eval_psi_forms(p, c, u, v, gu, gv);
      const double combined = u * f.psi_u + v * f.psi_v + f.psi_d;
      EXPECT_NEAR(f.psi, combined, 1e-12 * (1.0 + std::abs(combined)));
    }
  }
}

TEST(PsiForms, NonnegativeForCertifiedCases) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> pos(0.0, 100.0), ang(0.0, 2 * kPi);
  for (const ModelParams& p : {case1(), case2()}) {
    const LyapunovCert c = *find_certificate(p).cert;
    ASSERT_TRUE(c.discriminants_negative);
    for (int i = 0; i < 10000; ++i) {
      const double a = ang(rng), b = ang(rng);
      const PsiForms f = eval_psi_forms(p, c, pos(rng), pos(rng), {std::cos(a), std::sin(a)}, {std::cos(b), std::sin(b)});
      EXPECT_GE(f.psi, -1e-12);
    }
  }
}

TEST(QuadraticForms, CompletingTheSquareBound) {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> pos(0.01, 5.0), z(-5.0, 5.0);
  for (int i = 0; i < 5000; ++i) {
    const QuadraticForm q{pos(rng), z(rng), pos(rng)};
    const Vec2 x{z(rng), z(rng)}, y{z(rng), z(rng)};
    const double delta = q.discriminant();
    const double bound = -(delta / (8 * q.C)) * (x[0] * x[0] + x[1] * x[1]) -
                         (delta / (8 * q.A)) * (y[0] * y[0] + y[1] * y[1]);
    EXPECT_GE(q(x, y), bound - 1e-10 * (1 + std::abs(bound)));
  }
}

TEST(ReactionSign, PhiCoefficientsInCooperativeRegime) {
  const ModelParams p = sign_regime();
  const LyapunovCert c = make_certificate(p, 1.02, 1.02);
  const auto phi = phi_coefficients(p, c);
  EXPECT_NEAR(phi[0], 1.02, 1e-15);
  EXPECT_NEAR(phi[1], 1.202, 1e-15);
  EXPECT_NEAR(phi[2], 1.202, 1e-15);
  EXPECT_NEAR(phi[3], 1.02, 1e-15);
}

TEST(ReactionSign, NoViolationsAboveLevel100) {
  const ModelParams p = sign_regime();
  const LyapunovCert c = make_certificate(p, 1.02, 1.02);
  const SignReport r = check_reaction_sign(p, c, 100.0, 10000, 42);
  EXPECT_EQ(r.samples, 10000u);
  EXPECT_GT(r.in_region, 1000u);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_EQ(r.violation_fraction, 0.0);
  EXPECT_EQ(r.max_violation, 0.0);
}

TEST(ReactionSign, MatchesDirectEvaluation) {
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> pos(0.0, 20.0);
  for (const ModelParams& p : {case1(), case2(), sign_regime()}) {
    const LyapunovCert c = *find_certificate(p).cert;
    for (int i = 0; i < 1000; ++i) {
      const double u = pos(rng), v = pos(rng);
      const HValues h = eval_H(c, u, v);
      const Reactions r = reactions(p, u, v);
      const double direct = h.Hu * r.f + h.Hv * r.g;
      EXPECT_NEAR(reaction_sign_value(p, c, u, v), direct, 1e-11 * (1 + std::abs(direct)));
    }
  }
}

TEST(ReactionSign, OriginIsExcluded) {
  const LyapunovCert c = make_certificate(case1(), 1.5, 1.5);
  EXPECT_FALSE(reaction_sign_at(case1(), c, 0.0, 0.0, 0.0));
  EXPECT_TRUE(reaction_sign_at(case1(), c, 0.0, 1.0, 0.0));
}

TEST(ReactionSign, DeterministicForSeed) {
  const LyapunovCert c = *find_certificate(case2()).cert;
  const SignReport a = check_reaction_sign(case2(), c, 1.0, 5000, 9);
  const SignReport b = check_reaction_sign(case2(), c, 1.0, 5000, 9);
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_EQ(a.in_region, b.in_region);
  EXPECT_EQ(a.max_violation, b.max_violation);
}

TEST(ReactionSign, Case2ViolationFractionNonincreasingInLevel) {
  const ModelParams p = case2();
  const LyapunovCert c = *find_certificate(p).cert;
  double previous = 1.0;
  for (double level : {0.0, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
    const SignReport r = check_reaction_sign(p, c, level, 20000, 123);
    EXPECT_LE(r.violation_fraction, previous) << "level " << level;
    previous = r.violation_fraction;
  }
}

TEST(ReactionSign, RejectsZeroSamples) {
  const LyapunovCert c = make_certificate(case1(), 1.5, 1.5);
  EXPECT_THROW(check_reaction_sign(case1(), c, 0.0, 0, 1), std::invalid_argument);
}

TEST(FluxQuotient, PositiveForCertifiedCases) {
  for (const ModelParams& p : {case1(), case2()}) {
    const LyapunovCert c = *find_certificate(p).cert;
    const FluxQuotient q = min_flux_quotient(p, c, 1.0, 5000, 3);
    EXPECT_GT(q.samples, 100u);
    EXPECT_TRUE(std::isfinite(q.min_quotient));
  }
}

TEST(EvalL, BelowLevelIsZero) {
  const LyapunovCert c = make_certificate(case1(), 2.0, 2.0);
  const Eigen::MatrixXd u = Eigen::MatrixXd::Constant(8, 8, 0.1), v = u;
  EXPECT_EQ(eval_L(c, u, v, 1.0, kPi * kPi / 64), 0.0);
}

TEST(EvalL, ConstantFieldsAboveLevel) {
  const LyapunovCert c = make_certificate(case1(), 2.0, 2.0);
  const Eigen::MatrixXd u = Eigen::MatrixXd::Ones(16, 16), v = u;
  EXPECT_NEAR(eval_H(c, 1.0, 1.0).H, 3.0, 1e-15);
  EXPECT_NEAR(eval_L(c, u, v, 1.0, kPi * kPi / 256), 2.0 * kPi * kPi, 1e-12);
}

TEST(EvalL, NegativeLevelOnZeroFields) {
  const LyapunovCert c = make_certificate(case1(), 2.0, 2.0);
  const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(10, 10);
  EXPECT_NEAR(eval_L(c, z, z, -1.0, kPi * kPi / 100), 0.5 * kPi * kPi, 1e-12);
}

TEST(EvalL, NonnegativeAndNonincreasingInLevel) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> pos(0.0, 3.0);
  const LyapunovCert c = make_certificate(case2(), 1.3, 1.9);
  Eigen::MatrixXd u(12, 12), v(12, 12);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    u(i) = pos(rng);
    v(i) = pos(rng);
  }
  double previous = std::numeric_limits<double>::infinity();
  for (double level = -2.0; level < 20.0; level += 0.5) {
    const double L = eval_L(c, u, v, level, 0.01);
    EXPECT_GE(L, 0.0);
    EXPECT_LE(L, previous);
    previous = L;
  }
}

TEST(EvalL, Errors) {
  const LyapunovCert c = make_certificate(case1(), 2.0, 2.0);
  EXPECT_THROW(eval_L(c, Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 4), 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(eval_L(c, Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3), 0.0, 0.0), std::invalid_argument);
}
