#pragma once

#include "sktspec/model.hpp"

namespace skt {

/// A strict or non-strict inequality lhs (op) rhs, evaluated exactly.
struct Inequality {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Every closed-form global-existence condition, evaluated on the decimal
/// values of the parameters with exact rational arithmetic.
///
/// Naming follows the published condition labels:
///   cond_1_6  the three prior-literature conditions (i)-(iii)
///   cond_1_7  (alpha11-alpha21)(alpha22-alpha12) > b11 b22, with both
///             differences positive
///   cond_1_8  alpha11 alpha22 + alpha12 alpha21 - b11 b22 >= 0
///   V1, V2    alpha11-alpha21-b22 and alpha22-alpha12-b11
///   cond_1_9  Hoelder-regularity alternatives (i)-(iii)
///   cond_2_1  global-existence alternatives (i)-(iv)
struct ConditionReport {
  struct Cond16 {
    Inequality i;    // alpha11 alpha22 + alpha12 alpha21 - b11 b22 >= 0 (rhs = 0)
    Inequality ii;   // alpha22 - alpha12 > b11
    Inequality iii;  // alpha11 - alpha21 > b22
    bool holds = false;
  } cond_1_6;

  struct Cond17 {
    Inequality product;  // (alpha11-alpha21)(alpha22-alpha12) > b11 b22
    bool alpha11_gt_alpha21 = false;
    bool alpha22_gt_alpha12 = false;
    bool holds = false;
  } cond_1_7;

  struct Cond18 {
    double value = 0.0;
    bool holds = false;
  } cond_1_8;

  /// d_i, alpha_ij, b_ii all strictly positive, the standing hypothesis
  /// behind cond_1_8 and cond_1_9.
  bool regularity_positivity = false;

  double V1 = 0.0;
  double V2 = 0.0;

  struct Cond19 {
    bool i = false;
    bool ii = false;
    bool iii = false;
    double iii_value = 0.0;  // (d1-d2)(V2-V1)[(alpha11-alpha21)(alpha22-alpha12) - b11 b22]
    bool holds = false;
  } cond_1_9;

  struct Cond21 {
    bool i = false;
    bool ii = false;
    bool iii = false;
    bool iv = false;
    bool holds = false;
  } cond_2_1;

  bool theorem_2_2_applies = false;
};

ConditionReport check_conditions(const ModelParams& p);

}  // namespace skt
