#pragma once

#include "sktspec/model.hpp"
#include "sktspec/spectral.hpp"

#include <memory>
#include <utility>
#include <variant>
#include <vector>

namespace skt {

/// Right-hand side of the coefficient ODEs obtained by projecting the weak
/// form of both species' equations onto the cosine basis:
///
///   d/dt mu1_J = (a1 - |J|^2 d1) mu1_J
///              - sum_{A,B} [alpha11 u_A u_B + alpha12 v_A u_B + b11 u_A v_B] stiff3(A,B,J)
///              - sum_{A,B} [b1 u_A u_B - c1 u_A v_B] mass3(A,B,J)
///
/// and the mirror image for mu2. In each stiff3 term the first factor is the
/// flux coefficient field, the second the differentiated field.
class RhsAssembler {
 public:
  RhsAssembler(const ModelParams& params, std::shared_ptr<const TripleTensors> tensors);
  RhsAssembler(const ModelParams& params, int order);

  [[nodiscard]] const ModelParams& params() const { return params_; }
  [[nodiscard]] int order() const { return n_; }
  [[nodiscard]] int modes() const { return (n_ + 1) * (n_ + 1); }
  [[nodiscard]] const TripleTensors& tensors() const { return *tensors_; }

  /// Flat layout: y[0, M) holds mu1 and y[M, 2M) holds mu2, with
  /// mode (j, k) at flat index j (n+1) + k and M = (n+1)^2.
  void rhs(const double* y, double* dy) const;

  [[nodiscard]] std::pair<Coeffs, Coeffs> rhs(const SpectralState& state) const;

 private:
  struct Entry {
    int a;
    int b;
    double mass;
    double stiff;
  };

  ModelParams params_;
  std::shared_ptr<const TripleTensors> tensors_;
  int n_;
  std::vector<std::size_t> offsets_;
  std::vector<Entry> entries_;
};

/// Packs / unpacks a state in the flat layout used by RhsAssembler::rhs.
Eigen::VectorXd to_flat(const SpectralState& state);
SpectralState from_flat(const Eigen::VectorXd& y, int order, double t);

// Initial-condition descriptors.

struct ConstantIC {
  double value = 0.0;
};

struct CosineTerm {
  int j = 0;
  int k = 0;
  double amp = 0.0;
};

/// offset + sum amp cos(j x) cos(k y)
struct CosineIC {
  double offset = 0.0;
  std::vector<CosineTerm> terms;
};

/// offset + amp exp(-((x-cx)^2 + (y-cy)^2) / (2 sigma^2))
struct GaussianIC {
  double cx = 0.0;
  double cy = 0.0;
  double sigma = 1.0;
  double amp = 0.0;
  double offset = 0.0;
};

using InitialDescriptor = std::variant<ConstantIC, CosineIC, GaussianIC>;

double evaluate(const InitialDescriptor& ic, double x, double y);

/// Coefficients of the projection onto modes 0..n. Constant and cosine
/// descriptors are projected analytically (terms above n drop out); the
/// Gaussian goes through analyze() on a 4(n+1) grid.
Coeffs project(const InitialDescriptor& ic, int order);

struct InitialProjection {
  SpectralState state;
  double min_u = 0.0;  ///< minimum of the truncated series on the 4(n+1) grid
  double min_v = 0.0;
};

/// Projects nonnegative initial data; negative input is rejected with
/// std::invalid_argument. Negativity introduced by truncation is reported,
/// not clipped.
InitialProjection project_initial(const Field& u0, const Field& v0, int order);
InitialProjection project_initial(const InitialDescriptor& u0, const InitialDescriptor& v0, int order);

}  // namespace skt
