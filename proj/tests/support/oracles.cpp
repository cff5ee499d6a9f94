#include "oracles.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace skt::testing {

namespace {

constexpr double kPi = std::numbers::pi;

double norm1d(int j) { return j == 0 ? 1.0 / std::sqrt(kPi) : std::sqrt(2.0 / kPi); }

// Values and partial derivatives of every mode on the 2-D Gauss grid.
struct Tabulated {
  Eigen::MatrixXd phi, dx, dy;  // modes x points
  Eigen::VectorXd w;
};

Tabulated tabulate(int n, int points) {
  const GaussRule g = gauss_legendre(points);
  const int M = (n + 1) * (n + 1);
  const int P = points * points;
  Tabulated t{Eigen::MatrixXd(M, P), Eigen::MatrixXd(M, P), Eigen::MatrixXd(M, P), Eigen::VectorXd(P)};
  for (int iy = 0; iy < points; ++iy) {
    for (int ix = 0; ix < points; ++ix) {
      const int q = iy * points + ix;
      const double x = g.x[ix], y = g.x[iy];
      t.w[q] = g.w[ix] * g.w[iy];
      for (int j = 0; j <= n; ++j) {
        for (int k = 0; k <= n; ++k) {
          const int m = j * (n + 1) + k;
          const double c = norm1d(j) * norm1d(k);
          t.phi(m, q) = c * std::cos(j * x) * std::cos(k * y);
          t.dx(m, q) = -c * j * std::sin(j * x) * std::cos(k * y);
          t.dy(m, q) = -c * k * std::cos(j * x) * std::sin(k * y);
        }
      }
    }
  }
  return t;
}

}  // namespace

GaussRule gauss_legendre(int points) {
  const auto zeros = boost::math::legendre_p_zeros<double>(points);
  GaussRule r;
  const auto add = [&](double z) {
    const double dp = boost::math::legendre_p_prime<double>(points, z);
    r.x.push_back(0.5 * kPi * (1.0 + z));
    r.w.push_back(0.5 * kPi * 2.0 / ((1.0 - z * z) * dp * dp));
  };
  for (double z : zeros) {
    add(z);
    if (z != 0.0) add(-z);
  }
  std::vector<std::size_t> order(r.x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return r.x[a] < r.x[b]; });
  GaussRule sorted;
  for (auto i : order) {
    sorted.x.push_back(r.x[i]);
    sorted.w.push_back(r.w[i]);
  }
  return sorted;
}

DenseTriples quadrature_oracle(int n, int points) {
  if (points <= 0) points = 3 * n + 24;
  const Tabulated t = tabulate(n, points);
  const int M = (n + 1) * (n + 1);
  const Eigen::Index P = t.w.size();

  DenseTriples out;
  out.n = n;
  out.mass.assign(static_cast<std::size_t>(M) * M * M, 0.0);
  out.stiff.assign(out.mass.size(), 0.0);

  const Eigen::MatrixXd phiT = t.phi.transpose();
  const Eigen::MatrixXd dxT = t.dx.transpose();
  const Eigen::MatrixXd dyT = t.dy.transpose();
  Eigen::MatrixXd prod(M, P), gx(M, P), gy(M, P);
  for (int a = 0; a < M; ++a) {
    const Eigen::RowVectorXd wa = t.phi.row(a).cwiseProduct(t.w.transpose());
    for (int b = 0; b < M; ++b) {
      prod.row(b) = wa.cwiseProduct(t.phi.row(b));
      gx.row(b) = wa.cwiseProduct(t.dx.row(b));
      gy.row(b) = wa.cwiseProduct(t.dy.row(b));
    }
    const Eigen::MatrixXd mass = prod * phiT;             // b x j
    const Eigen::MatrixXd stiff = gx * dxT + gy * dyT;    // b x j
    for (int b = 0; b < M; ++b) {
      for (int j = 0; j < M; ++j) {
        out.mass[out.index(a, b, j)] = mass(b, j);
        out.stiff[out.index(a, b, j)] = stiff(b, j);
      }
    }
  }
  return out;
}

std::pair<Coeffs, Coeffs> rhs_oracle(const ModelParams& p, const SpectralState& state, int points) {
  const int n = state.order();
  points = std::max(points, 3 * n + 24);
  const Tabulated t = tabulate(n, points);
  const int M = (n + 1) * (n + 1);
  Eigen::VectorXd c1(M), c2(M);
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= n; ++k) {
      c1[j * (n + 1) + k] = state.mu1(j, k);
      c2[j * (n + 1) + k] = state.mu2(j, k);
    }
  }
  const Eigen::VectorXd u = t.phi.transpose() * c1, v = t.phi.transpose() * c2;
  const Eigen::VectorXd ux = t.dx.transpose() * c1, uy = t.dy.transpose() * c1;
  const Eigen::VectorXd vx = t.dx.transpose() * c2, vy = t.dy.transpose() * c2;

  const Eigen::Index P = t.w.size();
  Eigen::VectorXd fu_x(P), fu_y(P), fv_x(P), fv_y(P), f(P), g(P);
  for (Eigen::Index q = 0; q < P; ++q) {
    const FluxCoeffs c = flux_coeffs(p, u[q], v[q]);
    const Reactions r = reactions(p, u[q], v[q]);
    fu_x[q] = t.w[q] * (c.Pu * ux[q] + c.Pv * vx[q]);
    fu_y[q] = t.w[q] * (c.Pu * uy[q] + c.Pv * vy[q]);
    fv_x[q] = t.w[q] * (c.Qu * ux[q] + c.Qv * vx[q]);
    fv_y[q] = t.w[q] * (c.Qu * uy[q] + c.Qv * vy[q]);
    f[q] = t.w[q] * r.f;
    g[q] = t.w[q] * r.g;
  }
  const Eigen::VectorXd du = -(t.dx * fu_x + t.dy * fu_y) + t.phi * f;
  const Eigen::VectorXd dv = -(t.dx * fv_x + t.dy * fv_y) + t.phi * g;
  Coeffs d1(n + 1, n + 1), d2(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= n; ++k) {
      d1(j, k) = du[j * (n + 1) + k];
      d2(j, k) = dv[j * (n + 1) + k];
    }
  }
  return {d1, d2};
}

SpectralState random_state(int n, unsigned seed, double scale, double mean_u, double mean_v) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  SpectralState s(n);
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= n; ++k) {
      s.mu1(j, k) = dist(rng);
      s.mu2(j, k) = dist(rng);
    }
  }
  s.mu1(0, 0) = mean_u * kPi;
  s.mu2(0, 0) = mean_v * kPi;
  return s;
}

}  // namespace skt::testing
