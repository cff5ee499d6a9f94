#include "sktspec/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace skt {

RhsAssembler::RhsAssembler(const ModelParams& params, std::shared_ptr<const TripleTensors> tensors)
    : params_(params), tensors_(std::move(tensors)), n_(tensors_ ? tensors_->n : -1) {
  if (!tensors_) throw std::invalid_argument("RhsAssembler: tensors required");
  if (tensors_->mass3.order() != n_ || tensors_->stiff3.order() != n_) {
    throw std::invalid_argument("RhsAssembler: tensors built for a different order");
  }

  // stiff3 rows are ordered subsequences of the mass3 rows (same selection
  // rule, exact zeros dropped), so the two merge in one pass.
  offsets_.reserve(modes() + 1);
  offsets_.push_back(0);
  entries_.reserve(tensors_->mass3.nonzeros());
  for (int out = 0; out < modes(); ++out) {
    const auto mass = tensors_->mass3.row(out);
    const auto stiff = tensors_->stiff3.row(out);
    std::size_t s = 0;
    for (const TripleEntry& m : mass) {
      double sv = 0.0;
      if (s < stiff.size() && stiff[s].a == m.a && stiff[s].b == m.b) sv = stiff[s++].value;
      entries_.push_back({m.a, m.b, m.value, sv});
    }
    if (s != stiff.size()) throw std::logic_error("RhsAssembler: stiff3 pattern not contained in mass3");
    offsets_.push_back(entries_.size());
  }
}

RhsAssembler::RhsAssembler(const ModelParams& params, int order)
    : RhsAssembler(params, std::make_shared<const TripleTensors>(build_tensors(order))) {}

void RhsAssembler::rhs(const double* y, double* dy) const {
  const ModelParams& p = params_;
  const int M = modes();
  const double* u = y;
  const double* v = y + M;
  const int stride = n_ + 1;

  for (int out = 0; out < M; ++out) {
    const int jt = out / stride, kt = out % stride;
    const double lap = double(jt * jt + kt * kt);
    double du = (p.a1 - lap * p.d1) * u[out];
    double dv = (p.a2 - lap * p.d2) * v[out];
    for (std::size_t e = offsets_[out]; e < offsets_[out + 1]; ++e) {
      const Entry& t = entries_[e];
      const double uA = u[t.a], vA = v[t.a], uB = u[t.b], vB = v[t.b];
      const double uu = uA * uB, vu = vA * uB, uv = uA * vB, vv = vA * vB;
      du -= t.stiff * (p.alpha11 * uu + p.alpha12 * vu + p.b11 * uv) + t.mass * (p.b1 * uu - p.c1 * uv);
      dv -= t.stiff * (p.alpha21 * uv + p.alpha22 * vv + p.b22 * vu) + t.mass * (p.c2 * vv - p.b2 * vu);
    }
    dy[out] = du;
    dy[M + out] = dv;
  }
}

std::pair<Coeffs, Coeffs> RhsAssembler::rhs(const SpectralState& state) const {
  if (state.order() != n_ || state.mu2.rows() != n_ + 1 || state.mu1.cols() != n_ + 1 ||
      state.mu2.cols() != n_ + 1) {
    throw std::invalid_argument("rhs: state shape does not match the assembler order");
  }
  const Eigen::VectorXd y = to_flat(state);
  Eigen::VectorXd dy(y.size());
  rhs(y.data(), dy.data());
  const SpectralState d = from_flat(dy, n_, state.t);
  return {d.mu1, d.mu2};
}

Eigen::VectorXd to_flat(const SpectralState& state) {
  const int n = state.order();
  const int M = (n + 1) * (n + 1);
  Eigen::VectorXd y(2 * M);
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= n; ++k) {
      y[j * (n + 1) + k] = state.mu1(j, k);
      y[M + j * (n + 1) + k] = state.mu2(j, k);
    }
  }
  return y;
}

SpectralState from_flat(const Eigen::VectorXd& y, int order, double t) {
  const int M = (order + 1) * (order + 1);
  if (y.size() != 2 * M) throw std::invalid_argument("from_flat: size does not match order");
  SpectralState s(order);
  s.t = t;
  for (int j = 0; j <= order; ++j) {
    for (int k = 0; k <= order; ++k) {
      s.mu1(j, k) = y[j * (order + 1) + k];
      s.mu2(j, k) = y[M + j * (order + 1) + k];
    }
  }
  return s;
}

double evaluate(const InitialDescriptor& ic, double x, double y) {
  struct Visitor {
    double x, y;
    double operator()(const ConstantIC& c) const { return c.value; }
    double operator()(const CosineIC& c) const {
      double s = c.offset;
      for (const CosineTerm& t : c.terms) s += t.amp * std::cos(t.j * x) * std::cos(t.k * y);
      return s;
    }
    double operator()(const GaussianIC& g) const {
      const double r2 = (x - g.cx) * (x - g.cx) + (y - g.cy) * (y - g.cy);
      return g.offset + g.amp * std::exp(-r2 / (2.0 * g.sigma * g.sigma));
    }
  };
  return std::visit(Visitor{x, y}, ic);
}

namespace {

Field sample(const InitialDescriptor& ic, int N) {
  Field f(N, N);
  for (int iy = 0; iy < N; ++iy) {
    for (int ix = 0; ix < N; ++ix) f(ix, iy) = evaluate(ic, grid_node(ix, N), grid_node(iy, N));
  }
  return f;
}

void require_nonnegative(const InitialDescriptor& ic, int N, const char* species) {
  bool negative = false;
  if (const auto* c = std::get_if<ConstantIC>(&ic)) {
    negative = c->value < 0.0;
  } else if (const auto* g = std::get_if<GaussianIC>(&ic)) {
    if (!(g->sigma > 0.0)) throw std::invalid_argument("gaussian initial condition needs sigma > 0");
    negative = g->offset < 0.0 || g->offset + std::min(0.0, g->amp) < 0.0;
  } else {
    negative = sample(ic, N).minCoeff() < 0.0;
  }
  if (negative) throw std::invalid_argument(std::string("initial ") + species + " must be nonnegative");
}

}  // namespace

Coeffs project(const InitialDescriptor& ic, int order) {
  if (order < 0) throw std::invalid_argument("project: order must be >= 0");
  Coeffs mu = Coeffs::Zero(order + 1, order + 1);
  if (const auto* c = std::get_if<ConstantIC>(&ic)) {
    mu(0, 0) = c->value / (Basis::axis_norm(0) * Basis::axis_norm(0));
  } else if (const auto* c = std::get_if<CosineIC>(&ic)) {
    mu(0, 0) = c->offset / (Basis::axis_norm(0) * Basis::axis_norm(0));
    for (const CosineTerm& t : c->terms) {
      if (t.j < 0 || t.k < 0) throw std::invalid_argument("cosine term indices must be >= 0");
      if (t.j > order || t.k > order) continue;
      mu(t.j, t.k) += t.amp / (Basis::axis_norm(t.j) * Basis::axis_norm(t.k));
    }
  } else {
    const int N = 4 * (order + 1);
    mu = analyze(sample(ic, N), order);
  }
  return mu;
}

InitialProjection project_initial(const Field& u0, const Field& v0, int order) {
  if (u0.rows() != v0.rows() || u0.cols() != v0.cols()) {
    throw std::invalid_argument("project_initial: u0 and v0 shapes differ");
  }
  if (u0.size() > 0 && (u0.minCoeff() < 0.0 || v0.minCoeff() < 0.0)) {
    throw std::invalid_argument("project_initial: initial fields must be nonnegative");
  }
  InitialProjection out;
  out.state = SpectralState(order);
  out.state.mu1 = analyze(u0, order);
  out.state.mu2 = analyze(v0, order);
  const auto [u, v] = synthesize(out.state, 4 * (order + 1));
  out.min_u = u.minCoeff();
  out.min_v = v.minCoeff();
  return out;
}

InitialProjection project_initial(const InitialDescriptor& u0, const InitialDescriptor& v0, int order) {
  const int N = 4 * (order + 1);
  require_nonnegative(u0, N, "u");
  require_nonnegative(v0, N, "v");
  InitialProjection out;
  out.state = SpectralState(order);
  out.state.mu1 = project(u0, order);
  out.state.mu2 = project(v0, order);
  const auto [u, v] = synthesize(out.state, N);
  out.min_u = u.minCoeff();
  out.min_v = v.minCoeff();
  return out;
}

}  // namespace skt
