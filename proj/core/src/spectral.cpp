#include "sktspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

namespace skt {

namespace {

constexpr double kPi = std::numbers::pi;

// int_0^pi cos(m x) cos(c x) dx for m, c >= 0.
double cos_pair_integral(int m, int c) {
  if (m != c) return 0.0;
  return m == 0 ? kPi : 0.5 * kPi;
}

// Normalised 1-D factors for one selection-rule triple (a, b, c):
//   M = int C_a C_b C_c,  S = int C_a S_b S_c with C_j = c_j cos(jx), S_j = c_j sin(jx).
struct AxisTriple {
  int a;
  int b;
  double M;
  double S;
};

std::vector<std::vector<AxisTriple>> axis_triples(int n) {
  std::vector<std::vector<AxisTriple>> lists(n + 1);
  for (int c = 0; c <= n; ++c) {
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        if (c != a + b && c != std::abs(a - b)) continue;
        const double norm = Basis::axis_norm(a) * Basis::axis_norm(b) * Basis::axis_norm(c);
        const double M = 0.5 * norm * (cos_pair_integral(a + b, c) + cos_pair_integral(std::abs(a - b), c));
        const double S = 0.5 * norm * (cos_pair_integral(std::abs(b - c), a) - cos_pair_integral(b + c, a));
        lists[c].push_back({a, b, M, S});
      }
    }
  }
  return lists;
}

constexpr char kCacheMagic[8] = {'S', 'K', 'T', 'T', 'N', 'S', 'R', '\0'};
constexpr std::uint32_t kCacheVersion = 1;

void write_triple(std::ofstream& out, const SparseTriple& t) {
  const std::uint64_t n_off = t.offsets().size();
  const std::uint64_t n_ent = t.entries().size();
  out.write(reinterpret_cast<const char*>(&n_off), sizeof n_off);
  for (std::size_t o : t.offsets()) {
    const std::uint64_t v = o;
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  out.write(reinterpret_cast<const char*>(&n_ent), sizeof n_ent);
  for (const TripleEntry& e : t.entries()) {
    const std::int32_t a = e.a, b = e.b;
    out.write(reinterpret_cast<const char*>(&a), sizeof a);
    out.write(reinterpret_cast<const char*>(&b), sizeof b);
    out.write(reinterpret_cast<const char*>(&e.value), sizeof e.value);
  }
}

std::optional<SparseTriple> read_triple(std::ifstream& in, int order) {
  const std::size_t modes = static_cast<std::size_t>(order + 1) * (order + 1);
  std::uint64_t n_off = 0;
  if (!in.read(reinterpret_cast<char*>(&n_off), sizeof n_off) || n_off != modes + 1) return std::nullopt;
  std::vector<std::size_t> offsets(n_off);
  for (auto& o : offsets) {
    std::uint64_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) return std::nullopt;
    o = v;
  }
  std::uint64_t n_ent = 0;
  if (!in.read(reinterpret_cast<char*>(&n_ent), sizeof n_ent) || offsets.back() != n_ent) return std::nullopt;
  std::vector<TripleEntry> entries(n_ent);
  for (auto& e : entries) {
    std::int32_t a = 0, b = 0;
    if (!in.read(reinterpret_cast<char*>(&a), sizeof a) || !in.read(reinterpret_cast<char*>(&b), sizeof b) ||
        !in.read(reinterpret_cast<char*>(&e.value), sizeof e.value)) {
      return std::nullopt;
    }
    e.a = a;
    e.b = b;
  }
  return SparseTriple(order, std::move(offsets), std::move(entries));
}

}  // namespace

Basis::Basis(int order) : n_(order) {
  if (order < 0) throw std::invalid_argument("Basis: order must be >= 0");
}

double Basis::axis_norm(int j) { return j == 0 ? 1.0 / std::sqrt(kPi) : std::sqrt(2.0 / kPi); }

double Basis::eval(Mode m, double x, double y) {
  return axis_norm(m.j) * axis_norm(m.k) * std::cos(m.j * x) * std::cos(m.k * y);
}

std::array<double, 2> Basis::grad(Mode m, double x, double y) {
  const double c = axis_norm(m.j) * axis_norm(m.k);
  return {-c * m.j * std::sin(m.j * x) * std::cos(m.k * y), -c * m.k * std::cos(m.j * x) * std::sin(m.k * y)};
}

double grid_node(int i, int N) { return (i + 0.5) * kPi / N; }

SparseTriple::SparseTriple(int order, std::vector<std::size_t> offsets, std::vector<TripleEntry> entries)
    : n_(order), offsets_(std::move(offsets)), entries_(std::move(entries)) {
  const std::size_t modes = static_cast<std::size_t>(order + 1) * (order + 1);
  if (offsets_.size() != modes + 1 || offsets_.back() != entries_.size()) {
    throw std::invalid_argument("SparseTriple: inconsistent offsets");
  }
}

std::span<const TripleEntry> SparseTriple::row(int out) const {
  return {entries_.data() + offsets_[out], offsets_[out + 1] - offsets_[out]};
}

double SparseTriple::at(Mode a, Mode b, Mode out) const {
  const int stride = n_ + 1;
  const int fa = a.j * stride + a.k, fb = b.j * stride + b.k;
  for (const TripleEntry& e : row(out.j * stride + out.k)) {
    if (e.a == fa && e.b == fb) return e.value;
  }
  return 0.0;
}

TripleTensors build_tensors(int order) {
  if (order < 0) throw std::invalid_argument("build_tensors: order must be >= 0");
  const int stride = order + 1;
  const auto lists = axis_triples(order);

  std::vector<std::size_t> mass_off{0}, stiff_off{0};
  std::vector<TripleEntry> mass, stiff;
  mass.reserve(mass3_nonzero_count(order));

  for (int jt = 0; jt <= order; ++jt) {
    for (int kt = 0; kt <= order; ++kt) {
      for (const AxisTriple& x : lists[jt]) {
        for (const AxisTriple& y : lists[kt]) {
          const int a = x.a * stride + y.a;
          const int b = x.b * stride + y.b;
          mass.push_back({a, b, x.M * y.M});
          const double s = double(x.b * jt) * x.S * y.M + double(y.b * kt) * x.M * y.S;
          if (s != 0.0) stiff.push_back({a, b, s});
        }
      }
      mass_off.push_back(mass.size());
      stiff_off.push_back(stiff.size());
    }
  }
  return {order, SparseTriple(order, std::move(mass_off), std::move(mass)),
          SparseTriple(order, std::move(stiff_off), std::move(stiff))};
}

std::size_t mass3_nonzero_count(int order) {
  const std::size_t n = static_cast<std::size_t>(order);
  const std::size_t t = (n + 1) * (n + 2) / 2 + (n + 1) * (n + 1) - (2 * n + 1);
  return t * t;
}

namespace {

Eigen::MatrixXd axis_matrix(int N, int order) {
  Eigen::MatrixXd B(N, order + 1);
  for (int i = 0; i < N; ++i) {
    const double x = grid_node(i, N);
    for (int j = 0; j <= order; ++j) B(i, j) = Basis::axis_norm(j) * std::cos(j * x);
  }
  return B;
}

}  // namespace

Field synthesize(const Coeffs& mu, int grid) {
  const int order = static_cast<int>(mu.rows()) - 1;
  if (mu.rows() != mu.cols()) throw std::invalid_argument("synthesize: coefficient array must be square");
  if (grid < order + 1) throw std::invalid_argument("synthesize: grid must have at least n+1 points per axis");
  const Eigen::MatrixXd B = axis_matrix(grid, order);
  return B * mu * B.transpose();
}

std::pair<Field, Field> synthesize(const SpectralState& state, int grid) {
  return {synthesize(state.mu1, grid), synthesize(state.mu2, grid)};
}

Coeffs analyze(const Field& field, int order) {
  if (field.rows() != field.cols()) throw std::invalid_argument("analyze: field must be square");
  const int N = static_cast<int>(field.rows());
  if (N < 2 * (order + 1)) {
    throw std::invalid_argument("analyze: resolution " + std::to_string(N) + " too low for order " +
                                std::to_string(order) + " (need >= 2(n+1))");
  }
  const Eigen::MatrixXd B = axis_matrix(N, order);
  const double h = kPi / N;
  return (B.transpose() * field * B) * (h * h);
}

void write_tensor_cache(const std::filesystem::path& path, const TripleTensors& tensors) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open tensor cache for writing: " + path.string());
  out.write(kCacheMagic, sizeof kCacheMagic);
  const std::uint32_t version = kCacheVersion;
  const std::int32_t n = tensors.n;
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  write_triple(out, tensors.mass3);
  write_triple(out, tensors.stiff3);
  if (!out) throw std::runtime_error("failed writing tensor cache: " + path.string());
}

std::optional<TripleTensors> read_tensor_cache(const std::filesystem::path& path, int order) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[sizeof kCacheMagic] = {};
  std::uint32_t version = 0;
  std::int32_t n = -1;
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + sizeof magic, kCacheMagic)) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(&version), sizeof version) || version != kCacheVersion) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(&n), sizeof n) || n != order) return std::nullopt;
  auto mass = read_triple(in, order);
  if (!mass) return std::nullopt;
  auto stiff = read_triple(in, order);
  if (!stiff) return std::nullopt;
  return TripleTensors{order, std::move(*mass), std::move(*stiff)};
}

}  // namespace skt
