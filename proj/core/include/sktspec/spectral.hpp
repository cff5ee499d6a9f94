#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace skt {

/// Coefficients mu(j, k) of the cosine expansion, (n+1) x (n+1).
using Coeffs = Eigen::MatrixXd;

/// Point values on the N x N midpoint grid x_i = (i + 1/2) pi / N over
/// [0, pi]^2. Indexed field(ix, iy).
using Field = Eigen::MatrixXd;

struct Mode {
  int j = 0;
  int k = 0;
  friend bool operator==(const Mode&, const Mode&) = default;
};

/// Neumann cosine basis on [0, pi]^2:
///   phi_jk(x, y) = c_j c_k cos(j x) cos(k y),  c_0 = 1/sqrt(pi), c_j = sqrt(2/pi),
/// orthonormal in L^2 with -Laplace phi_jk = (j^2 + k^2) phi_jk.
class Basis {
 public:
  explicit Basis(int order);

  [[nodiscard]] int order() const { return n_; }
  [[nodiscard]] int per_axis() const { return n_ + 1; }
  [[nodiscard]] int size() const { return (n_ + 1) * (n_ + 1); }

  [[nodiscard]] int flat(Mode m) const { return m.j * (n_ + 1) + m.k; }
  [[nodiscard]] Mode mode(int flat) const { return {flat / (n_ + 1), flat % (n_ + 1)}; }

  static double axis_norm(int j);
  [[nodiscard]] static double eigenvalue(Mode m) { return double(m.j * m.j + m.k * m.k); }

  [[nodiscard]] static double eval(Mode m, double x, double y);
  [[nodiscard]] static std::array<double, 2> grad(Mode m, double x, double y);

 private:
  int n_;
};

/// Midpoint node coordinate i on an N-point axis over [0, pi].
double grid_node(int i, int N);

struct TripleEntry {
  int a;  ///< flat index of the first mode (l, m)
  int b;  ///< flat index of the second mode (l~, m~)
  double value;
};

/// Coordinate-list storage of a three-mode integral, grouped by the third
/// (output/test) mode.
class SparseTriple {
 public:
  SparseTriple() = default;
  SparseTriple(int order, std::vector<std::size_t> offsets, std::vector<TripleEntry> entries);

  [[nodiscard]] int order() const { return n_; }
  [[nodiscard]] std::size_t nonzeros() const { return entries_.size(); }
  [[nodiscard]] std::span<const TripleEntry> row(int out) const;
  /// Value for the ordered triple (a, b, out); zero when not stored.
  [[nodiscard]] double at(Mode a, Mode b, Mode out) const;

  [[nodiscard]] const std::vector<std::size_t>& offsets() const { return offsets_; }
  [[nodiscard]] const std::vector<TripleEntry>& entries() const { return entries_; }

 private:
  int n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<TripleEntry> entries_;
};

/// mass3(A, B, J)  = int phi_A phi_B phi_J
/// stiff3(A, B, J) = int phi_A grad phi_B . grad phi_J
/// stiff3 is symmetric in (B, J) but not in (A, B): A is the coefficient
/// field, B the differentiated field, J the test function.
struct TripleTensors {
  int n = 0;
  SparseTriple mass3;
  SparseTriple stiff3;
};

TripleTensors build_tensors(int order);

/// Number of stored mass3 entries, T(n)^2 with
/// T(n) = (n+1)(n+2)/2 + (n+1)^2 - (2n+1) one-dimensional selection triples.
std::size_t mass3_nonzero_count(int order);

struct SpectralState {
  Coeffs mu1;
  Coeffs mu2;
  double t = 0.0;

  SpectralState() = default;
  explicit SpectralState(int order)
      : mu1(Coeffs::Zero(order + 1, order + 1)), mu2(Coeffs::Zero(order + 1, order + 1)) {}

  [[nodiscard]] int order() const { return static_cast<int>(mu1.rows()) - 1; }
};

Field synthesize(const Coeffs& mu, int grid);
std::pair<Field, Field> synthesize(const SpectralState& state, int grid);

/// L^2 projection by midpoint quadrature; exact for fields band-limited to
/// modes below 2N - n. Requires a square field with N >= 2(n + 1).
Coeffs analyze(const Field& field, int order);

/// Binary cache of build_tensors output. Reads return nothing when the file
/// is absent, truncated, of another version or another order.
void write_tensor_cache(const std::filesystem::path& path, const TripleTensors& tensors);
std::optional<TripleTensors> read_tensor_cache(const std::filesystem::path& path, int order);

}  // namespace skt
