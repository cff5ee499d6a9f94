#pragma once

#include <cstdint>
#include <random>

namespace skt::detail {

// std::uniform_real_distribution is implementation-defined; this is not, so
// seeded samplers give identical draws on every standard library.
class Uniform01 {
 public:
  explicit Uniform01(std::uint64_t seed) : engine_(seed) {}

  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace skt::detail
