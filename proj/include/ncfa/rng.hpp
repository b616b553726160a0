#pragma once

// Counter-style deterministic randomness: splitmix64 streams keyed by hashed
// (master seed, n, trial, component) tuples, Gaussians via Box-Muller.
// Determinism is promised per build; tables carry the generator tag below.

#include <cmath>
#include <complex>
#include <cstdint>

#include "ncfa/linalg.hpp"

namespace ncfa {

inline constexpr const char* kGeneratorTag = "splitmix64-boxmuller-1";

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  return splitmix64_next(s);
}

// Seed of the independent stream for (master, n, trial, component).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n, std::uint64_t trial,
                                 std::uint64_t component = 0) {
  return seed_mix(seed_mix(seed_mix(master, n), trial), component);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // uniform in (0, 1]
  double uniform01() {
    std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  std::complex<double> gaussian_complex() {
    // independent real and imaginary parts of variance 1/2 (E|z|^2 = 1)
    return std::complex<double>(gaussian() * 0.7071067811865475244, gaussian() * 0.7071067811865475244);
  }

  Vec gaussian_vector(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian_complex();
    return v;
  }

  Mat gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gaussian_complex();
    return m;
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ncfa
