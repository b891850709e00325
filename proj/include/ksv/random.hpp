#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "ksv/numkernel.hpp"

namespace ksv {

/// splitmix64 finalizer; used to derive independent per-instance seeds.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  std::uint64_t next() { return engine_(); }

  cplx gaussian() { return {normal(), normal()}; }
  CMatrix ginibre(Eigen::Index rows, Eigen::Index cols);
  CVector gaussian_vector(Eigen::Index n);
  CMatrix hermitian(Eigen::Index n);
  /// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
  CMatrix unitary(Eigen::Index n);
  /// Positive definite matrix with eigenvalues in [lo, hi].
  CMatrix positive_definite(Eigen::Index n, double lo = 0.5, double hi = 2.0);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ksv
