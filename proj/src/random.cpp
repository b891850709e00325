#include "ksv/random.hpp"

#include <cmath>

namespace ksv {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return mix_seed(mix_seed(master ^ h) + index);
}

CMatrix Rng::ginibre(Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gaussian() * M_SQRT1_2;
  return m;
}

CVector Rng::gaussian_vector(Eigen::Index n) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian() * M_SQRT1_2;
  return v;
}

CMatrix Rng::hermitian(Eigen::Index n) {
  CMatrix g = ginibre(n, n);
  return 0.5 * (g + g.adjoint());
}

CMatrix Rng::unitary(Eigen::Index n) {
  if (n == 0) return CMatrix(0, 0);
  CMatrix g = ginibre(n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

CMatrix Rng::positive_definite(Eigen::Index n, double lo, double hi) {
  CMatrix u = unitary(n);
  RVector ev(n);
  for (Eigen::Index i = 0; i < n; ++i) ev(i) = uniform(lo, hi);
  return u * ev.cast<cplx>().asDiagonal() * u.adjoint();
}

}  // namespace ksv
