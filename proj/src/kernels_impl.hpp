#pragma once

#include "ksv/kernels.hpp"

namespace ksv::kernels {

/// Index of u_p* u_q as a matrix unit, or −1 when the product vanishes.
inline int star_product_index(const AlgebraShape& a, int p, int q) {
  const auto up = a.unit(p), uq = a.unit(q);
  if (up.block != uq.block || up.row != uq.row) return -1;
  return a.index(up.block, up.col, uq.col);
}

namespace reference {
std::vector<CMatrix> ksgns_pairing(const AlgebraShape& a, const std::vector<CMatrix>& module_pairing,
                                   const std::vector<CMatrix>& images);
std::vector<CMatrix> tensor_pairing(const std::vector<CMatrix>& e_pairing, const std::vector<CMatrix>& f_pairing,
                                    const std::vector<CMatrix>& rep);
CMatrix choi_matrix(const std::vector<CMatrix>& blocks, int n);
}  // namespace reference

}  // namespace ksv::kernels
