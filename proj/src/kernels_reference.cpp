#include "kernels_impl.hpp"

namespace ksv::kernels::reference {

std::vector<CMatrix> ksgns_pairing(const AlgebraShape& a, const std::vector<CMatrix>& module_pairing,
                                   const std::vector<CMatrix>& images) {
  const int da = a.dim();
  const int de = module_pairing.empty() ? 0 : static_cast<int>(module_pairing.front().rows());
  std::vector<CMatrix> out(module_pairing.size(), CMatrix::Zero(da * de, da * de));
  for (size_t b = 0; b < module_pairing.size(); ++b)
    for (int p = 0; p < da; ++p)
      for (int p2 = 0; p2 < da; ++p2) {
        const int u = star_product_index(a, p, p2);
        if (u >= 0) out[b].block(p * de, p2 * de, de, de) = module_pairing[b] * images[u];
      }
  return out;
}

std::vector<CMatrix> tensor_pairing(const std::vector<CMatrix>& e_pairing, const std::vector<CMatrix>& f_pairing,
                                    const std::vector<CMatrix>& rep) {
  const Eigen::Index de = e_pairing.empty() ? 0 : e_pairing.front().rows();
  const Eigen::Index df = f_pairing.empty() ? 0 : f_pairing.front().rows();
  std::vector<CMatrix> out(f_pairing.size(), CMatrix::Zero(de * df, de * df));
  for (size_t g = 0; g < f_pairing.size(); ++g)
    for (size_t b = 0; b < e_pairing.size(); ++b) out[g] += kron(e_pairing[b], f_pairing[g] * rep[b]);
  return out;
}

CMatrix choi_matrix(const std::vector<CMatrix>& blocks, int n) {
  const Eigen::Index d = blocks.empty() ? 0 : blocks.front().rows();
  CMatrix out(n * d, n * d);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) out.block(k * d, l * d, d, d) = blocks[k * n + l];
  return out;
}

}  // namespace ksv::kernels::reference
