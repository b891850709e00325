#include "kernels_impl.hpp"

namespace ksv::kernels {

std::vector<CMatrix> ksgns_pairing(const AlgebraShape& a, const std::vector<CMatrix>& module_pairing,
                                   const std::vector<CMatrix>& images, Exec exec) {
  if (exec == Exec::Serial) return reference::ksgns_pairing(a, module_pairing, images);
  const int da = a.dim();
  const int nb = static_cast<int>(module_pairing.size());
  const int de = nb == 0 ? 0 : static_cast<int>(module_pairing.front().rows());
  std::vector<CMatrix> out(nb, CMatrix::Zero(da * de, da * de));
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < nb; ++b)
    for (int p = 0; p < da; ++p)
      for (int p2 = 0; p2 < da; ++p2) {
        const int u = star_product_index(a, p, p2);
        if (u >= 0) out[b].block(p * de, p2 * de, de, de).noalias() = module_pairing[b] * images[u];
      }
  return out;
}

std::vector<CMatrix> tensor_pairing(const std::vector<CMatrix>& e_pairing, const std::vector<CMatrix>& f_pairing,
                                    const std::vector<CMatrix>& rep, Exec exec) {
  if (exec == Exec::Serial) return reference::tensor_pairing(e_pairing, f_pairing, rep);
  const Eigen::Index de = e_pairing.empty() ? 0 : e_pairing.front().rows();
  const Eigen::Index df = f_pairing.empty() ? 0 : f_pairing.front().rows();
  const int ng = static_cast<int>(f_pairing.size());
  const int nb = static_cast<int>(e_pairing.size());
  std::vector<CMatrix> out(ng, CMatrix::Zero(de * df, de * df));
#pragma omp parallel for schedule(dynamic)
  for (int g = 0; g < ng; ++g)
    for (int b = 0; b < nb; ++b) {
      const CMatrix right = f_pairing[g] * rep[b];
      for (Eigen::Index i = 0; i < de; ++i)
        for (Eigen::Index i2 = 0; i2 < de; ++i2) {
          const cplx c = e_pairing[b](i, i2);
          if (c != cplx(0)) out[g].block(i * df, i2 * df, df, df) += c * right;
        }
    }
  return out;
}

CMatrix choi_matrix(const std::vector<CMatrix>& blocks, int n, Exec exec) {
  if (exec == Exec::Serial) return reference::choi_matrix(blocks, n);
  const Eigen::Index d = blocks.empty() ? 0 : blocks.front().rows();
  CMatrix out(n * d, n * d);
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) out.block(k * d, l * d, d, d) = blocks[k * n + l];
  return out;
}

}  // namespace ksv::kernels
