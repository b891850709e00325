#include <doctest.h>

#include "ksv/cp.hpp"
#include "ksv/generators.hpp"
#include "ksv/kernels.hpp"
#include "ksv/random.hpp"

using namespace ksv;

TEST_SUITE("kernels") {

TEST_CASE("serial and parallel kernels agree") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(s);
    SizeCaps caps;
    const AlgebraShape a = random_shape(rng, caps), b = random_shape(rng, caps);
    const HilbertModule e = random_module(b, rng, 6);
    const CPMap phi = random_cp(a, e, s);
    const auto ser = kernels::ksgns_pairing(a, e.data().pairing, phi.images, Exec::Serial);
    const auto par = kernels::ksgns_pairing(a, e.data().pairing, phi.images, Exec::Parallel);
    REQUIRE(ser.size() == par.size());
    for (size_t k = 0; k < ser.size(); ++k) CHECK((ser[k] - par[k]).norm() <= 1e-14 * (1 + ser[k].norm()));

    const CPMap pi = random_correspondence(b, random_shape(rng, caps), s, 12);
    const auto ts = kernels::tensor_pairing(e.data().pairing, pi.module.data().pairing, pi.images, Exec::Serial);
    const auto tp = kernels::tensor_pairing(e.data().pairing, pi.module.data().pairing, pi.images, Exec::Parallel);
    for (size_t k = 0; k < ts.size(); ++k) CHECK((ts[k] - tp[k]).norm() <= 1e-14 * (1 + ts[k].norm()));

    const int n = 3, d = 4;
    std::vector<CMatrix> blocks;
    for (int k = 0; k < n * n; ++k) blocks.push_back(rng.ginibre(d, d));
    const CMatrix cs = kernels::choi_matrix(blocks, n, Exec::Serial);
    CHECK((cs - kernels::choi_matrix(blocks, n, Exec::Parallel)).norm() == 0.0);
    CHECK((cs.block(1 * d, 2 * d, d, d) - blocks[1 * n + 2]).norm() == 0.0);
  }
}

TEST_CASE("pre-module pairing of A ⊗ E by definition") {
  // block (p, p') of entry β is P_β · φ(u_p* u_p')
  const AlgebraShape a({2});
  const HilbertModule e = standard_module(AlgebraShape({1}), 2);
  const CPMap phi = random_cp(a, e, 3);
  const auto pr = kernels::ksgns_pairing(a, e.data().pairing, phi.images, Exec::Serial);
  REQUIRE(pr.size() == 1);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      const AlgebraElement prod = AlgebraElement::matrix_unit(a, p).adjoint() * AlgebraElement::matrix_unit(a, q);
      CHECK((pr[0].block(2 * p, 2 * q, 2, 2) - phi(prod)).norm() < 1e-14);
    }
}

}
