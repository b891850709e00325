#include <doctest.h>

#include "ksv/error.hpp"
#include "ksv/generators.hpp"
#include "ksv/hilbert.hpp"
#include "ksv/random.hpp"
#include "ksv/tensor.hpp"
#include "oracles.hpp"

using namespace ksv;

namespace {

// x ∈ rect module as the list of its m_i × n_i blocks
std::vector<CMatrix> unpack(const CVector& x, const AlgebraShape& b, const std::vector<int>& mult) {
  std::vector<CMatrix> out;
  int off = 0;
  for (int i = 0; i < b.num_blocks(); ++i) {
    const int m = mult[i], n = b.block_size(i);
    CMatrix xi(m, n);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < n; ++c) xi(r, c) = x(off + r * n + c);
    out.push_back(xi);
    off += m * n;
  }
  return out;
}

PreModule scalar_pre(const CMatrix& g) {
  PreModule p;
  p.algebra = AlgebraShape({1});
  p.dim = static_cast<int>(g.rows());
  p.action = {CMatrix::Identity(p.dim, p.dim)};
  p.pairing = {g};
  return p;
}

HilbertModule some_module(std::uint64_t seed, int max_dim = 6) {
  Rng rng(seed);
  SizeCaps caps;
  const AlgebraShape b = random_shape(rng, caps);
  return random_module(b, rng, max_dim);
}

}  // namespace

TEST_SUITE("hilbert") {

TEST_CASE("rect module pairing matches x* H y blockwise") {
  Rng rng(1);
  const AlgebraShape b({1, 2});
  const std::vector<int> mult = {2, 1};
  const std::vector<CMatrix> h = {rng.positive_definite(2), rng.positive_definite(1)};
  const HilbertModule e = rect_module(b, mult, h);
  CHECK(e.dim() == 4);
  CHECK(check_premodule(e.data()).pass);
  for (int t = 0; t < 10; ++t) {
    const CVector x = rng.gaussian_vector(4), y = rng.gaussian_vector(4);
    const auto xs = unpack(x, b, mult), ys = unpack(y, b, mult);
    const AlgebraElement ip = e.inner(x, y);
    for (int i = 0; i < 2; ++i) CHECK((ip.block(i) - xs[i].adjoint() * h[i] * ys[i]).norm() < 1e-12);
    const AlgebraElement a = AlgebraElement::random(b, t);
    const auto xa = unpack(e.action_of(a) * x, b, mult);
    for (int i = 0; i < 2; ++i) CHECK((xa[i] - xs[i] * a.block(i)).norm() < 1e-12);
  }
}

TEST_CASE("quotient_by_null") {
  Rng rng(2);
  const CMatrix g = rng.positive_definite(3);
  const Quotient full = quotient_by_null(scalar_pre(g));
  CHECK(full.module.dim() == 3);
  CHECK((full.q * full.s - CMatrix::Identity(3, 3)).norm() < 1e-12);

  const Quotient zero = quotient_by_null(scalar_pre(CMatrix::Zero(3, 3)));
  CHECK(zero.module.dim() == 0);
  CHECK(zero.kernel.cols() == 3);

  CMatrix ones = CMatrix::Ones(2, 2);
  CHECK(oracle::svd_rank(ones) == 1);
  const Quotient one = quotient_by_null(scalar_pre(ones));
  CHECK(one.module.dim() == 1);
  const CVector z = one.kernel.col(0);
  CHECK(std::abs((z.adjoint() * ones * z)(0, 0)) < 1e-12);

  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng r(s + 30);
    const CMatrix x = r.ginibre(5, 2 + static_cast<int>(s % 3));
    const CMatrix gram = x * x.adjoint();
    const Quotient qt = quotient_by_null(scalar_pre(gram));
    CHECK(qt.module.dim() == oracle::svd_rank(gram));
    CHECK(herm_eig(qt.module.gram()).values(0) > 0.0);
    const double lmax = herm_eig(gram).values.maxCoeff();
    for (Eigen::Index k = 0; k < qt.kernel.cols(); ++k)
      CHECK(std::abs((qt.kernel.col(k).adjoint() * gram * qt.kernel.col(k))(0, 0)) <= 1e-8 * lmax);
  }
}

TEST_CASE("from_pre rejects singular Gram") {
  try {
    HilbertModule::from_pre(scalar_pre(CMatrix::Ones(2, 2)));
    FAIL("expected SingularGram");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::SingularGram);
  }
}

TEST_CASE("adjoint_map") {
  const HilbertModule e = some_module(3);
  const ModuleMap id = identity_map(e);
  CHECK((adjoint_map(id).matrix - id.matrix).norm() < 1e-10);

  const HilbertModule c2 = standard_module(AlgebraShape({1}), 3);
  Rng rng(4);
  const ModuleMap m{c2, c2, rng.ginibre(3, 3)};
  CHECK((adjoint_map(m).matrix - m.matrix.adjoint()).norm() < 1e-12);

  for (std::uint64_t s = 0; s < 30; ++s) {
    Rng r(s);
    const HilbertModule src = some_module(s * 2 + 100);
    const HilbertModule tgt2 = random_module(src.algebra(), r, 6);
    // B-linear maps: project a random matrix onto the commutant of E ⊕ F
    const HilbertModule sum = direct_sum(src, tgt2);
    const CMatrix big = commutant_average(sum, r.ginibre(sum.dim(), sum.dim()));
    const ModuleMap eta{src, tgt2, big.bottomLeftCorner(tgt2.dim(), src.dim())};
    CHECK(linearity_residual(eta) < 1e-10);
    const ModuleMap star = adjoint_map(eta);
    double worst = 0;
    for (int i = 0; i < src.dim(); ++i)
      for (int j = 0; j < tgt2.dim(); ++j) {
        const CVector ei = CVector::Unit(src.dim(), i), fj = CVector::Unit(tgt2.dim(), j);
        worst = std::max(worst, (tgt2.inner(eta.matrix * ei, fj) - src.inner(ei, star.matrix * fj)).norm());
      }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("module_operator_norm") {
  const HilbertModule e = some_module(5);
  CHECK(module_operator_norm(identity_map(e)) == doctest::Approx(1.0));
  CHECK(module_operator_norm(zero_map(e, e)) == 0.0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const HilbertModule f = some_module(s + 40);
    const ModuleMap eta{f, f, random_adjointable(f, s)};
    const ModuleMap ss = compose(adjoint_map(eta), eta);
    const double n = module_operator_norm(eta);
    CHECK(std::abs(n * n - module_operator_norm(ss)) <= 1e-8 * (1 + n * n));
  }
}

TEST_CASE("rank_one_operator") {
  Rng rng(6);
  const HilbertModule e = some_module(6);
  const CVector x = rng.gaussian_vector(e.dim()), y = rng.gaussian_vector(e.dim());
  CHECK(rank_one_operator(e, x, CVector::Zero(e.dim())).matrix.norm() == 0.0);

  const HilbertModule c3 = standard_module(AlgebraShape({1}), 3);
  const CVector u = rng.gaussian_vector(3), v = rng.gaussian_vector(3);
  CHECK((rank_one_operator(c3, u, v).matrix - u * v.adjoint()).norm() < 1e-12);

  for (int t = 0; t < 10; ++t) {
    const CVector z = rng.gaussian_vector(e.dim());
    const CVector direct = e.action_of(e.inner(y, z)) * x;
    CHECK((rank_one_operator(e, x, y).matrix * z - direct).norm() < 1e-10);
  }
  const ModuleMap th = rank_one_operator(e, x, y);
  CHECK((adjoint_map(th).matrix - rank_one_operator(e, y, x).matrix).norm() < 1e-8);
}

TEST_CASE("unitaries and Cauchy-Schwarz") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const HilbertModule e = some_module(s + 70);
    const ModuleMap w{e, e, random_module_unitary(e, s)};
    CHECK(unitarity_residual(w) < 1e-8);
    CHECK(linearity_residual(w) < 1e-8);
    Rng rng(s);
    const CVector x = rng.gaussian_vector(e.dim()), y = rng.gaussian_vector(e.dim());
    const double xy = std::abs(trace_functional(e.inner(x, y)));
    const double xx = trace_functional(e.inner(x, x)).real(), yy = trace_functional(e.inner(y, y)).real();
    CHECK(xy * xy <= xx * yy + 1e-8);
  }
}

TEST_CASE("adjoint uniqueness under perturbation") {
  const HilbertModule e = some_module(8);
  const ModuleMap eta{e, e, random_adjointable(e, 8)};
  const ModuleMap star = adjoint_map(eta);
  CHECK(adjoint_identity_residual(eta, star) < 1e-8);
  const ModuleMap wrong{e, e, star.matrix + 0.1 * random_adjointable(e, 9)};
  CHECK(adjoint_identity_residual(eta, wrong) > 1e-3);
}

TEST_CASE("zero-dimensional modules are legal") {
  const HilbertModule z = zero_module(AlgebraShape({2}));
  CHECK(z.dim() == 0);
  const ModuleMap id = identity_map(z);
  CHECK(module_operator_norm(id) == 0.0);
  CHECK(adjoint_map(id).matrix.size() == 0);
}

TEST_CASE("twisted module") {
  const AlgebraShape b({2});
  const HilbertModule bb = algebra_module(b);
  const Automorphism alpha = random_automorphism(b, 3);
  const TwistedModule tw = twist_unitary(bb, alpha);
  CHECK(tw.tensor.result.dim() == 4);
  CHECK(oracle::svd_rank(tw.tensor.result.gram()) == 4);

  const HilbertModule e = some_module(11);
  const Automorphism a2 = random_automorphism(e.algebra(), 12);
  const TwistedModule t2 = twist_unitary(e, a2);
  CHECK(alpha_linearity_residual(t2.u) < 1e-8);
  Rng rng(13);
  for (int k = 0; k < 50; ++k) {
    const CVector x = rng.gaussian_vector(t2.tensor.result.dim());
    CHECK(std::abs(e.norm(t2.u.matrix * x) - t2.tensor.result.norm(x)) < 1e-8);
  }

  const TwistedModule tid = twist_unitary(e, Automorphism::identity(e.algebra()));
  const ModuleMap iota = inclusion_map(tid.tensor);
  CHECK((tid.u.matrix - iota.matrix).norm() < 1e-8);
}

TEST_CASE("alpha transport") {
  const HilbertModule e = some_module(14);
  const Automorphism alpha = random_automorphism(e.algebra(), 15);
  const TwistedModule tw = twist_unitary(e, alpha);
  const int d = tw.tensor.result.dim();

  // U⁻¹ transports to the identity on E ⊗_α B
  const AlphaLinearMap uinv = alpha_untransport(identity_map(tw.tensor.result), tw);
  CHECK(alpha_linearity_residual(uinv) < 1e-8);
  CHECK((alpha_transport(uinv, tw).matrix - CMatrix::Identity(d, d)).norm() < 1e-8);

  // on B over itself, α acting on coordinates is an α-adjointable unitary
  const AlgebraShape b({1, 2});
  const HilbertModule bb = algebra_module(b);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Automorphism a = random_automorphism(b, s);
    const AlphaLinearMap t{bb, bb, a, a.matrix()};
    CHECK(alpha_linearity_residual(t) < 1e-10);
    const TwistedModule tb = twist_unitary(bb, a);
    const ModuleMap m = alpha_transport(t, tb);
    CHECK(linearity_residual(m) < 1e-8);
    CHECK(unitarity_residual(m) < 1e-8);
    const AlphaLinearMap back = alpha_untransport(m, tb);
    CHECK((back.matrix - t.matrix).norm() < 1e-8);
  }

  const AlphaLinearMap wrong{e, e, Automorphism::identity(e.algebra()), CMatrix::Identity(e.dim(), e.dim())};
  if (operator_norm(alpha.matrix() - CMatrix::Identity(alpha.matrix().rows(), alpha.matrix().cols())) > 1e-6)
    CHECK_THROWS_AS(alpha_transport(wrong, tw), Error);
}

}
