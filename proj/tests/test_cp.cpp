#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "ksv/cp.hpp"
#include "ksv/error.hpp"
#include "ksv/generators.hpp"
#include "ksv/random.hpp"
#include "oracles.hpp"

using namespace ksv;

namespace {

// A = M_n acting on E = ℂ^d over B = ℂ with images X(k, l) of E_kl.
template <class F>
CPMap scalar_cp(int n, int d, F&& image) {
  const AlgebraShape a({n});
  CPMap phi{a, standard_module(AlgebraShape({1}), d), {}};
  for (int j = 0; j < a.dim(); ++j) {
    const auto u = a.unit(j);
    phi.images.push_back(image(u.row, u.col));
  }
  return phi;
}

struct Sample {
  CPMap phi;
  HilbertModule e;
};

Sample sample(std::uint64_t seed) {
  Rng rng(seed);
  SizeCaps caps;
  const AlgebraShape a = random_shape(rng, caps), b = random_shape(rng, caps);
  const HilbertModule e = random_module(b, rng, 6);
  return {random_cp(a, e, rng.next()), e};
}

// least-squares distance of x from span(basis)
double distance_to_span(const CMatrix& x, const std::vector<CMatrix>& basis) {
  if (basis.empty()) return x.norm();
  CMatrix m(x.size(), static_cast<Eigen::Index>(basis.size()));
  for (size_t k = 0; k < basis.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = basis[k].reshaped();
  const CVector c = m.completeOrthogonalDecomposition().solve(CVector(x.reshaped()));
  return (m * c - x.reshaped()).norm();
}

}  // namespace

TEST_SUITE("cp") {

TEST_CASE("transpose is not completely positive") {
  const CPMap t = scalar_cp(2, 2, [](int k, int l) { return oracle::unit(2, l, k); });
  CMatrix choi = CMatrix::Zero(4, 4);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) choi.block(2 * k, 2 * l, 2, 2) = oracle::unit(2, l, k);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(choi);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0));

  const CpReport r = check_cp(t);
  CHECK_FALSE(r.is_cp);
  CHECK(r.min_choi_eigenvalue[0] == doctest::Approx(es.eigenvalues()(0)));
}

TEST_CASE("homomorphisms and Choi-built maps are CP") {
  const CPMap id = scalar_cp(2, 2, [](int k, int l) { return oracle::unit(2, k, l); });
  CHECK(check_cp(id).is_cp);
  CHECK(check_correspondence(id).pass);
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    const CMatrix g = rng.ginibre(6, 4);
    const CMatrix c = g * g.adjoint();  // PSD Choi matrix on ℂ² ⊗ ℂ³
    const CPMap phi = scalar_cp(2, 3, [&](int k, int l) { return CMatrix(c.block(3 * k, 3 * l, 3, 3)); });
    CHECK(check_cp(phi).is_cp);
    const CPMap rep = random_correspondence(AlgebraShape({2}), AlgebraShape({1, 2}), s, 6);
    CHECK(check_cp(rep).is_cp);
    CHECK(check_correspondence(rep).pass);
  }
}

TEST_CASE("non B-linear images are rejected") {
  const HilbertModule e = algebra_module(AlgebraShape({2}));
  Rng rng(3);
  CPMap bad{AlgebraShape({1}), e, {rng.ginibre(4, 4)}};
  try {
    check_cp(bad);
    FAIL("expected NonLinearMap");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NonLinearMap);
  }
}

TEST_CASE("random_cp") {
  const Sample s1 = sample(7);
  Rng rng(7);
  SizeCaps caps;
  const AlgebraShape a = random_shape(rng, caps);
  const CPMap x = random_cp(a, s1.e, 99), y = random_cp(a, s1.e, 99);
  for (size_t k = 0; k < x.images.size(); ++k) CHECK((x.images[k] - y.images[k]).norm() == 0.0);

  for (std::uint64_t s = 0; s < 30; ++s) {
    const Sample t = sample(s + 10);
    CHECK(check_cp(t.phi).is_cp);
    CHECK(hermiticity_residual(t.phi) <= 1e-8 * (1 + t.phi.scale()));
    const CMatrix one = realize(t.phi(AlgebraElement::unit(t.phi.algebra)), t.e, t.e);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (one + one.adjoint()));
    CHECK(es.eigenvalues()(0) >= -1e-8);
    const CPMap c = conjugate(t.phi, random_module_unitary(t.e, s), random_automorphism(t.phi.algebra, s));
    CHECK(check_cp(c).is_cp);
  }
}

TEST_CASE("intertwiner_space") {
  for (std::uint64_t s = 0; s < 15; ++s) {
    const Sample t = sample(s + 50);
    const int d = t.e.dim();
    const auto same = intertwiner_space(t.phi, t.phi, Automorphism::identity(t.phi.algebra));
    CHECK(distance_to_span(CMatrix::Identity(d, d), same) < 1e-8);

    const CMatrix w = random_module_unitary(t.e, s);
    const Automorphism alpha = random_automorphism(t.phi.algebra, s + 1);
    const CPMap phi2 = conjugate(t.phi, w, alpha);
    const auto space = intertwiner_space(t.phi, phi2, alpha);
    CHECK(distance_to_span(w, space) <= 1e-8 * (1 + w.norm()));
    for (const auto& eta : space) {
      const MorphismReport r = check_morphism({{t.e, t.e, eta}, alpha}, t.phi, phi2);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("irreducible correspondence has a one-dimensional commutant") {
  const CPMap id = scalar_cp(2, 2, [](int k, int l) { return oracle::unit(2, k, l); });
  // kernel of X ↦ (E_kl X − X E_kl)_kl over vec(X)
  CMatrix sys(16, 4);
  for (int j = 0; j < 4; ++j) {
    const CMatrix& u = id.images[j];
    sys.middleRows(4 * j, 4) = kron(CMatrix::Identity(2, 2), u) - kron(u.transpose(), CMatrix::Identity(2, 2));
  }
  const int oracle_dim = 4 - oracle::svd_rank(sys);
  CHECK(oracle_dim == 1);
  CHECK(static_cast<int>(intertwiner_space(id, id, Automorphism::identity(id.algebra)).size()) == oracle_dim);
}

TEST_CASE("check_morphism") {
  const Sample t = sample(80);
  const Intertwiner id = identity_intertwiner(t.e, t.phi.algebra);
  const MorphismReport r = check_morphism(id, t.phi, t.phi);
  CHECK(r.pass);
  CHECK(r.intertwining < 1e-12);

  for (std::uint64_t s = 0; s < 20; ++s) {
    const Sample u = sample(s + 90);
    Rng rng(s);
    const MorphismChain ch = random_chain(u.phi, 1, 2, rng);
    const Intertwiner& m = ch.arrows[0];
    CHECK(check_morphism(m, ch.phis[0], ch.phis[1]).pass);
    // push η off the intertwiner space along a B-linear direction
    const HilbertModule sum = direct_sum(m.eta.source, m.eta.target);
    CMatrix off = commutant_average(sum, rng.ginibre(sum.dim(), sum.dim()))
                      .bottomLeftCorner(m.eta.target.dim(), m.eta.source.dim());
    const auto space = intertwiner_space(ch.phis[0], ch.phis[1], m.alpha);
    for (const auto& b : space) {
      const cplx c = (b.adjoint() * off).trace() / (b.adjoint() * b).trace();
      off -= c * b;
    }
    if (off.norm() < 1e-6) continue;
    off *= 0.1 / realized_norm(off, m.eta.source, m.eta.target);
    const Intertwiner bad{{m.eta.source, m.eta.target, m.eta.matrix + off}, m.alpha};
    const MorphismReport rb = check_morphism(bad, ch.phis[0], ch.phis[1]);
    CHECK_FALSE(rb.pass);
    CHECK(std::max({rb.intertwining, rb.adjoint_side, rb.commutation}) >= 0.01 * std::min(1.0, ch.phis[0].scale()));
  }
}

TEST_CASE("hom_pseudometric") {
  const AlgebraShape a({2});
  const HilbertModule c3 = standard_module(AlgebraShape({1}), 3);
  Rng rng(4);
  const CMatrix eta = rng.ginibre(3, 3);
  const Automorphism alpha = random_automorphism(a, 4);
  const Intertwiner m1{{c3, c3, eta}, alpha};
  const CVector x = rng.gaussian_vector(3);
  const AlgebraElement el = AlgebraElement::random(a, 5);
  CHECK(hom_pseudometric(m1, m1, x, el) == 0.0);
  const double delta = 0.37;
  const Intertwiner m2{{c3, c3, eta + delta * CMatrix::Identity(3, 3)}, alpha};
  CHECK(hom_pseudometric(m1, m2, x, el) == doctest::Approx(delta * x.norm()).epsilon(1e-12));

  for (int t = 0; t < 100; ++t) {
    std::vector<Intertwiner> ms;
    for (int k = 0; k < 3; ++k)
      ms.push_back({{c3, c3, rng.ginibre(3, 3)}, random_automorphism(a, rng.next())});
    const CVector y = rng.gaussian_vector(3);
    const AlgebraElement b = AlgebraElement::random(a, rng.next());
    CHECK(hom_pseudometric(ms[0], ms[2], y, b) <=
          hom_pseudometric(ms[0], ms[1], y, b) + hom_pseudometric(ms[1], ms[2], y, b) + 1e-12);
  }
}

TEST_CASE("Bounded 1 and Properties lemmas on random morphisms") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Sample u = sample(s + 300);
    Rng rng(s + 300);
    const MorphismChain ch = random_chain(u.phi, 1, 2, rng);
    const Intertwiner& m = ch.arrows[0];
    for (int n = 1; n <= 4; ++n) {
      std::vector<AlgebraElement> as;
      std::vector<CVector> xs, ys;
      for (int i = 0; i < n; ++i) {
        as.push_back(AlgebraElement::random(u.phi.algebra, rng.next()));
        xs.push_back(rng.gaussian_vector(m.eta.source.dim()));
        ys.push_back(rng.gaussian_vector(m.eta.target.dim()));
      }
      CHECK(bounded_family_excess(m, ch.phis[0], ch.phis[1], as, xs, ys) <= 1e-8);
      const PropertiesReport p = properties_lemma(m, ch.phis[0], ch.phis[1], as[0]);
      CHECK(p.adjoint_side <= 1e-8);
      CHECK(p.commutation <= 1e-8);
      CHECK(p.lower_positivity <= 1e-8);
      CHECK(p.upper_positivity <= 1e-8);
    }
  }
}

}
